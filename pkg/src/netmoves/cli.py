"""Command-line front end.

File-in/file-out, deterministic: identical inputs produce byte-identical
output.  Rooted networks travel as extended Newick, unrooted ones as the
``u -- v`` edge-list format.  Printed move sequences reference node names
from each intermediate's canonical labeling, so they are stable across
runs and replayable with the ``replay`` verb.

Exit codes: 0 success, 1 operation error (message names the error class),
2 usage error.
"""
from __future__ import annotations

import hashlib
import re
import sys
from pathlib import Path

import click

from .canon import canonical_code, canonical_labeling
from .errors import (CompositionInvalid, ExceptionalNetwork, InvalidMove,
                     NotDistanceOne, PreconditionViolated, ProjectionBlocked,
                     ScaleLimitExceeded, StructureError, TierMismatch,
                     TooFewLeaves, Unrootable)
from .moves import (Move, apply_move, enumerate_moves, format_move,
                    parse_move)
from .network import Network, reticulation_number, validate
from .newick import (parse_edge_list, parse_enewick, write_edge_list,
                     write_enewick)
from .oracle import (build_move_graph, enumerate_tier, exact_distance,
                     maf_distance, move_graph_stats)
from .rewrite import decompose_tail_move, rewrite_head_move
from .sequence import find_sequence, replay_sequence
from .unrooted import (SprMove, UnrootedNetwork, apply_spr, decompose,
                       eliminate_terminal_components, is_rootable, root_at,
                       spr_sequence, underlying, unrooted_canonical_code,
                       unrooted_canonical_labeling)

_ERRORS = (CompositionInvalid, ExceptionalNetwork, InvalidMove, NotDistanceOne,
           PreconditionViolated, ProjectionBlocked, ScaleLimitExceeded,
           StructureError, TierMismatch, TooFewLeaves, Unrootable,
           OSError, SyntaxError, ValueError)


def _fail(exc: Exception) -> "click.exceptions.Exit":
    click.echo(f"{type(exc).__name__}: {exc}", err=True)
    return click.exceptions.Exit(1)


def _guarded(fn):
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except _ERRORS as exc:
            raise _fail(exc) from None
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _read(path: str) -> str:
    return Path(path).read_text()


def _is_edge_list(text: str) -> bool:
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            return bool(re.match(r"^\S+\s+--\s+\S+$|^leaf\s", line))
    return False


def _load_rooted(path: str) -> Network:
    return parse_enewick(_read(path))


def _load_unrooted(path: str) -> UnrootedNetwork:
    return parse_edge_list(_read(path))


def _digest_rooted(net: Network) -> str:
    return hashlib.sha256(canonical_code(net).data).hexdigest()[:16]


def _digest_unrooted(net: UnrootedNetwork) -> str:
    raw = repr(unrooted_canonical_code(net)).encode()
    return hashlib.sha256(raw).hexdigest()[:16]


def _move_with_ranks(mv: Move, ranks: dict) -> Move:
    return Move(mv.kind,
                (ranks[mv.moving[0]], ranks[mv.moving[1]]),
                (ranks[mv.target[0]], ranks[mv.target[1]]))


def _print_rooted_steps(start: Network, moves, tags=None):
    nets = replay_sequence(start, list(moves))
    for i, mv in enumerate(moves, start=1):
        ranks = canonical_labeling(nets[i - 1])
        tag = f" [{tags[i - 1]}]" if tags else ""
        click.echo(f"step {i}{tag} {format_move(_move_with_ranks(mv, ranks))}")
    return nets


@click.group()
@click.option("--machine", is_flag=True,
              help="line-delimited records instead of prose")
@click.pass_context
def main(ctx, machine):
    """Rearrangement moves and distances for binary phylogenetic networks."""
    ctx.ensure_object(dict)
    ctx.obj["machine"] = machine


@main.command("validate")
@click.argument("path")
@_guarded
def validate_cmd(path):
    """Check a network file; report its leaf set and reticulation number."""
    text = _read(path)
    if _is_edge_list(text):
        net = parse_edge_list(text)
        click.echo(f"valid (unrooted), |X|={len(net.taxa)}, "
                   f"k={net.reticulation_number}")
    else:
        net = parse_enewick(text)
        click.echo(f"valid, |X|={len(net.taxa)}, "
                   f"k={reticulation_number(net)}")


@main.command("parse")
@click.argument("path")
@click.pass_context
@_guarded
def parse_cmd(ctx, path):
    """Parse a network file and list its nodes and edges."""
    text = _read(path)
    machine = ctx.obj["machine"]
    if _is_edge_list(text):
        net = parse_edge_list(text)
        for n in net.nodes:
            lab = net.leaf_labels.get(n)
            click.echo(f"node {n} degree {net.degree(n)}"
                       + (f" label {lab}" if lab else ""))
        for a, b in net.edges:
            click.echo(f"edge {a} {b}")
        if not machine:
            click.echo(f"unrooted, |X|={len(net.taxa)}, "
                       f"k={net.reticulation_number}")
        return
    net = parse_enewick(text)
    for n in net.nodes:
        lab = net.leaf_labels.get(n)
        click.echo(f"node {n} {net.role(n)}"
                   + (f" label {lab}" if lab else ""))
    for a, b in net.edges:
        click.echo(f"edge {a} {b}")
    if not machine:
        click.echo(f"rooted, |X|={len(net.taxa)}, k={reticulation_number(net)}")


@main.command("write")
@click.argument("path")
@_guarded
def write_cmd(path):
    """Re-emit a network file in canonical form."""
    text = _read(path)
    if _is_edge_list(text):
        click.echo(write_edge_list(parse_edge_list(text)), nl=False)
    else:
        click.echo(write_enewick(parse_enewick(text)))


@main.command("apply-move")
@click.argument("path")
@click.argument("move_literal")
@_guarded
def apply_move_cmd(path, move_literal):
    """Apply one move (node ids as printed by ``parse``) to a network."""
    net = _load_rooted(path)
    mv = parse_move(move_literal)
    out, info = apply_move(net, mv)
    click.echo(f"created {info.created} suppressed {info.suppressed} "
               f"merged ({info.merged_edge[0]},{info.merged_edge[1]})")
    click.echo(write_enewick(out))


@main.command("enumerate-moves")
@click.argument("path")
@click.option("--class", "move_class", default="rspr",
              type=click.Choice(["tail", "head", "rspr", "tail1", "head1",
                                 "rnni"]))
@click.pass_context
@_guarded
def enumerate_moves_cmd(ctx, path, move_class):
    """List every valid move of the given class, one literal per line."""
    net = _load_rooted(path)
    mvs = enumerate_moves(net, move_class)
    for mv in sorted(mvs):
        click.echo(format_move(mv))
    if not ctx.obj["machine"]:
        click.echo(f"{len(mvs)} moves")


@main.command("rewrite-head")
@click.argument("path")
@click.argument("move_literal")
@_guarded
def rewrite_head_cmd(path, move_literal):
    """Replace one distance-1 head move by at most four tail moves."""
    net = _load_rooted(path)
    plan = rewrite_head_move(net, parse_move(move_literal))
    click.echo(f"case {plan.case_tag}")
    nets = _print_rooted_steps(net, plan.replacement)
    for mid in nets[1:]:
        click.echo(f"  -> {write_enewick(mid)}")
    click.echo(f"endpoint {_digest_rooted(nets[-1])}")


@main.command("decompose-tail")
@click.argument("path")
@click.argument("move_literal")
@_guarded
def decompose_tail_cmd(path, move_literal):
    """Split one tail move into tail moves of distance exactly 1."""
    net = _load_rooted(path)
    steps = decompose_tail_move(net, parse_move(move_literal))
    nets = _print_rooted_steps(net, steps)
    for mid in nets[1:]:
        click.echo(f"  -> {write_enewick(mid)}")
    click.echo(f"endpoint {_digest_rooted(nets[-1])}")


@main.command("find-sequence")
@click.argument("path_a")
@click.argument("path_b")
@click.option("--class", "move_class", default="tail",
              type=click.Choice(["tail", "rspr", "tail1"]))
@click.option("--audit", is_flag=True, help="re-validate every intermediate")
@click.pass_context
@_guarded
def find_sequence_cmd(ctx, path_a, path_b, move_class, audit):
    """Moves of one class turning the first network into the second."""
    a, b = _load_rooted(path_a), _load_rooted(path_b)
    moves = find_sequence(a, b, move_class=move_class)
    if not ctx.obj["machine"]:
        click.echo(f"{len(moves)} moves (class {move_class})")
    nets = _print_rooted_steps(a, moves)
    if audit:
        for mid in nets:
            labels = {mid.leaf_with_label(x): x for x in mid.taxa}
            report = validate(mid.edges, labels)
            assert not report.violations, report.violations
            assert mid.taxa == a.taxa
        click.echo(f"audit ok ({len(nets)} networks revalidated)")
    click.echo(f"endpoint {_digest_rooted(nets[-1])}")


@main.command("exact-distance")
@click.argument("path_a")
@click.argument("path_b")
@click.option("--class", "move_class", default="rspr",
              type=click.Choice(["tail", "head", "rspr", "tail1", "head1",
                                 "rnni"]))
@click.option("--max-nodes", default=12, show_default=True,
              help="search ceiling; refuses above the compiled cap")
@_guarded
def exact_distance_cmd(path_a, path_b, move_class, max_nodes):
    """Exact move distance by breadth-first search over the tier."""
    a, b = _load_rooted(path_a), _load_rooted(path_b)
    d = exact_distance(a, b, move_class=move_class, max_nodes=max_nodes)
    click.echo("unreachable" if d == float("inf") else f"{int(d)}")


@main.command("enumerate-tier")
@click.option("--taxa", required=True, help="comma-separated leaf labels")
@click.option("--tier", "k", required=True, type=int,
              help="reticulation number")
@click.pass_context
@_guarded
def enumerate_tier_cmd(ctx, taxa, k):
    """All networks on the given leaves with the given reticulation number."""
    labels = tuple(x for x in taxa.split(",") if x)
    catalog = enumerate_tier(labels, k)
    for net in catalog.networks:
        click.echo(write_enewick(net))
    if not ctx.obj["machine"]:
        click.echo(f"{len(catalog.networks)} networks")


@main.command("move-graph")
@click.option("--taxa", required=True, help="comma-separated leaf labels")
@click.option("--tier", "k", required=True, type=int)
@click.option("--class", "move_class", default="tail",
              type=click.Choice(["tail", "head", "rspr", "tail1", "head1",
                                 "rnni"]))
@click.option("--emit-dot", is_flag=True, help="print the graph as DOT")
@_guarded
def move_graph_cmd(taxa, k, move_class, emit_dot):
    """Tier-wide move graph: vertex count, components, diameters."""
    labels = tuple(x for x in taxa.split(",") if x)
    catalog = enumerate_tier(labels, k)
    graph = build_move_graph(catalog, move_class)
    if emit_dot:
        click.echo("graph moves {")
        for i in range(len(catalog.networks)):
            click.echo(f'  n{i} [label="{write_enewick(catalog.networks[i])}"];')
        for i, nbs in enumerate(graph.adjacency):
            for j in nbs:
                if i < j:
                    click.echo(f"  n{i} -- n{j};")
        click.echo("}")
        return
    stats = move_graph_stats(graph)
    click.echo(f"networks {len(catalog.networks)}")
    click.echo(f"components {len(stats.components)}")
    click.echo("diameters " + ",".join(str(d) for d in stats.diameters))


@main.command("rootability")
@click.argument("path")
@_guarded
def rootability_cmd(path):
    """Cut-edge analysis of an unrooted network: can it be rooted?"""
    net = _load_unrooted(path)
    dec = decompose(net)
    click.echo(f"bridges {len(dec.bridges)}")
    click.echo(f"redundant {len(dec.redundant_bridges)}")
    click.echo(f"blobs {len(dec.blobs)}")
    click.echo(f"terminal {len(dec.terminal_components)}")
    if is_rootable(net):
        click.echo("rootable yes")
    else:
        a, b = min(dec.redundant_bridges)
        click.echo(f"rootable no, witness cut-edge ({a},{b})")


@main.command("root-at")
@click.argument("path")
@click.argument("leaf_label")
@_guarded
def root_at_cmd(path, leaf_label):
    """Orient an unrooted network with the root above the given leaf."""
    net = _load_unrooted(path)
    click.echo(write_enewick(root_at(net, leaf_label)))


@main.command("spr-sequence")
@click.argument("path_a")
@click.argument("path_b")
@click.pass_context
@_guarded
def spr_sequence_cmd(ctx, path_a, path_b):
    """Unrooted SPR moves turning the first network into the second."""
    a, b = _load_unrooted(path_a), _load_unrooted(path_b)
    moves = spr_sequence(a, b)
    if not ctx.obj["machine"]:
        click.echo(f"{len(moves)} moves")
    cur = a
    for i, mv in enumerate(moves, start=1):
        ranks = unrooted_canonical_labeling(cur)
        (u, v), (s, t) = mv.moving, mv.target
        click.echo(f"step {i} spr ({ranks[u]},{ranks[v]})"
                   f"->({min(ranks[s], ranks[t])},{max(ranks[s], ranks[t])})")
        cur, _ = apply_spr(cur, mv)
    click.echo(f"endpoint {_digest_unrooted(cur)}")


@main.command("maf-distance")
@click.argument("path_a")
@click.argument("path_b")
@_guarded
def maf_distance_cmd(path_a, path_b):
    """Agreement-forest rSPR distance between two rooted trees."""
    a, b = _load_rooted(path_a), _load_rooted(path_b)
    click.echo(str(maf_distance(a, b)))


_STEP = re.compile(r"^step\s+\d+(?:\s+\[[^]]*\])?\s+"
                   r"(tail|head|spr)\s+\((\d+),(\d+)\)->\((\d+),(\d+)\)$")


@main.command("replay")
@click.argument("start_path")
@click.argument("sequence_path")
@_guarded
def replay_cmd(start_path, sequence_path):
    """Re-apply a printed sequence and confirm its endpoint code."""
    text = _read(start_path)
    steps = []
    declared = None
    for raw in _read(sequence_path).splitlines():
        line = raw.strip()
        m = _STEP.match(line)
        if m:
            steps.append((m.group(1), *(int(g) for g in m.groups()[1:])))
        elif line.startswith("endpoint "):
            declared = line.split()[1]
    if declared is None:
        raise PreconditionViolated("sequence file declares no endpoint")
    if _is_edge_list(text):
        cur = parse_edge_list(text)
        for kind, u, v, s, t in steps:
            assert kind == "spr", f"{kind} move in an unrooted replay"
            node = {r: n for n, r in unrooted_canonical_labeling(cur).items()}
            cur, _ = apply_spr(cur, SprMove((node[u], node[v]),
                                            (node[s], node[t])))
        got = _digest_unrooted(cur)
    else:
        cur = parse_enewick(text)
        for kind, u, v, s, t in steps:
            node = {r: n for n, r in canonical_labeling(cur).items()}
            mv = Move(kind, (node[u], node[v]), (node[s], node[t]))
            cur, _ = apply_move(cur, mv)
        got = _digest_rooted(cur)
    if got != declared:
        raise PreconditionViolated(
            f"endpoint code mismatch: declared {declared}, replayed {got}")
    click.echo(f"replayed {len(steps)} moves, endpoint confirmed")


@main.command("verify-bounds")
@click.option("--taxa", required=True, help="comma-separated leaf labels")
@click.option("--tier", "k", required=True, type=int)
@click.pass_context
@_guarded
def verify_bounds_cmd(ctx, taxa, k):
    """Run the bound checks on one tier and print a PASS/FAIL table."""
    labels = tuple(x for x in taxa.split(",") if x)
    failures = 0

    def report(name, ok, detail):
        nonlocal failures
        failures += 0 if ok else 1
        click.echo(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")

    catalog = enumerate_tier(labels, k)
    nets = catalog.networks
    report("tier-census", len(nets) > 0 or k > 0,
           f"{len(nets)} networks on {len(labels)} leaves, k={k}")

    for move_class, expect in (("tail", None), ("rspr", 1)):
        graph = build_move_graph(catalog, move_class)
        stats = move_graph_stats(graph)
        n_comp = len(stats.components)
        exceptional = (len(labels), k) in ((2, 1), (1, 2))
        want = (2 if exceptional else 1) if move_class == "tail" else 1
        if not nets:
            want = 0
        report(f"{move_class}-connectivity", n_comp == want,
               f"{n_comp} component(s), expected {want}")

    from .sequence import green_line_rspr, green_line_tail
    x, kk = len(labels), k
    pairs = [(i, j) for i in range(len(nets)) for j in range(len(nets))]
    stride = max(1, len(pairs) // 200)
    sampled = pairs[::stride]
    exceptional = (x, kk) in ((2, 1), (1, 2))
    if not exceptional:
        worst = 0
        ok = True
        for i, j in sampled:
            seq = green_line_tail(nets[i], nets[j])
            worst = max(worst, len(seq))
            ok = ok and len(seq) <= 3 * (x + 2 * kk)
        report("tail-bound", ok,
               f"{len(sampled)} pairs, max {worst} <= {3 * (x + 2 * kk)}")
    worst = 0
    ok = True
    for i, j in sampled:
        seq = green_line_rspr(nets[i], nets[j])
        worst = max(worst, len(seq))
        ok = ok and len(seq) <= 2 * x + 3 * kk - 1
    report("rspr-bound", ok,
           f"{len(sampled)} pairs, max {worst} <= {2 * x + 3 * kk - 1}")

    small = len(nets[0].nodes) <= 12 if nets else False
    if nets and small:
        ok = True
        checked = 0
        for i, j in sampled[:60]:
            if i == j:
                continue
            d_r = exact_distance(nets[i], nets[j], move_class="rspr")
            d_t = exact_distance(nets[i], nets[j], move_class="tail")
            ok = ok and d_r <= d_t
            checked += 1
        report("distance-order", ok, f"rspr <= tail on {checked} pairs")
    if failures:
        raise PreconditionViolated(f"{failures} bound check(s) failed")


if __name__ == "__main__":
    main()
