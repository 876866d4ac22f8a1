"""Unrooted networks: SPR moves, rootability analysis, terminal-component
elimination, and the root-and-transfer pipeline that turns a rooted move
sequence into an unrooted one.

An unrooted network is a connected leaf-labeled graph whose nodes have
degree 1 (the labeled leaves) or 3, with no parallel edges and at least
two leaves.  Its reticulation number is |E| - |V| + 1.
"""
from __future__ import annotations

from dataclasses import dataclass

import networkx as nx

from .canon import canonical_labeling_generic, find_isomorphism_generic
from .errors import (InvalidMove, PreconditionViolated, StructureError,
                     TierMismatch, TooFewLeaves, Unrootable)
from .moves import TAIL, Move, apply_move
from .network import Network


def _tier_text(net: "UnrootedNetwork") -> str:
    return f"({','.join(sorted(net.taxa))}; k={net.reticulation_number})"


def _norm(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a <= b else (b, a)


class UnrootedNetwork:
    """Immutable undirected leaf-labeled graph with degree-1/3 nodes."""

    __slots__ = ("_adj", "_edges", "leaf_labels")

    def __init__(self, edges, leaf_labels):
        norm = sorted({_norm(a, b) for a, b in edges})
        adj: dict[int, list[int]] = {}
        for a, b in norm:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        self._edges = tuple(norm)
        self._adj = {n: tuple(sorted(nb)) for n, nb in adj.items()}
        self.leaf_labels = dict(leaf_labels)

    @classmethod
    def checked(cls, edges, leaf_labels) -> "UnrootedNetwork":
        violations = []
        seen = set()
        for a, b in edges:
            if a == b:
                violations.append(f"self-loop at {a}")
            e = _norm(a, b)
            if e in seen:
                violations.append(f"parallel edge {e}")
            seen.add(e)
        net = cls(edges, leaf_labels)
        nodes = net.nodes
        if not nodes:
            violations.append("empty graph")
        for n in nodes:
            d = len(net._adj[n])
            if d not in (1, 3):
                violations.append(f"node {n} has degree {d}")
            if d == 1 and n not in net.leaf_labels:
                violations.append(f"degree-1 node {n} is unlabeled")
        for n, lab in net.leaf_labels.items():
            if n not in net._adj:
                violations.append(f"labeled node {n} missing from the graph")
            elif len(net._adj[n]) != 1:
                violations.append(f"labeled node {n} is not a leaf")
        labs = list(net.leaf_labels.values())
        if len(set(labs)) != len(labs):
            violations.append("duplicate leaf labels")
        if len(labs) < 2:
            violations.append("fewer than two leaves")
        if nodes and not violations:
            seen_n = {nodes[0]}
            stack = [nodes[0]]
            while stack:
                for m in net._adj[stack.pop()]:
                    if m not in seen_n:
                        seen_n.add(m)
                        stack.append(m)
            if len(seen_n) != len(nodes):
                violations.append("graph is not connected")
        if violations:
            raise StructureError(violations)
        return net

    @property
    def nodes(self) -> tuple[int, ...]:
        return tuple(sorted(self._adj))

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self._edges

    def neighbors(self, n: int) -> tuple[int, ...]:
        return self._adj[n]

    def degree(self, n: int) -> int:
        return len(self._adj[n])

    def has_edge(self, a: int, b: int) -> bool:
        return _norm(a, b) in set(self._edges)

    @property
    def taxa(self) -> frozenset[str]:
        return frozenset(self.leaf_labels.values())

    def leaf_with_label(self, label: str) -> int:
        for n, lab in self.leaf_labels.items():
            if lab == label:
                return n
        raise PreconditionViolated(f"no leaf labeled {label!r}")

    def fresh_node(self) -> int:
        return max(self._adj) + 1

    @property
    def reticulation_number(self) -> int:
        return len(self._edges) - len(self._adj) + 1

    @property
    def tier(self) -> tuple[frozenset[str], int]:
        return (self.taxa, self.reticulation_number)


# -- canonical form ---------------------------------------------------------------


def _label_colors(net: UnrootedNetwork, label_order=None):
    if label_order is None:
        label_order = sorted(net.taxa)
    rank = {lab: i for i, lab in enumerate(label_order)}
    return {n: 1 + rank[net.leaf_labels[n]] if n in net.leaf_labels else 0
            for n in net.nodes}


def unrooted_canonical_labeling(net: UnrootedNetwork) -> dict[int, int]:
    """Node -> rank bijection invariant under label-preserving isomorphism."""
    return _canonical(net)[1]


def unrooted_canonical_code(net: UnrootedNetwork):
    """Total order on unrooted networks; equal iff isomorphic."""
    return _canonical(net)[0]


def _canonical(net: UnrootedNetwork):
    adj = {n: net.neighbors(n) for n in net.nodes}
    by_rank = {}
    for n, lab in net.leaf_labels.items():
        by_rank[n] = lab

    def encode(labeling):
        edges = tuple(sorted(_norm(labeling[a], labeling[b])
                             for a, b in net.edges))
        labels = tuple(sorted((labeling[n], lab) for n, lab in by_rank.items()))
        return (edges, labels)

    return canonical_labeling_generic(net.nodes, adj, adj,
                                      _label_colors(net), encode)


def find_unrooted_isomorphism(a: UnrootedNetwork, b: UnrootedNetwork):
    """Label-preserving bijection carrying edges of ``a`` onto ``b``."""
    if a.taxa != b.taxa:
        return None
    order = sorted(a.taxa)
    adj_a = {n: a.neighbors(n) for n in a.nodes}
    adj_b = {n: b.neighbors(n) for n in b.nodes}
    return find_isomorphism_generic(a.nodes, adj_a, adj_a,
                                    _label_colors(a, order),
                                    b.nodes, adj_b, adj_b,
                                    _label_colors(b, order))


# -- rooted-to-unrooted ------------------------------------------------------------


def underlying(net: Network) -> UnrootedNetwork:
    """Forget orientations and suppress the root into its child edge."""
    if len(net.taxa) < 2:
        raise TooFewLeaves("an unrooted network needs at least two leaves")
    rho = net.root
    c = net.children(rho)[0]
    if len(net.nodes) <= 4:
        raise TooFewLeaves(
            "suppressing the root leaves a single edge with no internal nodes")
    p, q = _root_child_sides(net, c)
    edges = [_norm(a, b) for a, b in net.edges
             if c not in (a, b) and rho not in (a, b)]
    edges.append(_norm(p, q))
    labels = {net.leaf_with_label(lab): lab for lab in net.taxa}
    return UnrootedNetwork.checked(edges, labels)


@dataclass(frozen=True)
class BlobDecomposition:
    """Cut-edge and biconnected structure of an unrooted network."""
    bridges: frozenset
    redundant_bridges: frozenset
    blobs: tuple
    terminal_components: tuple


def decompose(net: UnrootedNetwork) -> BlobDecomposition:
    """Bridges, leafless-side bridges, blobs, and terminal blobs."""
    g = nx.Graph(net.edges)
    bridges = frozenset(_norm(a, b) for a, b in nx.bridges(g))
    leaves = set(net.leaf_labels)
    redundant = set()
    for a, b in bridges:
        h = g.copy()
        h.remove_edge(a, b)
        side_a = nx.node_connected_component(h, a)
        if not (side_a & leaves) or not ((set(g) - side_a) & leaves):
            redundant.add((a, b))
    blobs = tuple(sorted((frozenset(comp) for comp in
                          nx.biconnected_components(g) if len(comp) >= 3),
                         key=sorted))
    terminal = []
    for blob in blobs:
        incident = [e for e in bridges if len(blob.intersection(e)) == 1]
        if len(incident) == 1:
            assert incident[0] in redundant, \
                "a blob behind a single cut-edge has no leaves behind it"
            # degree argument: 3|V'| = 2|E'| - 1 forces an odd |V'| >= 5,
            # so each terminal component contributes at least 3 to k
            internal = sum(1 for a, b in net.edges if a in blob and b in blob)
            assert len(blob) % 2 == 1 and len(blob) >= 5
            assert (internal + 1) - len(blob) >= 3
            terminal.append(blob)
    return BlobDecomposition(bridges, frozenset(redundant), blobs,
                             tuple(terminal))


def is_rootable(net: UnrootedNetwork) -> bool:
    """True iff some orientation turns the network into a rooted one."""
    return not decompose(net).redundant_bridges


def _orient_blob(nodes, internal, ext_in, ext_out):
    """Orient the internal edges of a blob so every node gets indegree and
    outdegree in {1,2} (counting oriented cut-edges) and no cycle forms."""
    internal = sorted(internal)
    best: dict = {}

    def feasible(cnt_in, cnt_out, remaining):
        for n in nodes:
            if cnt_in[n] > 2 or cnt_out[n] > 2:
                return False
            if remaining[n] == 0 and (cnt_in[n] == 0 or cnt_out[n] == 0):
                return False
        return True

    cnt_in = {n: ext_in.get(n, 0) for n in nodes}
    cnt_out = {n: ext_out.get(n, 0) for n in nodes}
    remaining = {n: 0 for n in nodes}
    for a, b in internal:
        remaining[a] += 1
        remaining[b] += 1

    def search(i):
        if i == len(internal):
            g = nx.DiGraph()
            g.add_nodes_from(nodes)
            g.add_edges_from(best.values())
            return nx.is_directed_acyclic_graph(g)
        a, b = internal[i]
        for tail, head in ((a, b), (b, a)):
            cnt_out[tail] += 1
            cnt_in[head] += 1
            remaining[a] -= 1
            remaining[b] -= 1
            best[(a, b)] = (tail, head)
            if feasible(cnt_in, cnt_out, remaining) and search(i + 1):
                return True
            del best[(a, b)]
            cnt_out[tail] -= 1
            cnt_in[head] -= 1
            remaining[a] += 1
            remaining[b] += 1
        return False

    if not search(0):
        return None
    return list(best.values())


def root_at(net: UnrootedNetwork, leaf_label: str) -> Network:
    """Rooted network whose underlying graph is ``net``: a fresh root is
    hung over the given leaf's pendant edge, cut-edges are oriented away
    from it, and every blob gets an acyclic source-to-sink orientation."""
    dec = decompose(net)
    if dec.redundant_bridges:
        e = min(dec.redundant_bridges)
        raise Unrootable(f"redundant cut-edge {e} admits no orientation",
                         witness=e)
    r = net.leaf_with_label(leaf_label)
    v = net.neighbors(r)[0]
    rho, c = net.fresh_node(), net.fresh_node() + 1

    g = nx.Graph(e for e in net.edges if e != _norm(r, v))
    g.add_edge(c, r)
    g.add_edge(c, v)
    bridges = {_norm(a, b) for a, b in nx.bridges(g)}
    directed = [(rho, c)]
    for a, b in sorted(bridges):
        h = g.copy()
        h.remove_edge(a, b)
        directed.append((a, b) if c in nx.node_connected_component(h, a)
                        else (b, a))
    ext_in: dict[int, int] = {}
    ext_out: dict[int, int] = {}
    for a, b in directed:
        ext_out[a] = ext_out.get(a, 0) + 1
        ext_in[b] = ext_in.get(b, 0) + 1
    for blob in (frozenset(comp) for comp in nx.biconnected_components(g)
                 if len(comp) >= 3):
        internal = [_norm(x, y) for x, y in g.edges
                    if x in blob and y in blob]
        oriented = _orient_blob(sorted(blob), internal, ext_in, ext_out)
        assert oriented is not None, "a rootable blob must admit an orientation"
        directed.extend(oriented)

    rooted = Network.checked(directed, dict(net.leaf_labels))
    if len(net.nodes) > 2:  # a bare two-leaf edge has no unrooted image back
        assert unrooted_canonical_code(underlying(rooted)) == \
            unrooted_canonical_code(net), "rooting must invert the projection"
    return rooted


# -- SPR moves ---------------------------------------------------------------------


@dataclass(frozen=True)
class SprMove:
    """Detach ``moving[0]``'s end of the edge ``moving`` and reattach it to
    a new node subdividing ``target``."""
    moving: tuple[int, int]
    target: tuple[int, int]


@dataclass(frozen=True)
class SprInfo:
    created: int
    suppressed: int
    merged_edge: tuple[int, int]


def apply_spr(net: UnrootedNetwork, move: SprMove):
    """Apply an SPR move; raises InvalidMove unless the result is again a
    valid unrooted network."""
    a, b = move.moving
    s, t = move.target
    edge_set = set(net.edges)
    if _norm(a, b) not in edge_set or _norm(s, t) not in edge_set:
        raise InvalidMove(f"{move} does not reference edges of the network")
    if _norm(a, b) == _norm(s, t):
        raise InvalidMove("cannot move an edge onto itself")
    if net.degree(a) != 3:
        raise InvalidMove(f"moving endpoint {a} must have degree 3")
    if a in (s, t):
        raise InvalidMove("the target edge would be destroyed by suppression")
    x, y = (n for n in net.neighbors(a) if n != b)
    m = net.fresh_node()
    new_edges = (edge_set - {_norm(a, b), _norm(a, x), _norm(a, y),
                             _norm(s, t)}) \
        | {_norm(x, y), _norm(s, m), _norm(m, t), _norm(m, b)}
    try:
        out = UnrootedNetwork.checked(new_edges, net.leaf_labels)
    except StructureError as exc:
        raise InvalidMove(f"{move} breaks the network: {exc}") from None
    return out, SprInfo(created=m, suppressed=a, merged_edge=_norm(x, y))


def can_apply_spr(net: UnrootedNetwork, move: SprMove) -> bool:
    try:
        apply_spr(net, move)
    except InvalidMove:
        return False
    return True


def inverse_spr(move: SprMove, info: SprInfo) -> SprMove:
    return SprMove((info.created, move.moving[1]), info.merged_edge)


def eliminate_terminal_components(net: UnrootedNetwork):
    """SPR the leafless terminal blobs onto leaf edges until the network is
    rootable; at most k/3 moves, one per component."""
    k = net.reticulation_number
    moves = []
    cur = net
    while True:
        dec = decompose(cur)
        if not dec.terminal_components:
            break
        ranks = unrooted_canonical_labeling(cur)
        blob = min(dec.terminal_components,
                   key=lambda comp: min(ranks[n] for n in comp))
        u, v = next(e for e in dec.bridges
                    if len(blob.intersection(e)) == 1)
        if u in blob:
            u, v = v, u
        x, _y = sorted((n for n in cur.neighbors(v) if n != u),
                       key=ranks.__getitem__)
        leaf = min(cur.leaf_labels, key=lambda n: cur.leaf_labels[n])
        mv = SprMove((v, x), _norm(cur.neighbors(leaf)[0], leaf))
        cur, _info = apply_spr(cur, mv)
        moves.append(mv)
        assert cur.tier == net.tier, "SPR moves must preserve the tier"
        assert len(moves) <= k // 3, "component count must shrink"
    return cur, moves


# -- projecting a rooted sequence --------------------------------------------------


def _root_child_sides(net: Network, c: int) -> tuple[int, int]:
    """The two neighbors the root's child keeps once the root is suppressed."""
    rest = [n for n in net.parents(c) if n != net.root]
    rest.extend(net.children(c))
    assert len(rest) == 2, "the root's child must have degree 3"
    return rest[0], rest[1]


def _shadow_edge(net: Network, pi: dict, c: int, e) -> frozenset:
    x, y = e
    p, q = (None, None) if c not in e and net.root not in e \
        else _root_child_sides(net, c)
    if net.root in e:
        return frozenset((pi[p], pi[q]))
    if c in e:
        o = y if x == c else x
        return frozenset((pi[o], pi[q if o == p else p]))
    return frozenset((pi[x], pi[y]))


def _assert_projection(net: Network, pi: dict, un: UnrootedNetwork):
    c = net.children(net.root)[0]
    assert set(pi) == set(net.nodes) - {net.root, c}
    assert sorted(pi.values()) == list(un.nodes)
    shadows = {_shadow_edge(net, pi, c, e) for e in net.edges
               if net.root not in e}
    assert shadows == {frozenset(e) for e in un.edges}, \
        "projection must map the rooted edges onto the unrooted ones"
    for lab in un.taxa:
        assert pi[net.leaf_with_label(lab)] == un.leaf_with_label(lab)


def _project_move(net: Network, pi: dict, mv: Move) -> SprMove:
    c = net.children(net.root)[0]
    moving_node = mv.moving[0] if mv.kind == TAIL else mv.moving[1]
    em = _shadow_edge(net, pi, c, mv.moving)
    et = _shadow_edge(net, pi, c, mv.target)
    if moving_node == c:
        p, q = _root_child_sides(net, c)
        stay = mv.moving[1] if mv.kind == TAIL else mv.moving[0]
        assert stay in (p, q), "the moving edge must leave the root's child"
        w_move = pi[q if stay == p else p]
    else:
        w_move = pi[moving_node]
    assert w_move in em, "the moving endpoint must sit on the shadow edge"
    (anchor,) = em - {w_move}
    ts = sorted(et)
    return SprMove((w_move, anchor), (ts[0], ts[1]))


def _advance_projection(net: Network, pi: dict, un: UnrootedNetwork, mv: Move):
    shadow = _project_move(net, pi, mv)
    un2, _info_u = apply_spr(un, shadow)
    net2, _info_r = apply_move(net, mv)
    c2 = net2.children(net2.root)[0]
    pi2 = {n: pi[n] for n in net2.nodes if n in pi and n != c2}
    missing_r = [n for n in net2.nodes
                 if n not in (net2.root, c2) and n not in pi2]
    used = set(pi2.values())
    missing_u = [w for w in un2.nodes if w not in used]
    assert len(missing_r) == len(missing_u) <= 1
    if missing_r:
        pi2[missing_r[0]] = missing_u[0]
    _assert_projection(net2, pi2, un2)
    return net2, pi2, un2, shadow


def spr_sequence(a: UnrootedNetwork, b: UnrootedNetwork) -> list[SprMove]:
    """SPR moves turning ``a`` into a network isomorphic to ``b``: both
    sides are made rootable, rooted at the same leaf, connected by rooted
    moves whose every intermediate projects, and the second side's
    preparation moves are appended in reverse.  At most
    (2|X| + 3k - 1) + 2*floor(k/3) moves."""
    if a.taxa != b.taxa or a.reticulation_number != b.reticulation_number:
        raise TierMismatch(_tier_text(a) + " vs " + _tier_text(b))
    if unrooted_canonical_code(a) == unrooted_canonical_code(b):
        return []
    k = a.reticulation_number
    cur_a, moves = eliminate_terminal_components(a)
    target_b, prep_b = eliminate_terminal_components(b)

    chain_b = []
    replay = b
    for mv in prep_b:
        nxt, info = apply_spr(replay, mv)
        chain_b.append((replay, mv, info, nxt))
        replay = nxt

    if unrooted_canonical_code(cur_a) != unrooted_canonical_code(target_b):
        root_label = min(a.taxa)
        from .sequence import green_line_rspr
        ra = root_at(cur_a, root_label)
        rb = root_at(target_b, root_label)
        pi = {n: n for n in cur_a.nodes}
        _assert_projection(ra, pi, cur_a)
        for mv in green_line_rspr(ra, rb, root_triangle_free=True):
            ra, pi, cur_a, shadow = _advance_projection(ra, pi, cur_a, mv)
            moves.append(shadow)
        assert unrooted_canonical_code(cur_a) == \
            unrooted_canonical_code(target_b)

    for net_before, mv, info, net_after in reversed(chain_b):
        iso = find_unrooted_isomorphism(net_after, cur_a)
        assert iso is not None, "preparation transport lost the isomorphism"
        inv = inverse_spr(mv, info)
        mapped = SprMove((iso[inv.moving[0]], iso[inv.moving[1]]),
                         _norm(iso[inv.target[0]], iso[inv.target[1]]))
        cur_a, _ = apply_spr(cur_a, mapped)
        moves.append(mapped)

    assert unrooted_canonical_code(cur_a) == unrooted_canonical_code(b), \
        "sequence misses target"
    budget = (2 * len(a.taxa) + 3 * k - 1) + 2 * (k // 3)
    assert len(moves) <= budget, f"{len(moves)} moves exceed budget {budget}"
    return moves
