#!/usr/bin/env python3
"""Exhaustive worst-case sweep of the constructive bounds on whole tiers.

For every network pair of a tier this measures the produced tail and rSPR
sequences against their budgets (3(|X|+2k) and 2|X|+3k-1) and against the
exact BFS distance; for every distance-1 head move it replays the tail-move
rewrite (length cap 4); for every tail move it replays the distance-1
decomposition (length cap |X|+3k-1).

The default tiers finish in seconds; ``--big`` adds the 228- and
279-network tiers (a few minutes).

Example:
    python scripts/bound_sweep.py --tier 3,1 --tier 2,2
"""
import argparse
import itertools
import string
import sys
import time
from collections import Counter
from dataclasses import dataclass

from netmoves.canon import canonical_code
from netmoves.errors import ExceptionalNetwork
from netmoves.moves import apply_move, enumerate_moves, move_distance
from netmoves.oracle import (all_pairs_distances, build_move_graph,
                             enumerate_tier)
from netmoves.rewrite import decompose_tail_move, rewrite_head_move
from netmoves.sequence import green_line_rspr, green_line_tail

DEFAULT_TIERS = ((3, 0), (4, 0), (2, 1), (1, 2), (3, 1), (2, 2))
BIG_TIERS = ((4, 1), (3, 2))


@dataclass
class SweepConfig:
    tiers: tuple
    pairs: bool = True
    rewrites: bool = True
    decompositions: bool = True


def _replay(net, moves):
    cur = net
    for mv in moves:
        cur, _ = apply_move(cur, mv)
    return cur


def sweep_tier(taxa_n: int, k: int, cfg: SweepConfig) -> None:
    taxa = tuple(string.ascii_lowercase[:taxa_n])
    t0 = time.time()
    catalog = enumerate_tier(taxa, k)
    nets = catalog.networks
    print(f"tier ({taxa_n},{k}): {len(nets)} networks "
          f"[{time.time() - t0:.1f}s]", flush=True)

    if cfg.pairs and len(nets) > 1:
        tail_budget = 3 * (taxa_n + 2 * k)
        rspr_budget = 2 * taxa_n + 3 * k - 1
        tail_mat = all_pairs_distances(build_move_graph(catalog, "tail"))
        rspr_mat = all_pairs_distances(build_move_graph(catalog, "rspr"))
        worst_tail = worst_rspr = 0
        slack_tail = slack_rspr = 0
        stuck = 0
        for i, j in itertools.product(range(len(nets)), repeat=2):
            try:
                seq = green_line_tail(nets[i], nets[j])
                worst_tail = max(worst_tail, len(seq))
                slack_tail = max(slack_tail, len(seq) - tail_mat[i][j])
            except ExceptionalNetwork:
                stuck += 1
            seq = green_line_rspr(nets[i], nets[j])
            worst_rspr = max(worst_rspr, len(seq))
            slack_rspr = max(slack_rspr, len(seq) - rspr_mat[i][j])
        print(f"  tail: worst {worst_tail} / budget {tail_budget}, "
              f"slack over BFS {slack_tail:g}, unreachable pairs {stuck}")
        print(f"  rspr: worst {worst_rspr} / budget {rspr_budget}, "
              f"slack over BFS {slack_rspr:g}", flush=True)

    if cfg.rewrites:
        tags = Counter()
        for net in nets:
            for mv in enumerate_moves(net, "head1", include_trivial=True):
                goal, _ = apply_move(net, mv)
                try:
                    plan = rewrite_head_move(net, mv)
                except ExceptionalNetwork:
                    tags["refused"] += 1
                    continue
                assert canonical_code(_replay(net, plan.replacement)) \
                    == canonical_code(goal)
                tags[plan.case_tag] += 1
        print(f"  head rewrites: {sum(tags.values())} "
              f"{dict(sorted(tags.items()))}", flush=True)

    if cfg.decompositions:
        lengths = Counter()
        bound = taxa_n + 3 * k - 1
        for net in nets:
            for mv in enumerate_moves(net, "tail", include_trivial=True):
                steps = decompose_tail_move(net, mv)
                assert len(steps) <= bound
                goal, _ = apply_move(net, mv)
                assert canonical_code(_replay(net, steps)) \
                    == canonical_code(goal)
                lengths[(move_distance(net, mv), len(steps))] += 1
        print(f"  decompositions: {sum(lengths.values())} "
              f"(distance, length) {dict(sorted(lengths.items()))}",
              flush=True)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--tier", action="append", metavar="N,K",
                    help="taxa count and reticulation number (repeatable)")
    ap.add_argument("--big", action="store_true",
                    help="also sweep the (4,1) and (3,2) tiers")
    ap.add_argument("--skip-pairs", action="store_true")
    ap.add_argument("--skip-rewrites", action="store_true")
    ap.add_argument("--skip-decompositions", action="store_true")
    args = ap.parse_args(argv)
    tiers = tuple(tuple(int(x) for x in spec.split(",")) for spec in args.tier) \
        if args.tier else DEFAULT_TIERS
    if args.big:
        tiers = tiers + BIG_TIERS
    cfg = SweepConfig(tiers=tiers, pairs=not args.skip_pairs,
                      rewrites=not args.skip_rewrites,
                      decompositions=not args.skip_decompositions)
    for taxa_n, k in cfg.tiers:
        sweep_tier(taxa_n, k, cfg)
    return 0


if __name__ == "__main__":
    sys.exit(main())
