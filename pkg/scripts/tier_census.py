#!/usr/bin/env python3
"""Census of small network tiers: how many networks live on each (taxa, k)
tier and how the move graphs over them decompose.

Example:
    python scripts/tier_census.py --max-taxa 3 --max-k 2 --classes tail,rspr
"""
import argparse
import string
import sys
from dataclasses import dataclass, field

from netmoves.errors import ScaleLimitExceeded
from netmoves.oracle import build_move_graph, enumerate_tier, move_graph_stats


@dataclass
class CensusConfig:
    max_taxa: int = 4
    max_k: int = 2
    classes: tuple = ("tail", "rspr")
    show_diameters: bool = True
    alphabet: str = field(default=string.ascii_lowercase, repr=False)


def run(cfg: CensusConfig) -> None:
    header = ["taxa", "k", "networks"]
    for cls in cfg.classes:
        header += [f"{cls} comps", f"{cls} diam"]
    print("\t".join(header))
    for n in range(1, cfg.max_taxa + 1):
        for k in range(0, cfg.max_k + 1):
            taxa = tuple(cfg.alphabet[:n])
            try:
                catalog = enumerate_tier(taxa, k)
            except ScaleLimitExceeded as exc:
                print(f"{n}\t{k}\tskipped ({exc})")
                continue
            row = [str(n), str(k), str(len(catalog.networks))]
            for cls in cfg.classes:
                graph = build_move_graph(catalog, cls)
                stats = move_graph_stats(graph)
                diam = ",".join(str(d) for d in stats.diameters) or "-"
                row += [str(len(stats.components)),
                        diam if cfg.show_diameters else "-"]
            print("\t".join(row))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-taxa", type=int, default=4)
    ap.add_argument("--max-k", type=int, default=2)
    ap.add_argument("--classes", default="tail,rspr",
                    help="comma-separated move classes")
    ap.add_argument("--no-diameters", action="store_true")
    args = ap.parse_args(argv)
    cfg = CensusConfig(max_taxa=args.max_taxa, max_k=args.max_k,
                       classes=tuple(c for c in args.classes.split(",") if c),
                       show_diameters=not args.no_diameters)
    run(cfg)
    return 0


if __name__ == "__main__":
    sys.exit(main())
