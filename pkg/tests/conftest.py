"""Shared fixtures: cached tier catalogs, a deterministic pair sampler, and
a tree generator that is independent of the library's census."""
import itertools
from functools import lru_cache

from netmoves.network import Network
from netmoves.oracle import TierCatalog, enumerate_tier

ABC = ("a", "b", "c")
AB = ("a", "b")
ABCD = ("a", "b", "c", "d")
A = ("a",)


@lru_cache(maxsize=None)
def tier(taxa, k) -> TierCatalog:
    return enumerate_tier(taxa, k)


def bipartition_trees(labels) -> list[Network]:
    """Rooted binary trees built by recursive leaf-set bipartition.

    The library census grows trees by leaf insertion; this counts the same
    objects along a different recursion, so agreement is meaningful.
    """
    def shapes(pool):
        if len(pool) == 1:
            return [pool[0]]
        rest = pool[1:]  # pool[0] stays left, so each split is seen once
        out = []
        for r in range(1, len(pool)):
            for right in itertools.combinations(rest, r):
                left = tuple(x for x in pool if x not in right)
                out += [(ls, rs) for ls in shapes(left)
                        for rs in shapes(right)]
        return out

    def materialize(shape):
        edges, leafmap, counter = [], {}, itertools.count(1)

        def grow(part):
            my = next(counter)
            if isinstance(part, str):
                leafmap[my] = part
            else:
                edges.append((my, grow(part[0])))
                edges.append((my, grow(part[1])))
            return my

        top = grow(shape)
        edges.append((0, top))
        return Network.checked(edges, leafmap)

    return [materialize(s) for s in shapes(tuple(labels))]


def every_pair(catalog):
    nets = catalog.networks
    for i in range(len(nets)):
        for j in range(len(nets)):
            yield nets[i], nets[j]


def strided_pairs(catalog, limit):
    """Deterministic subsample of the ordered pairs, at most ``limit``."""
    nets = catalog.networks
    pairs = [(i, j) for i in range(len(nets)) for j in range(len(nets))]
    stride = max(1, len(pairs) // limit)
    for i, j in pairs[::stride]:
        yield nets[i], nets[j]
