"""Exhaustive tier enumeration, move graphs, BFS distances, agreement
forests, and the grafted lower-bound construction."""
import itertools

import pytest

from conftest import A, AB, ABC, ABCD, bipartition_trees, tier
from netmoves.canon import canonical_code
from netmoves.errors import (CompositionInvalid, PreconditionViolated,
                             ScaleLimitExceeded, TierMismatch)
from netmoves.moves import enumerate_moves
from netmoves.network import Network, reticulation_number
from netmoves.oracle import (MAX_BFS_NODES, all_pairs_distances,
                             build_move_graph, build_mycorrhizal,
                             enumerate_tier, exact_distance, maf_distance,
                             move_graph_stats)


def test_tree_census_matches_independent_enumeration():
    for labels, expect in ((ABC, 3), (ABCD, 15)):
        mine = bipartition_trees(labels)
        assert len({canonical_code(t).data for t in mine}) == expect
        catalog = tier(labels, 0)
        assert len(catalog.networks) == expect
        assert ({canonical_code(t).data for t in mine}
                == {canonical_code(n).data for n in catalog.networks})


FROZEN_TIER_SIZES = {
    (A, 1): 0,
    (A, 2): 1,
    (AB, 0): 1,
    (AB, 1): 2,
    (AB, 2): 18,
    (ABC, 0): 3,
    (ABC, 1): 21,
    (ABC, 2): 279,
    (ABCD, 0): 15,
    (ABCD, 1): 228,
}


@pytest.mark.parametrize("taxa,k", sorted(FROZEN_TIER_SIZES, key=str))
def test_frozen_tier_sizes(taxa, k):
    catalog = tier(taxa, k)
    assert len(catalog.networks) == FROZEN_TIER_SIZES[(taxa, k)]
    codes = set()
    for net in catalog.networks:
        assert net.taxa == frozenset(taxa)
        assert reticulation_number(net) == k
        codes.add(canonical_code(net).data)
    assert len(codes) == len(catalog.networks), "catalog holds duplicates"
    for code, idx in catalog.code_index.items():
        assert canonical_code(catalog.networks[idx]).data == code


def test_tier_enumeration_scale_guard():
    with pytest.raises(ScaleLimitExceeded):
        enumerate_tier(("a", "b", "c", "d", "e"), 0)
    with pytest.raises(ScaleLimitExceeded):
        enumerate_tier(AB, 9)


def test_exceptional_tier_shape_has_no_useful_tail_move():
    from netmoves.canon import find_isomorphism
    nets = tier(AB, 1).networks
    for net in nets:
        assert enumerate_moves(net, "tail") == []
        assert len(enumerate_moves(net, "tail", include_trivial=True)) == 8
        assert len(enumerate_moves(net, "rspr")) == 1
    first, second = nets
    assert find_isomorphism(first, second) is None
    flip = {"a": "b", "b": "a"}
    swapped = Network.checked(
        second.edges, {v: flip[lab] for v, lab in second.leaf_labels.items()})
    assert find_isomorphism(first, swapped) is not None, \
        "the two members are mirror relabelings of one shape"


def test_move_graph_components_frozen():
    expectations = [
        (ABC, 0, "tail", 1), (ABC, 0, "rspr", 1),
        (AB, 1, "tail", 2), (AB, 1, "rspr", 1),
        (ABC, 1, "tail", 1), (ABC, 1, "rspr", 1),
        (AB, 2, "tail", 1), (AB, 2, "rspr", 1),
    ]
    for taxa, k, cls, comps in expectations:
        stats = move_graph_stats(build_move_graph(tier(taxa, k), cls))
        assert len(stats.components) == comps, (taxa, k, cls)


def test_exact_distance_properties():
    nets = tier(ABC, 1).networks
    for x in nets[::5]:
        assert exact_distance(x, x, "tail") == 0
    for x, y in itertools.combinations(nets[::6], 2):
        d_xy = exact_distance(x, y, "rspr")
        d_yx = exact_distance(y, x, "rspr")
        assert d_xy == d_yx
        assert (d_xy == 0) == (canonical_code(x) == canonical_code(y))


def test_exact_distance_exceptional_pair():
    x, y = tier(AB, 1).networks
    assert exact_distance(x, y, "tail") == float("inf")
    assert exact_distance(x, y, "rspr") == 1
    assert exact_distance(x, y, "head") == 1


def test_exact_distance_guards():
    x, y = tier(AB, 1).networks
    with pytest.raises(ScaleLimitExceeded):
        exact_distance(x, y, max_nodes=MAX_BFS_NODES + 1)
    with pytest.raises(TierMismatch):
        exact_distance(tier(ABC, 0).networks[0], x)


def test_all_pairs_matches_single_source():
    catalog = tier(ABC, 1)
    graph = build_move_graph(catalog, "tail")
    matrix = all_pairs_distances(graph)
    nets = catalog.networks
    for i in range(0, len(nets), 7):
        for j in range(0, len(nets), 5):
            assert matrix[i][j] == exact_distance(nets[i], nets[j], "tail")


def test_maf_distance_basics():
    t1 = Network.checked([(0, 1), (1, 2), (1, 5), (2, 3), (2, 4)],
                         {3: "a", 4: "b", 5: "c"})
    t2 = Network.checked([(0, 1), (1, 2), (1, 3), (2, 4), (2, 5)],
                         {4: "a", 5: "c", 3: "b"})
    assert maf_distance(t1, t1) == 0
    assert maf_distance(t1, t2) == 1
    from netmoves.newick import parse_enewick
    p = parse_enewick("((a,b),(c,d));")
    q = parse_enewick("((a,c),(b,d));")
    assert maf_distance(p, q) == 2
    with pytest.raises(TierMismatch):
        maf_distance(t1, p)
    reticulate = tier(AB, 1).networks[0]
    with pytest.raises(PreconditionViolated):
        maf_distance(reticulate, reticulate)
    big = _caterpillar("abcdefgh")
    with pytest.raises(ScaleLimitExceeded):
        maf_distance(big, big)


def _caterpillar(labels: str) -> Network:
    edges, leafmap = [(0, 1)], {}
    spine, nxt = 1, 2
    for lab in labels[:-1]:
        edges += [(spine, nxt), (spine, nxt + 1)]
        leafmap[nxt] = lab
        spine, nxt = nxt + 1, nxt + 2
    leafmap[spine] = labels[-1]
    return Network.checked(edges, leafmap)


def test_mycorrhizal_composition_and_guards():
    blob = tier(AB, 1).networks[0]
    t_a = Network.checked([(0, 1), (1, 2), (1, 3)], {2: "x", 3: "y"})
    t_b = Network.checked([(0, 1)], {1: "z"})
    net = build_mycorrhizal([t_a, t_b], blob)
    assert net.taxa == frozenset({"x", "y", "z"})
    assert reticulation_number(net) == 1
    with pytest.raises(CompositionInvalid):
        build_mycorrhizal([t_a], blob)
    with pytest.raises(CompositionInvalid):
        build_mycorrhizal([t_a, t_a], blob)
    tree_blob = tier(AB, 0).networks[0]
    with pytest.raises(CompositionInvalid):
        build_mycorrhizal([t_a, t_b], tree_blob)
