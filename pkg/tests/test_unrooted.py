"""Unrooted networks: validation, suppression of the root, rooting, blob
decomposition, SPR moves, and the SPR sequence solver."""
import itertools

import pytest

from conftest import tier
from netmoves.errors import (InvalidMove, StructureError, TierMismatch,
                             TooFewLeaves, Unrootable)
from netmoves.network import Network
from netmoves.unrooted import (UnrootedNetwork, apply_spr, can_apply_spr,
                               decompose, eliminate_terminal_components,
                               find_unrooted_isomorphism, inverse_spr,
                               is_rootable, root_at, SprMove, spr_sequence,
                               underlying, unrooted_canonical_code)

# a leafless 5-node blob hanging behind a single cut-edge: not rootable
PENDANT_BLOB_EDGES = [(10, 12), (11, 12), (12, 0), (0, 1), (0, 2), (1, 3),
                      (1, 4), (2, 3), (2, 4), (3, 4)]
PENDANT_BLOB_LABELS = {10: "a", 11: "b"}

# two 3-taxa, k=3 networks with the same leafless blob behind one
# cut-edge: both need an elimination step before they can be rooted
N1_EDGES = [(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4), (0, 5),
            (5, 8), (5, 6), (6, 9), (6, 10)]
N2_EDGES = [(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4), (0, 5),
            (5, 9), (5, 6), (6, 8), (6, 10)]
N_LABELS = {8: "a", 9: "b", 10: "c"}


def pendant_blob():
    return UnrootedNetwork.checked(PENDANT_BLOB_EDGES, PENDANT_BLOB_LABELS)


def test_unrooted_validation():
    good = UnrootedNetwork.checked(N1_EDGES, N_LABELS)
    assert good.tier == (frozenset("abc"), 3)
    with pytest.raises(StructureError):  # self loop
        UnrootedNetwork.checked([(0, 0), (0, 1)], {1: "a"})
    with pytest.raises(StructureError):  # degree 2
        UnrootedNetwork.checked([(0, 1), (1, 2)], {0: "a", 2: "b"})
    with pytest.raises(StructureError):  # unlabeled degree-1 node
        UnrootedNetwork.checked([(0, 1)], {0: "a"})
    with pytest.raises(StructureError):  # labeled internal node
        UnrootedNetwork.checked(N1_EDGES, {**N_LABELS, 0: "z"})
    with pytest.raises(StructureError):  # duplicate label
        UnrootedNetwork.checked(N1_EDGES, {8: "a", 9: "a", 10: "c"})
    with pytest.raises(StructureError):  # fewer than two taxa
        UnrootedNetwork.checked([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3),
                                 (2, 3)], {})
    with pytest.raises(StructureError):  # disconnected
        UnrootedNetwork.checked(
            N1_EDGES + [(20, 21)], {**N_LABELS, 20: "x", 21: "y"})


def test_bare_edge_is_a_network():
    pair = UnrootedNetwork.checked([(0, 1)], {0: "a", 1: "b"})
    assert pair.tier == (frozenset("ab"), 0)
    assert pair.reticulation_number == 0


def test_unrooted_isomorphism():
    n1 = UnrootedNetwork.checked(N1_EDGES, N_LABELS)
    n2 = UnrootedNetwork.checked(N2_EDGES, N_LABELS)
    assert find_unrooted_isomorphism(n1, n2) is None
    assert unrooted_canonical_code(n1) != unrooted_canonical_code(n2)
    shifted = UnrootedNetwork.checked(
        [(u + 40, v + 40) for u, v in N1_EDGES],
        {v + 40: lab for v, lab in N_LABELS.items()})
    phi = find_unrooted_isomorphism(n1, shifted)
    assert phi is not None
    assert all(shifted.has_edge(phi[u], phi[v]) for u, v in n1.edges)
    assert unrooted_canonical_code(n1) == unrooted_canonical_code(shifted)


# per tier: how many members keep a simple graph when the root is
# suppressed, and how many collapse a triangle at the root into a
# parallel pair instead (frozen by exhaustive sweep)
UNDERLYING_CENSUS = {
    (3, 0): (3, 0), (2, 1): (0, 2), (3, 1): (15, 6),
    (4, 0): (15, 0), (2, 2): (13, 5), (3, 2): (234, 45),
}


@pytest.mark.parametrize("taxa_n,k", sorted(UNDERLYING_CENSUS))
def test_underlying_census(taxa_n, k):
    ok = triangle = 0
    for net in tier(tuple("abcdef"[:taxa_n]), k):
        try:
            image = underlying(net)
            assert image.tier == (net.taxa, k)
            ok += 1
        except StructureError:
            triangle += 1
    assert (ok, triangle) == UNDERLYING_CENSUS[(taxa_n, k)]


def test_underlying_needs_enough_leaves():
    single = tier(("a",), 2).networks[0]
    with pytest.raises(TooFewLeaves):
        underlying(single)
    cherry = Network.checked([(0, 1), (1, 2), (1, 3)], {2: "a", 3: "b"})
    with pytest.raises(TooFewLeaves):
        underlying(cherry)


@pytest.mark.parametrize("taxa_n,k", [(3, 0), (4, 0), (3, 1), (2, 2)])
def test_root_at_round_trip(taxa_n, k):
    for net in tier(tuple("abcdef"[:taxa_n]), k):
        try:
            image = underlying(net)
        except StructureError:
            continue
        for label in sorted(image.taxa):
            rooted = root_at(image, label)
            back = underlying(rooted)
            assert find_unrooted_isomorphism(image, back) is not None


def test_pendant_blob_is_unrootable():
    net = pendant_blob()
    dec = decompose(net)
    assert len(dec.bridges) == 3
    assert dec.redundant_bridges == frozenset({(0, 12)})
    assert dec.blobs == (frozenset({0, 1, 2, 3, 4}),)
    assert len(dec.terminal_components) == 1
    assert not is_rootable(net)
    with pytest.raises(Unrootable) as info:
        root_at(net, "a")
    assert info.value.witness == (0, 12)


def test_eliminate_terminal_components():
    net = pendant_blob()
    out, moves = eliminate_terminal_components(net)
    assert moves == [SprMove(moving=(0, 2), target=(10, 12))]
    assert out.tier == net.tier
    assert is_rootable(out)
    assert not decompose(out).terminal_components
    n1 = UnrootedNetwork.checked(N1_EDGES, N_LABELS)
    fixed, one = eliminate_terminal_components(n1)
    assert len(one) == 1 and is_rootable(fixed)
    already_fine = underlying(tier(("a", "b", "c"), 1).networks[1])
    same, nothing = eliminate_terminal_components(already_fine)
    assert nothing == []
    assert unrooted_canonical_code(same) == unrooted_canonical_code(already_fine)


def test_spr_apply_and_inverse():
    net = UnrootedNetwork.checked(N1_EDGES, N_LABELS)
    mv = SprMove(moving=(5, 8), target=(6, 10))
    assert can_apply_spr(net, mv)
    moved, info = apply_spr(net, mv)
    assert moved.tier == net.tier
    back, _ = apply_spr(moved, inverse_spr(mv, info))
    assert find_unrooted_isomorphism(net, back) is not None


def test_spr_rejects_bad_moves():
    net = UnrootedNetwork.checked(N1_EDGES, N_LABELS)
    with pytest.raises(InvalidMove):  # not an edge
        apply_spr(net, SprMove((5, 10), (0, 1)))
    with pytest.raises(InvalidMove):  # moving onto itself
        apply_spr(net, SprMove((0, 1), (1, 0)))
    with pytest.raises(InvalidMove):  # degree-1 moving endpoint
        apply_spr(net, SprMove((8, 5), (6, 10)))
    with pytest.raises(InvalidMove):  # target vanishes when 5 is suppressed
        apply_spr(net, SprMove((5, 8), (5, 6)))
    with pytest.raises(InvalidMove):  # reattachment collapses into (2,4)
        apply_spr(net, SprMove((3, 1), (0, 5)))


def _budget(net):
    x, k = len(net.taxa), net.reticulation_number
    return (2 * x + 3 * k - 1) + 2 * (k // 3)


def test_spr_sequence_within_tier_catalogs():
    for taxa_n, k in [(3, 1), (2, 2)]:
        images = {}
        for net in tier(tuple("abcdef"[:taxa_n]), k):
            try:
                image = underlying(net)
            except StructureError:
                continue
            images.setdefault(unrooted_canonical_code(image), image)
        distinct = list(images.values())
        assert len(distinct) == 1, "these tiers flatten to one shape"
        assert spr_sequence(distinct[0], distinct[0]) == []


def test_spr_sequence_three_reticulations():
    n1 = UnrootedNetwork.checked(N1_EDGES, N_LABELS)
    n2 = UnrootedNetwork.checked(N2_EDGES, N_LABELS)
    for a, b in itertools.product((n1, n2), repeat=2):
        seq = spr_sequence(a, b)
        assert len(seq) <= _budget(a)
        cur = a
        for mv in seq:
            cur, _ = apply_spr(cur, mv)
        assert find_unrooted_isomorphism(cur, b) is not None
        if unrooted_canonical_code(a) == unrooted_canonical_code(b):
            assert seq == []


def test_spr_sequence_tier_mismatch():
    n1 = UnrootedNetwork.checked(N1_EDGES, N_LABELS)
    pair = UnrootedNetwork.checked([(0, 1)], {0: "a", 1: "b"})
    with pytest.raises(TierMismatch):
        spr_sequence(n1, pair)


def test_spr_sequence_across_distinct_shapes():
    images = {}
    for net in tier(("a", "b", "c"), 2):
        try:
            image = underlying(net)
        except StructureError:
            continue
        images.setdefault(unrooted_canonical_code(image), image)
    distinct = list(images.values())
    assert len(distinct) == 7
    for a, b in itertools.product(distinct, repeat=2):
        seq = spr_sequence(a, b)
        assert len(seq) <= _budget(a)
        cur = a
        for mv in seq:
            cur, _ = apply_spr(cur, mv)
        assert find_unrooted_isomorphism(cur, b) is not None
