"""Structural validation and basic graph accessors."""
import pytest
from hypothesis import given, strategies as st

from conftest import ABC, tier
from netmoves.errors import StructureError
from netmoves.network import (LEAF, RETICULATION, ROOT, TREE, Network,
                              assert_counts, is_above, is_downward_closed,
                              lca_set, reticulation_number, validate)

CHERRY = ([(0, 1), (1, 2), (1, 3)], {2: "a", 3: "b"})
# one reticulation squeezed between two tree nodes
DIAMOND = ([(0, 1), (1, 2), (1, 3), (2, 3), (2, 4), (3, 5)],
           {4: "x", 5: "y"})


def test_cherry_roles():
    net = Network.checked(*CHERRY)
    assert net.root == 0
    assert net.role(0) == ROOT
    assert net.role(1) == TREE
    assert net.role(2) == LEAF
    assert net.taxa == frozenset({"a", "b"})
    assert reticulation_number(net) == 0


def test_reticulation_role_and_counts():
    net = Network.checked(*DIAMOND)
    assert net.role(3) == RETICULATION
    assert net.is_reticulation(3)
    assert reticulation_number(net) == 1
    assert_counts(net)
    # |V| = 2|X| + 2k and |E| = 2|X| + 3k - 1
    assert len(net.nodes) == 2 * 2 + 2 * 1
    assert len(net.edges) == 2 * 2 + 3 * 1 - 1


@pytest.mark.parametrize("edges,labels,fragment", [
    ([(0, 1), (1, 0)], {}, "cycle"),
    ([(0, 1), (0, 1)], {1: "a"}, "parallel"),
    ([(0, 1), (0, 2)], {1: "a", 2: "b"}, "degree"),
    ([(0, 1), (1, 2), (1, 3), (4, 5), (5, 6), (5, 7)],
     {2: "a", 3: "b", 6: "c", 7: "d"}, "indegree-0"),
    ([(0, 1), (1, 2), (1, 3)], {2: "a"}, "unlabeled"),
    ([(0, 1), (1, 2), (1, 3)], {2: "a", 3: "a"}, "duplicate"),
    ([(0, 1), (1, 2), (1, 3), (2, 4)], {3: "b", 4: "a"}, "degree"),
])
def test_invalid_structures_rejected(edges, labels, fragment):
    report = validate(edges, labels)
    assert report.violations
    assert any(fragment in v for v in report.violations), report.violations
    with pytest.raises(StructureError):
        Network.checked(edges, labels)


def test_checked_message_lists_all_violations():
    try:
        Network.checked([(0, 1), (0, 2), (1, 2)], {})
    except StructureError as exc:
        assert len(exc.violations) >= 2
    else:
        raise AssertionError("invalid network was accepted")


def test_parent_child_inverses():
    for net in tier(ABC, 1).networks:
        for u, v in net.edges:
            assert v in net.children(u)
            assert u in net.parents(v)
        for v in net.nodes:
            assert net.indegree(v) == len(net.parents(v))
            assert net.outdegree(v) == len(net.children(v))


def test_descendants_and_is_above():
    net = Network.checked(*DIAMOND)
    assert net.descendants(2) >= {3, 4, 5}
    assert is_above(net, 0, 5)
    assert is_above(net, 2, 5)
    assert not is_above(net, 5, 2)
    assert not is_above(net, 4, 5)


def test_lca_set_of_leaves_under_one_cherry():
    net = Network.checked([(0, 1), (1, 2), (1, 5), (2, 3), (2, 4)],
                          {3: "a", 4: "b", 5: "c"})
    assert lca_set(net, 3, 4) == {2}
    assert lca_set(net, 3, 5) == {1}


def test_is_downward_closed():
    net = Network.checked(*DIAMOND)
    assert is_downward_closed(net, frozenset({4, 5}))
    assert not is_downward_closed(net, frozenset({2}))


def test_leaf_lookup_and_fresh_node():
    net = Network.checked(*CHERRY)
    assert net.leaf_with_label("a") == 2
    assert net.fresh_node() not in net.nodes


def test_relabeled_is_isomorphic():
    from netmoves.canon import canonical_code
    net = Network.checked(*DIAMOND)
    mapping = {n: n + 100 for n in net.nodes}
    other = net.relabeled(mapping)
    assert canonical_code(other) == canonical_code(net)


@given(st.integers(2, 30))
def test_every_tree_node_has_two_children_in_catalog(seed):
    nets = tier(ABC, 1).networks
    net = nets[seed % len(nets)]
    for v in net.nodes:
        if net.role(v) == TREE:
            assert net.outdegree(v) == 2 and net.indegree(v) == 1
        elif net.role(v) == RETICULATION:
            assert net.outdegree(v) == 1 and net.indegree(v) == 2
