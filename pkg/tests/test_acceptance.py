"""Acceptance gate: one test per shipped guarantee, each printing a single
pass/fail line under ``pytest -v``.

Scope: every check runs exhaustively over the enumerated small tiers (the
pair-grid checks over PAIR_TIERS, the head-rewrite check additionally over
three-taxa tier 2), so a pass is a census, not a sample.
"""
import itertools
import random

import pytest

from conftest import AB, ABC, ABCD, bipartition_trees, tier
from netmoves.canon import canonical_code, find_isomorphism, is_isomorphic
from netmoves.errors import (ExceptionalNetwork, StructureError,
                             TooFewLeaves)
from netmoves.moves import TAIL, apply_move, enumerate_moves, move_distance
from netmoves.network import Network, reticulation_number, validate
from netmoves.newick import (parse_edge_list, parse_enewick, write_edge_list,
                             write_enewick)
from netmoves.oracle import (all_pairs_distances, build_move_graph,
                             build_mycorrhizal, exact_distance, maf_distance)
from netmoves.rewrite import decompose_tail_move, rewrite_head_move
from netmoves.sequence import (green_line_rspr, green_line_tail,
                               replay_sequence)
from netmoves.unrooted import (UnrootedNetwork, apply_spr, decompose,
                               eliminate_terminal_components,
                               find_unrooted_isomorphism, is_rootable,
                               root_at, spr_sequence, underlying,
                               unrooted_canonical_code)

PAIR_TIERS = [(3, 0), (4, 0), (2, 1), (1, 2), (3, 1), (2, 2)]


def _taxa(n):
    return tuple("abcdef"[:n])


def _pendant_blob():
    return UnrootedNetwork.checked(
        [(10, 12), (11, 12), (12, 0), (0, 1), (0, 2), (1, 3), (1, 4),
         (2, 3), (2, 4), (3, 4)], {10: "a", 11: "b"})


def _double_blob():
    one = [(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
    two = [(u + 20, v + 20) for u, v in one]
    spine = [(12, 0), (13, 20), (12, 10), (12, 13), (13, 11)]
    return UnrootedNetwork.checked(one + two + spine, {10: "a", 11: "b"})


def test_01_tier_census_and_the_stuck_pair():
    for labels, expect in ((ABC, 3), (ABCD, 15)):
        independent = {canonical_code(t).data for t in bipartition_trees(labels)}
        assert len(independent) == expect
        catalog = {canonical_code(n).data for n in tier(labels, 0)}
        assert catalog == independent
    members = tier(AB, 1).networks
    assert len(members) == 2
    for net in members:
        assert enumerate_moves(net, "tail") == []
        for mv in enumerate_moves(net, "tail", include_trivial=True):
            moved, _ = apply_move(net, mv)
            assert is_isomorphic(net, moved)
    first, second = members
    flip = {"a": "b", "b": "a"}
    swapped = Network.checked(
        second.edges, {v: flip[lab] for v, lab in second.leaf_labels.items()})
    assert is_isomorphic(first, swapped), \
        "up to leaf renaming the tier has exactly one member, and it is stuck"


def test_02_move_graph_connectivity():
    def components(taxa_n, k, move_class):
        from netmoves.oracle import move_graph_stats
        graph = build_move_graph(tier(_taxa(taxa_n), k), move_class)
        return len(move_graph_stats(graph).components)

    assert components(2, 1, "tail") >= 2
    for taxa_n, k in ((3, 0), (4, 0), (3, 1), (2, 2)):
        assert components(taxa_n, k, "tail") == 1, (taxa_n, k)
    for taxa_n, k in ((2, 1), (3, 0), (4, 0), (3, 1), (2, 2)):
        assert components(taxa_n, k, "rspr") == 1, (taxa_n, k)


def test_03_head_rewrite_soundness():
    rewritten = refused = 0
    for taxa_n, k in itertools.product((1, 2, 3), (0, 1, 2)):
        for net in tier(_taxa(taxa_n), k):
            for mv in enumerate_moves(net, "head1", include_trivial=True):
                goal, _ = apply_move(net, mv)
                try:
                    plan = rewrite_head_move(net, mv)
                except ExceptionalNetwork:
                    assert (taxa_n, k) == (2, 1)
                    refused += 1
                    continue
                rewritten += 1
                if taxa_n >= 2:
                    assert len(plan.replacement) <= 4
                end = replay_sequence(net, list(plan.replacement))[-1]
                assert canonical_code(end) == canonical_code(goal)
    assert rewritten == 2103 and refused == 2


def test_04_tail_sequence_bound():
    for taxa_n, k in PAIR_TIERS:
        catalog = tier(_taxa(taxa_n), k)
        nets = catalog.networks
        matrix = all_pairs_distances(build_move_graph(catalog, "tail"))
        budget = 3 * (taxa_n + 2 * k)
        for i, j in itertools.product(range(len(nets)), repeat=2):
            try:
                seq = green_line_tail(nets[i], nets[j])
            except ExceptionalNetwork:
                assert matrix[i][j] == float("inf")
                continue
            assert all(mv.kind == TAIL for mv in seq)
            assert len(seq) <= budget
            assert len(seq) >= matrix[i][j]
            end = replay_sequence(nets[i], seq)[-1]
            assert canonical_code(end) == canonical_code(nets[j])


def test_05_rspr_sequence_bound():
    for taxa_n, k in PAIR_TIERS:
        catalog = tier(_taxa(taxa_n), k)
        nets = catalog.networks
        matrix = all_pairs_distances(build_move_graph(catalog, "rspr"))
        budget = 2 * taxa_n + 3 * k - 1
        for i, j in itertools.product(range(len(nets)), repeat=2):
            seq = green_line_rspr(nets[i], nets[j])
            assert len(seq) <= budget
            assert len(seq) >= matrix[i][j]
            end = replay_sequence(nets[i], seq)[-1]
            assert canonical_code(end) == canonical_code(nets[j])


def test_06_distance_one_decomposition():
    for taxa_n, k in PAIR_TIERS:
        bound = taxa_n + 3 * k - 1
        for net in tier(_taxa(taxa_n), k):
            for mv in enumerate_moves(net, "tail", include_trivial=True):
                steps = decompose_tail_move(net, mv)
                assert len(steps) <= bound
                goal, _ = apply_move(net, mv)
                cur = net
                for step in steps:
                    assert move_distance(cur, step) == 1
                    cur, _ = apply_move(cur, step)
                assert canonical_code(cur) == canonical_code(goal)


def test_07_distance_order():
    for taxa_n, k in PAIR_TIERS:
        catalog = tier(_taxa(taxa_n), k)
        n = len(catalog.networks)
        dist = {cls: all_pairs_distances(build_move_graph(catalog, cls))
                for cls in ("tail1", "rnni", "rspr", "tail")}
        for i, j in itertools.product(range(n), repeat=2):
            d_t1 = dist["tail1"][i][j]
            d_nni = dist["rnni"][i][j]
            d_spr = dist["rspr"][i][j]
            d_tail = dist["tail"][i][j]
            if all(d < float("inf") for d in (d_t1, d_nni, d_spr, d_tail)):
                assert d_t1 >= d_nni >= d_spr
                assert d_t1 >= d_tail >= d_spr
            if taxa_n >= 2 and d_tail < float("inf"):
                assert d_tail <= 4 * d_spr


def test_08_grafted_pair_distances():
    reticulate_parts = tier(AB, 1).networks
    trees3 = tier(("x", "y", "z"), 0).networks
    trees4 = tier(("w", "x", "y", "z"), 0).networks
    leaf_w = Network.checked([(0, 1)], {1: "w"})
    leaf_v = Network.checked([(0, 1)], {1: "v"})
    checked = 0
    for blob in reticulate_parts:
        nets = [build_mycorrhizal([t, leaf_w], blob) for t in trees3]
        for (i, m1), (j, m2) in itertools.product(enumerate(nets), repeat=2):
            expect = maf_distance(trees3[i], trees3[j])
            assert exact_distance(m1, m2, "tail") == expect
            assert exact_distance(m1, m2, "rspr") == expect
            checked += 1
    blob = reticulate_parts[0]
    nets = [build_mycorrhizal([t, leaf_v], blob) for t in trees4[:6]]
    for (i, m1), (j, m2) in itertools.product(enumerate(nets), repeat=2):
        expect = maf_distance(trees4[i], trees4[j])
        assert exact_distance(m1, m2, "tail", max_nodes=12) == expect
        assert exact_distance(m1, m2, "rspr", max_nodes=12) == expect
        checked += 1
    assert checked >= 10


def test_09_agreement_forest_matches_search():
    for labels in (AB, ABC, ABCD):
        catalog = tier(labels, 0)
        nets = catalog.networks
        matrix = all_pairs_distances(build_move_graph(catalog, "rspr"))
        for i, j in itertools.product(range(len(nets)), repeat=2):
            assert maf_distance(nets[i], nets[j]) == matrix[i][j]


def _rootable_instances():
    out = []
    for taxa_n, k in ((3, 0), (4, 0), (3, 1), (2, 2)):
        for net in tier(_taxa(taxa_n), k):
            try:
                out.append(underlying(net))
            except StructureError:
                continue
    shapes = {}
    for net in tier(ABC, 2):
        try:
            image = underlying(net)
        except StructureError:
            continue
        shapes.setdefault(unrooted_canonical_code(image), image)
    out.extend(shapes.values())
    return out


def test_10_rooting_and_terminal_components():
    from netmoves.errors import Unrootable
    blob = _pendant_blob()
    with pytest.raises(Unrootable) as caught:
        root_at(blob, "a")
    assert caught.value.witness in blob.edges

    rootable = _rootable_instances()
    for gadget in (blob, _double_blob()):
        dec = decompose(gadget)
        k = gadget.reticulation_number
        assert len(dec.terminal_components) <= k // 3
        fixed, moves = eliminate_terminal_components(gadget)
        assert len(moves) == len(dec.terminal_components), \
            "one SPR move per terminal component"
        assert is_rootable(fixed) and fixed.tier == gadget.tier
        rootable.append(fixed)
    for image in rootable:
        dec = decompose(image)
        assert not dec.redundant_bridges
        assert (len(dec.terminal_components)
                <= image.reticulation_number // 3)
        for label in sorted(image.taxa):
            rooted = root_at(image, label)
            labels = {rooted.leaf_with_label(x): x for x in rooted.taxa}
            assert validate(rooted.edges, labels).ok
            back = underlying(rooted)
            assert find_unrooted_isomorphism(back, image) is not None


def test_11_unrooted_spr_pipeline():
    shapes = {}
    for net in tier(ABC, 2):
        try:
            image = underlying(net)
        except StructureError:
            continue
        shapes.setdefault(unrooted_canonical_code(image), image)
    variants = list(shapes.values())
    n1 = UnrootedNetwork.checked(
        [(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4), (0, 5),
         (5, 8), (5, 6), (6, 9), (6, 10)], {8: "a", 9: "b", 10: "c"})
    n2 = UnrootedNetwork.checked(
        [(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4), (0, 5),
         (5, 9), (5, 6), (6, 8), (6, 10)], {8: "a", 9: "b", 10: "c"})
    grids = [variants, [n1, n2], [_double_blob()]]
    for group in grids:
        for a, b in itertools.product(group, repeat=2):
            x, k = len(a.taxa), a.reticulation_number
            budget = (2 * x + 3 * k - 1) + 2 * (k // 3)
            seq = spr_sequence(a, b)
            assert len(seq) <= budget
            cur = a
            for mv in seq:
                cur, _ = apply_spr(cur, mv)
            assert find_unrooted_isomorphism(cur, b) is not None


MALFORMED = [
    "", ";", "();", "(;)", "((a,b);", "(a,b));", "(a,,b);", "(a,b)",
    "((a)#H1,b);", "((a)#H1,(#H1,#H1));", "(#H1,a);", "((a,a),b);",
    "((a,b),(a,c));", "(a)#H1;", "((a)#H1,(b)#H1);", "(()a,b);",
    "0 -- 0\nleaf 0 a", "0 -- 1", "0 -- 1\nleaf 0 a",
    "0 -- 1\nleaf 0 a\nleaf 1 a", "0 -- 1\n0 -- 1\nleaf 0 a\nleaf 1 b",
    "0 -- 1\nleaf 0 a\nleaf 1 b\nleaf 2 c", "garbage -- --",
]


def test_12_parser_round_trip_and_fuzz():
    for taxa_n, k in PAIR_TIERS + [(3, 2)]:
        for net in tier(_taxa(taxa_n), k):
            back = parse_enewick(write_enewick(net))
            assert canonical_code(back) == canonical_code(net)
            try:
                image = underlying(net)
            except (StructureError, TooFewLeaves):
                continue
            again = parse_edge_list(write_edge_list(image))
            assert unrooted_canonical_code(again) == unrooted_canonical_code(image)

    seeds = [write_enewick(n) for n in tier(_taxa(3), 1).networks[:6]]
    rng = random.Random(20260814)
    candidates = list(MALFORMED)
    junk = "()#H1,;ab"
    for text in seeds:
        for _ in range(40):
            chars = list(text)
            for _ in range(rng.randint(1, 3)):
                pos = rng.randrange(len(chars))
                op = rng.random()
                if op < 0.4:
                    del chars[pos]
                elif op < 0.8:
                    chars[pos] = rng.choice(junk)
                else:
                    chars.insert(pos, rng.choice(junk))
            candidates.append("".join(chars))
    for text in candidates:
        if text.lstrip().startswith(("0", "garbage")):
            try:
                net = parse_edge_list(text)
            except (SyntaxError, StructureError):
                continue
            UnrootedNetwork.checked(net.edges, net.leaf_labels)
            continue
        try:
            net = parse_enewick(text)
        except (SyntaxError, StructureError):
            continue
        labels = {net.leaf_with_label(x): x for x in net.taxa}
        assert validate(net.edges, labels).ok, f"accepted invalid: {text!r}"
