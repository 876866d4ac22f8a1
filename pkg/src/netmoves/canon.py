"""Canonical forms and isomorphism for leaf-labeled graphs.

Two networks get equal canonical codes exactly when they are isomorphic as
leaf-labeled digraphs.  The code is computed by iterated color refinement
(role + leaf label, then sorted child/parent color multisets) followed by
backtracking individualization whenever refinement stabilizes with
non-singleton cells; the code is the lexicographic minimum over all
branches, which makes it a true isomorphism invariant.

The same engine, fed undirected adjacency, serves the unrooted module.
"""
from __future__ import annotations

from dataclasses import dataclass

from .network import LEAF, RETICULATION, ROOT, TREE, Network

_ROLE_RANK = {ROOT: 0, TREE: 1, RETICULATION: 2, LEAF: 3}


@dataclass(frozen=True)
class CanonicalCode:
    data: bytes
    class_invariants: tuple[int, int]  # (|X|, k)


# -- generic refinement engine ----------------------------------------------

def refine_colors(nodes, out_nb, in_nb, colors):
    """Iterate color refinement to a fixed point.

    Colors are small ints; at each round a node's new color is determined by
    its old color and the sorted color multisets of its out- and
    in-neighbors.  Stable under isomorphism by construction.
    """
    while True:
        sigs = {
            v: (colors[v],
                tuple(sorted(colors[w] for w in out_nb[v])),
                tuple(sorted(colors[w] for w in in_nb[v])))
            for v in nodes
        }
        ranks = {s: i for i, s in enumerate(sorted(set(sigs.values())))}
        new = {v: ranks[sigs[v]] for v in nodes}
        if new == colors:
            return colors
        colors = new


def _cells(nodes, colors):
    cells: dict[int, list] = {}
    for v in nodes:
        cells.setdefault(colors[v], []).append(v)
    return cells


def canonical_labeling_generic(nodes, out_nb, in_nb, init_colors, encode):
    """Minimum-code labeling via individualization-refinement.

    ``encode(labeling)`` must map a node->rank bijection to a totally
    ordered code value.  Returns (code, labeling).
    """
    nodes = sorted(nodes)

    def search(colors):
        colors = refine_colors(nodes, out_nb, in_nb, colors)
        cells = _cells(nodes, colors)
        target = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                target = cells[c]
                break
        if target is None:
            order = sorted(nodes, key=lambda v: colors[v])
            labeling = {v: i for i, v in enumerate(order)}
            return encode(labeling), labeling
        best = None
        fresh = max(colors.values()) + 1
        for v in sorted(target):
            branch = dict(colors)
            branch[v] = fresh
            cand = search(branch)
            if best is None or cand[0] < best[0]:
                best = cand
        return best

    init = refine_colors(nodes, out_nb, in_nb, init_colors)
    return search(init)


def find_isomorphism_generic(nodes1, out1, in1, colors1,
                             nodes2, out2, in2, colors2):
    """A bijection preserving edges and the given stable colorings, or None.

    Used both as the brute-force oracle for canonical codes and as the
    transport tool for moving move sequences between isomorphic networks.
    """
    colors1 = refine_colors(nodes1, out1, in1, colors1)
    colors2 = refine_colors(nodes2, out2, in2, colors2)
    if len(nodes1) != len(nodes2):
        return None
    hist1: dict[int, int] = {}
    hist2: dict[int, int] = {}
    for v in nodes1:
        hist1[colors1[v]] = hist1.get(colors1[v], 0) + 1
    for v in nodes2:
        hist2[colors2[v]] = hist2.get(colors2[v], 0) + 1
    if hist1 != hist2:
        return None

    order = sorted(nodes1, key=lambda v: (hist1[colors1[v]], colors1[v], v))
    mapping: dict = {}
    used: set = set()

    def consistent(v, w):
        for x, y in mapping.items():
            if (x in out1[v]) != (y in out2[w]):
                return False
            if (v in out1[x]) != (w in out2[y]):
                return False
        return True

    def extend(i):
        if i == len(order):
            return True
        v = order[i]
        for w in sorted(nodes2):
            if w in used or colors2[w] != colors1[v]:
                continue
            if not consistent(v, w):
                continue
            mapping[v] = w
            used.add(w)
            if extend(i + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    if not extend(0):
        return None
    edges1 = {(u, v) for u in nodes1 for v in out1[u]}
    edges2 = {(u, v) for u in nodes2 for v in out2[u]}
    assert {(mapping[u], mapping[v]) for u, v in edges1} == edges2, \
        "isomorphism search returned a non-isomorphism"
    return dict(mapping)


# -- rooted networks ---------------------------------------------------------

def _rooted_structure(net: Network):
    out_nb = {v: net.children(v) for v in net.nodes}
    in_nb = {v: net.parents(v) for v in net.nodes}
    sig0 = {v: (_ROLE_RANK[net.role(v)], net.leaf_labels.get(v, ""))
            for v in net.nodes}
    ranks = {s: i for i, s in enumerate(sorted(set(sig0.values())))}
    colors = {v: ranks[sig0[v]] for v in net.nodes}
    return out_nb, in_nb, colors


def _encode_rooted(net: Network):
    def encode(labeling):
        edges = tuple(sorted((labeling[u], labeling[v]) for u, v in net.edges))
        labels = tuple(sorted((labeling[v], lab)
                              for v, lab in net.leaf_labels.items()))
        return edges, labels
    return encode


def _canonical_pair(net: Network):
    if net._canon is None:
        out_nb, in_nb, colors = _rooted_structure(net)
        code_tuple, labeling = canonical_labeling_generic(
            net.nodes, out_nb, in_nb, colors, _encode_rooted(net))
        k = len(net.edges) - len(net.nodes) + 1
        code = CanonicalCode(repr(code_tuple).encode(),
                             (len(net.leaf_labels), k))
        net._canon = (code, labeling)
    return net._canon


def canonical_code(net: Network) -> CanonicalCode:
    return _canonical_pair(net)[0]


def canonical_labeling(net: Network) -> dict[int, int]:
    """node -> rank bijection realizing the canonical code.

    Isomorphic networks yield the same code under their respective
    labelings (the labelings themselves may differ by an automorphism).
    """
    return dict(_canonical_pair(net)[1])


def is_isomorphic(a: Network, b: Network) -> bool:
    return canonical_code(a) == canonical_code(b)


def find_isomorphism(a: Network, b: Network):
    """A leaf-label-respecting digraph isomorphism a -> b, or None.

    Independent of canonical codes; used as the oracle that codes are a
    congruence for isomorphism.
    """
    if a.taxa != b.taxa:
        return None
    out1, in1, c1 = _rooted_structure(a)
    out2, in2, c2 = _rooted_structure(b)
    return find_isomorphism_generic(a.nodes, out1, in1, c1,
                                    b.nodes, out2, in2, c2)
