"""Exhaustive ground truth for small instances.

Everything here is brute force on purpose: tier census by generate-and-
validate, exact move distances by bidirectional breadth-first search over
canonical codes, and agreement-forest distance by scanning all set
partitions of the leaves.  These are the references the constructive
algorithms are tested against.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import networkx as nx

from .canon import canonical_code
from .errors import (CompositionInvalid, PreconditionViolated,
                     ScaleLimitExceeded, TierMismatch)
from .moves import MOVE_CLASSES, apply_move, enumerate_moves
from .network import Network, Tier, reticulation_number, validate


def _tier_text(net) -> str:
    return f"({','.join(sorted(net.taxa))}; k={reticulation_number(net)})"

MAX_TIER_TAXA = 4
MAX_TIER_RETICULATIONS = 2
MAX_BFS_NODES = 14  # compiled ceiling for exact_distance
MAX_MAF_TAXA = 7


# -- tree and tier enumeration ----------------------------------------------

def enumerate_trees(taxa) -> list[Network]:
    """All rooted binary trees on the taxa, one per labeled topology,
    by inserting leaves into every edge (counts follow (2n-3)!!)."""
    labels = sorted(taxa)
    assert labels, "need at least one taxon"
    assert len(set(labels)) == len(labels), "duplicate taxa"
    if len(labels) > 6:
        raise ScaleLimitExceeded(f"{len(labels)} taxa is beyond the tree census")
    first = Network.checked([(0, 1)], {1: labels[0]})
    trees = [first]
    for label in labels[1:]:
        grown = []
        for tree in trees:
            for u, v in tree.edges:
                mid = tree.fresh_node()
                leaf = mid + 1
                edges = [e for e in tree.edges if e != (u, v)]
                edges += [(u, mid), (mid, v), (mid, leaf)]
                new_labels = dict(tree.leaf_labels)
                new_labels[leaf] = label
                grown.append(Network.checked(edges, new_labels))
        trees = grown
    return trees


def _compositions(total: int, slots: int):
    if slots == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, slots - 1):
            yield (head,) + rest


def _ordered_pairings(points):
    """All ways to split the points into ordered (tail, head) pairs."""
    if not points:
        yield ()
        return
    first, rest = points[0], points[1:]
    for i, other in enumerate(rest):
        remaining = rest[:i] + rest[i + 1:]
        for more in _ordered_pairings(remaining):
            yield ((first, other),) + more
            yield ((other, first),) + more


@dataclass(frozen=True)
class TierCatalog:
    tier: Tier
    networks: tuple[Network, ...]
    code_index: dict  # code bytes -> position in networks

    def __len__(self):
        return len(self.networks)

    def __iter__(self):
        return iter(self.networks)

    def index_of(self, net: Network) -> int:
        code = canonical_code(net).data
        if code not in self.code_index:
            raise KeyError("network is not in this tier catalog")
        return self.code_index[code]


def enumerate_tier(taxa, k: int) -> TierCatalog:
    """Every network with the given taxa and reticulation number, up to
    isomorphism.

    Construction: take each tree on the taxa, distribute 2k subdivision
    points over its edges (ordered along each edge), then add k new edges
    over every ordered pairing of the points; keep what validates and
    deduplicate by canonical code.
    """
    labels = sorted(taxa)
    if len(labels) > MAX_TIER_TAXA or k > MAX_TIER_RETICULATIONS:
        raise ScaleLimitExceeded(
            f"tier ({len(labels)} taxa, k={k}) is beyond the census limits "
            f"({MAX_TIER_TAXA} taxa, k={MAX_TIER_RETICULATIONS})")
    assert k >= 0
    found: dict[bytes, Network] = {}
    for tree in enumerate_trees(labels):
        tree_edges = list(tree.edges)
        base = tree.fresh_node()
        for comp in _compositions(2 * k, len(tree_edges)):
            edges = []
            points = []
            nxt = base
            for (u, v), count in zip(tree_edges, comp):
                prev = u
                for _ in range(count):
                    edges.append((prev, nxt))
                    points.append(nxt)
                    prev = nxt
                    nxt += 1
                edges.append((prev, v))
            for pairing in _ordered_pairings(points):
                candidate = edges + list(pairing)
                if len(set(candidate)) != len(candidate):
                    continue
                report = validate(candidate, tree.leaf_labels)
                if not report.ok:
                    continue
                net = Network(tuple(candidate), dict(tree.leaf_labels))
                code = canonical_code(net).data
                found.setdefault(code, net)
    ordered = sorted(found.items())
    networks = tuple(net for _, net in ordered)
    index = {code: i for i, (code, _) in enumerate(ordered)}
    return TierCatalog(Tier(frozenset(labels), k), networks, index)


# -- exact distances ---------------------------------------------------------

def _neighbors(net: Network, move_class: str):
    for move in enumerate_moves(net, move_class):
        yield apply_move(net, move)[0]


def exact_distance(a: Network, b: Network, move_class: str = "rspr",
                   max_nodes: int = 12) -> float:
    """Minimum number of moves turning a into b, or float('inf').

    Bidirectional BFS over canonical codes; a meeting sum can only be
    returned once the combined search depth shows no shorter path remains.
    """
    assert move_class in MOVE_CLASSES
    if a.tier != b.tier:
        raise TierMismatch(_tier_text(a) + " vs " + _tier_text(b))
    if max_nodes > MAX_BFS_NODES:
        raise ScaleLimitExceeded(
            f"max_nodes {max_nodes} exceeds the compiled ceiling "
            f"{MAX_BFS_NODES}")
    if len(a.nodes) > max_nodes:
        raise ScaleLimitExceeded(
            f"{len(a.nodes)} nodes exceeds the search limit {max_nodes}")
    code_a, code_b = canonical_code(a).data, canonical_code(b).data
    if code_a == code_b:
        return 0
    dist = ({code_a: 0}, {code_b: 0})
    front = ([a], [b])
    depth = [0, 0]
    best = float("inf")
    while front[0] and front[1]:
        if depth[0] + depth[1] >= best:
            return best
        side = 0 if len(front[0]) <= len(front[1]) else 1
        mine, theirs = dist[side], dist[1 - side]
        depth[side] += 1
        grown = []
        for net in front[side]:
            for nbr in _neighbors(net, move_class):
                code = canonical_code(nbr).data
                if code in mine:
                    continue
                mine[code] = depth[side]
                grown.append(nbr)
                if code in theirs:
                    best = min(best, depth[side] + theirs[code])
        front[side][:] = grown
    return best


# -- move graphs --------------------------------------------------------------

@dataclass(frozen=True)
class MoveGraph:
    """The tier's networks as vertices, one edge per nontrivial move."""
    catalog: TierCatalog
    move_class: str
    adjacency: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class MoveGraphStats:
    components: tuple[tuple[int, ...], ...]  # sorted vertex indices
    diameters: tuple[int, ...]               # matching order

    @property
    def component_count(self) -> int:
        return len(self.components)


def build_move_graph(catalog: TierCatalog, move_class: str) -> MoveGraph:
    assert move_class in MOVE_CLASSES
    adjacency = []
    for i, net in enumerate(catalog.networks):
        out = set()
        for nbr in _neighbors(net, move_class):
            code = canonical_code(nbr).data
            assert code in catalog.code_index, \
                "move left the tier census — enumeration is incomplete"
            j = catalog.code_index[code]
            assert j != i, "nontrivial move produced an isomorphic network"
            out.add(j)
        adjacency.append(tuple(sorted(out)))
    for i, row in enumerate(adjacency):
        for j in row:
            assert i in adjacency[j], "move graph is not symmetric"
    return MoveGraph(catalog, move_class, tuple(adjacency))


def _bfs_depths(graph: MoveGraph, start: int) -> dict[int, int]:
    depths = {start: 0}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in graph.adjacency[v]:
            if w not in depths:
                depths[w] = depths[v] + 1
                queue.append(w)
    return depths


def move_graph_stats(graph: MoveGraph) -> MoveGraphStats:
    unseen = set(range(len(graph.catalog)))
    components = []
    while unseen:
        start = min(unseen)
        comp = sorted(_bfs_depths(graph, start))
        unseen -= set(comp)
        components.append(tuple(comp))
    diameters = []
    for comp in components:
        diameters.append(max(max(_bfs_depths(graph, v).values())
                             for v in comp))
    return MoveGraphStats(tuple(components), tuple(diameters))


def all_pairs_distances(graph: MoveGraph) -> list[list[float]]:
    n = len(graph.catalog)
    matrix = [[float("inf")] * n for _ in range(n)]
    for i in range(n):
        for j, d in _bfs_depths(graph, i).items():
            matrix[i][j] = d
    return matrix


# -- agreement forests --------------------------------------------------------

def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [part[i] + [first]] + part[i + 1:]
        yield part + [[first]]


def _undirected_adjacency(net: Network) -> dict[int, set]:
    adj: dict[int, set] = {v: set() for v in net.nodes}
    for u, v in net.edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def _spanning_nodes(adj, targets) -> set:
    """Nodes of the minimal subtree connecting the targets (input is a tree)."""
    targets = list(targets)
    nodes = {targets[0]}
    for goal in targets[1:]:
        # BFS path from the already-spanned set to the next target
        parent = {t: None for t in nodes}
        queue = deque(nodes)
        while queue:
            v = queue.popleft()
            if v == goal:
                break
            for w in adj[v]:
                if w not in parent:
                    parent[w] = v
                    queue.append(w)
        assert goal in parent, "tree is disconnected"
        v = goal
        while v is not None and v not in nodes:
            nodes.add(v)
            v = parent[v]
    return nodes


def _block_shape(net: Network, adj, node_for_label, block):
    """Rooted topology of the restriction to the block, as a nested tuple.

    The subtree spanning the block is rooted at its node nearest the
    network root, degree-two nodes are suppressed, and (only) the root
    sentinel can be a labeled endpoint that still has a subtree below it.
    """
    targets = {node_for_label[lab]: lab for lab in block}
    span = _spanning_nodes(adj, list(targets))
    depth = {net.root: 0}
    order = [net.root]
    for v in order:
        for w in net.children(v):
            depth[w] = depth[v] + 1
            order.append(w)
    top = min(span, key=depth.__getitem__)

    def rec(v, parent):
        kids = [w for w in adj[v] if w != parent and w in span]
        shapes = [rec(w, v) for w in kids]
        if v in targets:
            shapes.append(("L", targets[v]))
        assert shapes, "spanning subtree endpoint is not a target"
        if len(shapes) == 1:
            return shapes[0]
        return ("N", tuple(sorted(shapes)))

    return rec(top, None), span


def maf_distance(t1: Network, t2: Network) -> int:
    """Agreement-forest distance between two trees on the same taxa.

    The root is treated as an extra labeled endpoint; over all partitions
    of the taxa plus that sentinel, find the fewest blocks whose restricted
    subtrees agree and occupy disjoint nodes in both trees, minus one.
    """
    for t in (t1, t2):
        if reticulation_number(t) != 0:
            raise PreconditionViolated("agreement forests are defined on trees")
    if t1.taxa != t2.taxa:
        raise TierMismatch(f"taxa differ: {sorted(t1.taxa)} vs {sorted(t2.taxa)}")
    if len(t1.taxa) > MAX_MAF_TAXA:
        raise ScaleLimitExceeded(
            f"{len(t1.taxa)} taxa is beyond the partition scan limit")
    sentinel = "!root"
    while sentinel in t1.taxa:
        sentinel += "!"
    labels = sorted(t1.taxa) + [sentinel]

    def lookup(net):
        table = {lab: net.leaf_with_label(lab) for lab in net.taxa}
        table[sentinel] = net.root
        return table

    map1, map2 = lookup(t1), lookup(t2)
    adj1, adj2 = _undirected_adjacency(t1), _undirected_adjacency(t2)
    best = None
    for partition in _set_partitions(labels):
        if best is not None and len(partition) >= best:
            continue
        used1: set = set()
        used2: set = set()
        ok = True
        for block in partition:
            shape1, span1 = _block_shape(t1, adj1, map1, block)
            shape2, span2 = _block_shape(t2, adj2, map2, block)
            if shape1 != shape2 or used1 & span1 or used2 & span2:
                ok = False
                break
            used1 |= span1
            used2 |= span2
        if ok:
            best = len(partition)
    assert best is not None, "the all-singletons partition always agrees"
    return best - 1


# -- composed lower-bound instances -------------------------------------------

def build_mycorrhizal(trees, reticulate: Network) -> Network:
    """Graft each tree onto one leaf of the reticulate part.

    Pairing is by position: the i-th tree replaces the i-th leaf of
    ``reticulate`` in sorted label order.  The reticulate part must keep a
    biconnected interior once its root and leaves are stripped, so that
    the graft points cannot interact.
    """
    trees = list(trees)
    slots = sorted(reticulate.taxa)
    if len(trees) != len(slots):
        raise CompositionInvalid(
            f"{len(trees)} trees for {len(slots)} graft leaves")
    seen_taxa: set = set()
    for t in trees:
        if reticulation_number(t) != 0:
            raise CompositionInvalid("graft components must be trees")
        if seen_taxa & t.taxa:
            raise CompositionInvalid("graft components share taxa")
        seen_taxa |= t.taxa

    interior = [v for v in reticulate.nodes
                if v != reticulate.root and not reticulate.is_leaf(v)]
    core = nx.Graph()
    core.add_nodes_from(interior)
    core.add_edges_from((u, v) for u, v in reticulate.edges
                        if u in set(interior) and v in set(interior))
    if core.number_of_nodes() < 3 or not nx.is_biconnected(core):
        raise CompositionInvalid(
            "reticulate part must have a biconnected interior")

    edges = list(reticulate.edges)
    labels: dict[int, str] = {}
    offset = max(reticulate.nodes) + 1
    for tree, slot in zip(trees, slots):
        leaf = reticulate.leaf_with_label(slot)
        parent = reticulate.parents(leaf)[0]
        edges.remove((parent, leaf))
        troot = tree.root
        tchild = tree.children(troot)[0]
        for u, v in tree.edges:
            if (u, v) == (troot, tchild):
                continue
            edges.append((u + offset, v + offset))
        edges.append((parent, tchild + offset))
        for v, lab in tree.leaf_labels.items():
            labels[v + offset] = lab
        offset += max(tree.nodes) + 1
    composed = Network.checked(edges, labels)
    assert composed.tier == Tier(frozenset(seen_taxa),
                                 reticulation_number(reticulate))
    return composed
