"""Rooted binary phylogenetic networks as immutable values.

A network is a DAG with one root (indegree 0, outdegree 1), tree nodes
(1 in / 2 out), reticulations (2 in / 1 out), and leaves (1 in / 0 out)
labeled bijectively by a taxon set X.  Node identifiers are plain ints,
local to each value; operations that derive new networks return fresh
values and never mutate.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import StructureError

ROOT = "root"
TREE = "tree"
RETICULATION = "reticulation"
LEAF = "leaf"


@dataclass(frozen=True)
class Tier:
    taxa: frozenset[str]
    k: int

    def __post_init__(self):
        assert self.k >= 0, "reticulation number must be non-negative"
        assert len(self.taxa) >= 1, "taxon set must be non-empty"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def validate(edges, leaf_labels) -> ValidationReport:
    """Check an arbitrary candidate digraph against the network invariants.

    Violations are report entries, not failures; an empty report means the
    graph is a valid network.
    """
    edges = list(edges)
    leaf_labels = dict(leaf_labels)
    problems: list[str] = []

    seen = set()
    for e in edges:
        if e in seen:
            problems.append(f"parallel edge at {e}")
        seen.add(e)
        if e[0] == e[1]:
            problems.append(f"self-loop at {e[0]}")

    nodes = {u for e in edges for u in e} | set(leaf_labels)
    if not nodes:
        problems.append("empty graph")
        return ValidationReport(tuple(problems))

    indeg = {v: 0 for v in nodes}
    outdeg = {v: 0 for v in nodes}
    for u, v in edges:
        outdeg[u] += 1
        indeg[v] += 1

    roots = sorted(v for v in nodes if indeg[v] == 0)
    if len(roots) != 1:
        problems.append(f"expected exactly one indegree-0 node, found {roots}")
    for r in roots:
        if outdeg[r] != 1:
            problems.append(f"root {r} has outdegree {outdeg[r]}, expected 1")

    leaves = set()
    for v in sorted(nodes):
        if indeg[v] == 0:
            continue  # root handled above
        pair = (indeg[v], outdeg[v])
        if pair == (1, 0):
            leaves.add(v)
        elif pair not in ((1, 2), (2, 1)):
            problems.append(f"node {v} has degree profile in={pair[0]} out={pair[1]}")

    for v in sorted(leaves):
        if v not in leaf_labels:
            problems.append(f"leaf {v} is unlabeled")
    for v in sorted(leaf_labels):
        if v not in leaves:
            problems.append(f"label {leaf_labels[v]!r} attached to non-leaf node {v}")
    labels = [leaf_labels[v] for v in sorted(leaf_labels)]
    if len(set(labels)) != len(labels):
        problems.append("duplicate leaf labels")

    # Cycle detection with an explicit witness.
    adj: dict[int, list[int]] = {v: [] for v in nodes}
    for u, v in edges:
        adj[u].append(v)
    color = {v: 0 for v in nodes}  # 0 unseen, 1 on stack, 2 done
    stack_path: list = []

    def dfs(v) -> list | None:
        color[v] = 1
        stack_path.append(v)
        for w in adj[v]:
            if color[w] == 1:
                return stack_path[stack_path.index(w):] + [w]
            if color[w] == 0:
                cyc = dfs(w)
                if cyc is not None:
                    return cyc
        color[v] = 2
        stack_path.pop()
        return None

    for v in sorted(nodes):
        if color[v] == 0:
            cyc = dfs(v)
            if cyc is not None:
                problems.append(f"directed cycle {cyc}")
                break

    return ValidationReport(tuple(problems))


class Network:
    """An immutable rooted binary network.

    Construct trusted instances directly, or use :meth:`checked` to validate
    arbitrary input first.  Equality and hashing are identity-based; use
    canonical codes to compare up to isomorphism.
    """

    __slots__ = ("edges", "leaf_labels", "nodes", "_children", "_parents",
                 "_indeg", "_outdeg", "_root", "_desc", "_canon")

    def __init__(self, edges, leaf_labels):
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted(edges))
        self.leaf_labels: dict[int, str] = dict(leaf_labels)
        self.nodes: frozenset[int] = frozenset(
            {u for e in self.edges for u in e} | set(self.leaf_labels))
        children: dict[int, list[int]] = {v: [] for v in self.nodes}
        parents: dict[int, list[int]] = {v: [] for v in self.nodes}
        for u, v in self.edges:
            children[u].append(v)
            parents[v].append(u)
        self._children = {v: tuple(sorted(c)) for v, c in children.items()}
        self._parents = {v: tuple(sorted(p)) for v, p in parents.items()}
        self._indeg = {v: len(self._parents[v]) for v in self.nodes}
        self._outdeg = {v: len(self._children[v]) for v in self.nodes}
        root = [v for v in self.nodes if self._indeg[v] == 0]
        assert len(root) == 1, f"network must have one root, got {root}"
        self._root = root[0]
        self._desc: dict[int, frozenset[int]] | None = None
        self._canon = None  # lazily filled by canon.canonical_code

    @classmethod
    def checked(cls, edges, leaf_labels) -> "Network":
        report = validate(edges, leaf_labels)
        if not report.ok:
            raise StructureError(report.violations)
        return cls(edges, leaf_labels)

    # -- basic structure ---------------------------------------------------

    @property
    def root(self) -> int:
        return self._root

    def children(self, v: int) -> tuple[int, ...]:
        return self._children[v]

    def parents(self, v: int) -> tuple[int, ...]:
        return self._parents[v]

    def indegree(self, v: int) -> int:
        return self._indeg[v]

    def outdegree(self, v: int) -> int:
        return self._outdeg[v]

    def role(self, v: int) -> str:
        if self._indeg[v] == 0:
            return ROOT
        if self._outdeg[v] == 0:
            return LEAF
        if self._indeg[v] == 2:
            return RETICULATION
        return TREE

    def is_leaf(self, v: int) -> bool:
        return self._outdeg[v] == 0

    def is_reticulation(self, v: int) -> bool:
        return self._indeg[v] == 2

    def is_tree_node(self, v: int) -> bool:
        return self._indeg[v] == 1 and self._outdeg[v] == 2

    def leaves(self) -> tuple[int, ...]:
        return tuple(sorted(v for v in self.nodes if self.is_leaf(v)))

    def reticulations(self) -> tuple[int, ...]:
        return tuple(sorted(v for v in self.nodes if self.is_reticulation(v)))

    @property
    def taxa(self) -> frozenset[str]:
        return frozenset(self.leaf_labels.values())

    @property
    def tier(self) -> Tier:
        return Tier(self.taxa, reticulation_number(self))

    def leaf_with_label(self, label: str) -> int:
        for v, lab in self.leaf_labels.items():
            if lab == label:
                return v
        raise KeyError(label)

    def fresh_node(self) -> int:
        return max(self.nodes) + 1

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._children.get(u, ())

    def relabeled(self, mapping: dict[int, int]) -> "Network":
        """A copy with node ids renamed through a bijection."""
        assert len(set(mapping.values())) == len(self.nodes), "mapping must be a bijection"
        return Network(
            [(mapping[u], mapping[v]) for u, v in self.edges],
            {mapping[v]: lab for v, lab in self.leaf_labels.items()})

    # -- reachability ------------------------------------------------------

    def descendants(self, v: int) -> frozenset[int]:
        """All nodes reachable from v, including v itself."""
        if self._desc is None:
            desc: dict[int, frozenset[int]] = {}
            for u in self._topological_order_reversed():
                acc: set[int] = {u}
                for c in self._children[u]:
                    acc |= desc[c]
                desc[u] = frozenset(acc)
            self._desc = desc
        return self._desc[v]

    def _topological_order_reversed(self):
        order: list[int] = []
        pending = {v: self._outdeg[v] for v in self.nodes}
        queue = sorted(v for v in self.nodes if pending[v] == 0)
        while queue:
            v = queue.pop()
            order.append(v)
            for p in self._parents[v]:
                pending[p] -= 1
                if pending[p] == 0:
                    queue.append(p)
        assert len(order) == len(self.nodes), "graph has a directed cycle"
        return order

    def __repr__(self):
        return (f"Network(|V|={len(self.nodes)}, |X|={len(self.leaf_labels)}, "
                f"k={reticulation_number(self)})")


def reticulation_number(net: Network) -> int:
    k = len(net.edges) - len(net.nodes) + 1
    assert k == len(net.reticulations()), "edge/node count disagrees with reticulation count"
    return k


def assert_counts(net: Network) -> None:
    """The binary degree constraints force |V| = 2|X|+2k and |E| = 2|X|+3k-1."""
    n, k = len(net.leaf_labels), reticulation_number(net)
    assert len(net.nodes) == 2 * n + 2 * k, "node count off for tier"
    assert len(net.edges) == 2 * n + 3 * k - 1, "edge count off for tier"


def is_above(net: Network, a, b: int) -> bool:
    """True iff b is reachable from a; for an edge a=(x,y), from its head y.

    Reflexive on nodes: every node is above itself.
    """
    if isinstance(a, tuple):
        x, y = a
        assert net.has_edge(x, y), f"edge {a} not in network"
        return b in net.descendants(y)
    return b in net.descendants(a)


def lca_set(net: Network, u: int, v: int) -> frozenset[int]:
    """The lowest common ancestors of u and v.

    These are the common ancestors with no other common ancestor strictly
    below them; pairwise incomparable, and every common ancestor is above
    at least one of them.  Non-empty since the root is above everything.
    """
    common = [x for x in net.nodes
              if u in net.descendants(x) and v in net.descendants(x)]
    common_set = set(common)
    return frozenset(x for x in common
                     if net.descendants(x) & common_set == {x})


def is_downward_closed(net: Network, Y) -> bool:
    Y = set(Y)
    assert Y <= net.nodes, "Y must be a subset of the node set"
    return all(c in Y for v in Y for c in net.children(v))
