"""Tail and head rearrangement moves on rooted binary networks.

A move relocates one endpoint of a directed edge onto another edge, in four
steps applied in order: delete the moving edge, subdivide the target edge
with a fresh node, suppress the vacated degree-two node, and attach the new
edge.  Tail moves relocate the tail endpoint; head moves relocate the head
endpoint (which must be a reticulation, and is reborn at the fresh node).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .canon import canonical_code
from .errors import InvalidMove, PreconditionViolated
from .network import (RETICULATION, ROOT, Network, is_above, lca_set,
                      reticulation_number)

TAIL = "tail"
HEAD = "head"

MOVE_CLASSES = ("tail", "head", "rspr", "tail1", "head1", "rnni")


@dataclass(frozen=True, order=True)
class Move:
    kind: str
    moving: tuple[int, int]
    target: tuple[int, int]

    def __post_init__(self):
        assert self.kind in (TAIL, HEAD), f"unknown move kind {self.kind!r}"


@dataclass(frozen=True)
class MoveInfo:
    """Bookkeeping from one application: the subdivision node that was
    created, the node that was suppressed, and the edge formed by the
    suppression (read at suppression time, so it names live endpoints)."""
    created: int
    suppressed: int
    merged_edge: tuple[int, int]


@dataclass(frozen=True)
class Triangle:
    apex: int
    side: int
    base: int

    @property
    def long_edge(self) -> tuple[int, int]:
        return (self.apex, self.base)

    @property
    def bottom_edge(self) -> tuple[int, int]:
        return (self.side, self.base)


def format_move(move: Move) -> str:
    (u, v), (s, t) = move.moving, move.target
    return f"{move.kind} ({u},{v})->({s},{t})"


def parse_move(text: str) -> Move:
    """Inverse of format_move, e.g. ``tail (3,5)->(0,1)``."""
    try:
        kind, rest = text.strip().split(None, 1)
        lhs, rhs = rest.replace(" ", "").split("->")
        u, v = lhs.strip("()").split(",")
        s, t = rhs.strip("()").split(",")
        return Move(kind, (int(u), int(v)), (int(s), int(t)))
    except (ValueError, AssertionError) as exc:
        raise ValueError(f"bad move literal {text!r}: {exc}") from None


def find_triangle(net: Network, u: int) -> Triangle | None:
    """The triangle having u as its side node, if any.

    A tree node has at most one: its parent x has only one other child, so
    at most one node is a child of both x and u.
    """
    if not net.is_tree_node(u):
        raise PreconditionViolated(f"find_triangle: node {u} is not a tree node")
    parents = net.parents(u)
    if not parents:
        return None
    x = parents[0]
    common = set(net.children(u)) & set(net.children(x))
    if not common:
        return None
    assert len(common) == 1, f"two triangles share side node {u}"
    return Triangle(apex=x, side=u, base=common.pop())


def is_movable(net: Network, edge: tuple[int, int]) -> bool:
    """Whether the tail endpoint of ``edge`` may be relocated at all.

    False when the tail is the root or a reticulation, or when the tail is
    the side node of a triangle and ``edge`` is not that triangle's bottom
    edge (suppressing the side node would then duplicate the long edge).
    """
    assert net.has_edge(*edge), f"is_movable: {edge} is not an edge"
    u = edge[0]
    if net.role(u) in (ROOT, RETICULATION):
        return False
    tri = find_triangle(net, u)
    if tri is not None and tri.bottom_edge != edge:
        return False
    return True


def _mechanics(net: Network, move: Move):
    """Run the four steps; return (edges, info) or None if a step is
    impossible (missing edge, bad degrees, duplicate edge)."""
    e, f = move.moving, move.target
    if e == f or not net.has_edge(*e) or not net.has_edge(*f):
        return None
    u, v = e
    s, t = f
    edges = set(net.edges)
    edges.remove(e)
    n = net.fresh_node()
    edges.remove(f)
    edges.add((s, n))
    edges.add((n, t))
    z = u if move.kind == TAIL else v
    ins = [a for (a, b) in edges if b == z]
    outs = [b for (a, b) in edges if a == z]
    if len(ins) != 1 or len(outs) != 1:
        return None
    p, c = ins[0], outs[0]
    edges.remove((p, z))
    edges.remove((z, c))
    if (p, c) in edges:
        return None
    edges.add((p, c))
    new_edge = (n, v) if move.kind == TAIL else (u, n)
    if new_edge in edges or new_edge[0] == new_edge[1]:
        return None
    edges.add(new_edge)
    return edges, MoveInfo(created=n, suppressed=z, merged_edge=(p, c))


def _try_apply(net: Network, move: Move):
    out = _mechanics(net, move)
    if out is None:
        return None
    edges, info = out
    try:
        result = Network.checked(edges, dict(net.leaf_labels))
    except Exception:
        return None
    return result, info


def can_apply(net: Network, move: Move) -> bool:
    e, f = move.moving, move.target
    if e == f or not net.has_edge(*e) or not net.has_edge(*f):
        return False
    u, v = e
    s, t = f
    if move.kind == TAIL:
        if not is_movable(net, e):
            return False
        if is_above(net, v, s):  # covers v == s; forbids creating a cycle
            return False
        if t == v:  # would duplicate the moved edge
            return False
        return True
    if not net.is_reticulation(v):
        return False
    return _try_apply(net, move) is not None


def apply_move(net: Network, move: Move) -> tuple[Network, MoveInfo]:
    if not can_apply(net, move):
        raise InvalidMove(f"cannot apply {format_move(move)}")
    out = _try_apply(net, move)
    assert out is not None, f"mechanics failed for valid move {format_move(move)}"
    result, info = out
    assert result.tier == net.tier
    assert reticulation_number(result) == reticulation_number(net)
    return result, info


def inverse_move(move: Move, info: MoveInfo) -> Move:
    """The move that undoes ``move`` on its result.

    The moved edge now ends at the created node; relocating that endpoint
    back onto the merged edge restores the original network up to the name
    of the suppressed node.
    """
    u, v = move.moving
    if move.kind == TAIL:
        return Move(TAIL, (info.created, v), info.merged_edge)
    return Move(HEAD, (u, info.created), info.merged_edge)


def move_distance(net: Network, move: Move) -> int:
    """Length of the relocation, measured on the intermediate graph.

    After deleting the moving edge and subdividing the target (no
    suppression), this is the undirected shortest-path distance from the
    moved endpoint to the subdivision node, minus one.  Distance zero means
    the move is a no-op up to isomorphism.
    """
    if not can_apply(net, move):
        raise InvalidMove(f"move_distance: cannot apply {format_move(move)}")
    (u, v), (s, t) = move.moving, move.target
    n = net.fresh_node()
    edges = set(net.edges)
    edges.remove(move.moving)
    edges.remove(move.target)
    edges.add((s, n))
    edges.add((n, t))
    adj: dict[int, set[int]] = {}
    for a, b in edges:
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    src = u if move.kind == TAIL else v
    seen = {src: 0}
    queue = deque([src])
    while queue:
        x = queue.popleft()
        if x == n:
            return seen[x] - 1
        for y in adj.get(x, ()):
            if y not in seen:
                seen[y] = seen[x] + 1
                queue.append(y)
    raise AssertionError(f"target unreachable for {format_move(move)}")


def is_trivial(net: Network, move: Move) -> bool:
    """A valid move whose result is isomorphic to its source."""
    result, _ = apply_move(net, move)
    return canonical_code(result) == canonical_code(net)


def enumerate_moves(net: Network, move_class: str = "rspr",
                    include_trivial: bool = False) -> list[Move]:
    """All valid moves of the class, in a fixed deterministic order.

    Classes: tail, head, rspr (tail or head), tail1/head1 (distance one
    only), rnni (tail1 or head1).  Moves whose result is isomorphic to the
    input are dropped unless include_trivial is set.
    """
    assert move_class in MOVE_CLASSES, f"unknown move class {move_class!r}"
    kinds = []
    if move_class in ("tail", "rspr", "tail1", "rnni"):
        kinds.append(TAIL)
    if move_class in ("head", "rspr", "head1", "rnni"):
        kinds.append(HEAD)
    distance_one = move_class in ("tail1", "head1", "rnni")
    found = []
    for kind in kinds:
        for e in net.edges:
            for f in net.edges:
                if f == e:
                    continue
                move = Move(kind, e, f)
                if not can_apply(net, move):
                    continue
                if distance_one and move_distance(net, move) != 1:
                    continue
                if not include_trivial and is_trivial(net, move):
                    continue
                found.append(move)
    return sorted(found)


def movable_edge_avoiding(net: Network, x: int, y: int) -> tuple[int, int]:
    """A movable edge that does not have both x and y below it.

    Precondition: neither x nor y is a lowest common ancestor of the pair
    (in particular x and y are incomparable).  Searches the child edges of
    the lowest common ancestors; one of them is always movable, and none
    has both nodes below it (a child above both would contradict lowestness).
    """
    lcas = lca_set(net, x, y)
    if x in lcas or y in lcas:
        raise PreconditionViolated(
            f"movable_edge_avoiding: {x} and {y} are comparable")
    for ell in sorted(lcas):
        for child in net.children(ell):
            edge = (ell, child)
            if is_movable(net, edge):
                assert not (is_above(net, edge, x) and is_above(net, edge, y)), \
                    "child edge of a lowest common ancestor covers both nodes"
                return edge
    raise AssertionError(f"no movable edge at the lowest common ancestors "
                         f"of {x}, {y}")
