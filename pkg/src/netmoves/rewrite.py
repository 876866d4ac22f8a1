"""Rewriting head moves as tail moves, and long tail moves as short ones.

Every distance-1 head move falls into one of six local patterns, keyed by
where the target edge sits relative to the moving head's neighborhood:
sideways below a tree node (a), sideways above a reticulation (b), downward
through a tree node (c) or reticulation (d), upward through a tree node (e)
or reticulation (f).  Cases (e)/(f) are the reverses of (c)/(d).  Each
pattern has a small template of tail moves; templates with a free "extra
tail" edge scan candidates in canonical order.  Every produced sequence is
replayed and checked isomorphic to the head move's result before it is
returned, so a template that does not fit simply falls through to the next
strategy.

Long tail moves decompose into distance-1 steps by walking the moving tail
along shortest directed paths through a lowest common ancestor of the old
and new attachment points.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .canon import canonical_code, canonical_labeling, find_isomorphism
from .errors import ExceptionalNetwork, InvalidMove, NotDistanceOne
from .moves import (HEAD, TAIL, Move, apply_move, can_apply, enumerate_moves,
                    inverse_move, is_movable, move_distance)
from .network import Network, is_above, lca_set, reticulation_number


@dataclass(frozen=True)
class RewritePlan:
    original: Move
    replacement: tuple[Move, ...]
    case_tag: str


@dataclass(frozen=True)
class HeadMoveCase:
    case: str                      # one of a..f
    bindings: dict = field(hash=False)
    coincidences: tuple[str, ...] = ()


def classify_head_move(net: Network, move: Move) -> HeadMoveCase:
    """Match a valid distance-1 head move to its local pattern.

    Returns the case letter, the named nodes of the pattern, and which of
    the allowed node coincidences hold (u=w in case a, x=y in a/b, u=y in
    d/f — exactly the ones that can occur in a valid move).
    """
    if move.kind != HEAD:
        raise InvalidMove("classification applies to head moves")
    if move_distance(net, move) != 1:
        raise NotDistanceOne(f"head move has distance != 1")
    (u, v), (s, t) = move.moving, move.target
    w = next(p for p in net.parents(v) if p != u)
    c = net.children(v)[0]
    coin = []
    if s == w:
        # sideways below the tree node w; target is w's other child edge
        y, x = t, c
        z, w_parent = w, net.parents(w)[0]
        if u == w_parent:
            coin.append("u=w")
        if x == y:
            coin.append("x=y")
        return HeadMoveCase("a", {"u": u, "v": v, "w": w_parent, "x": x,
                                  "y": y, "z": z}, tuple(coin))
    if t == w:
        case = "e" if net.is_tree_node(w) else "f"
        y = next(p for p in net.parents(w) if p != s) if case == "f" \
            else next(ch for ch in net.children(w) if ch != v)
        if case == "f" and u == y:
            coin.append("u=y")
        return HeadMoveCase(case, {"u": u, "v": v, "w": w, "x": c,
                                   "y": y, "z": s}, tuple(coin))
    if t == c:
        # sideways above the reticulation c; target is its other in-edge
        assert net.is_reticulation(c), "distance-1 sideways target below a tree node child is impossible"
        x, z, y = w, c, s
        if x == y:
            coin.append("x=y")
        return HeadMoveCase("b", {"u": u, "v": v, "x": x, "y": y, "z": z},
                            tuple(coin))
    if s == c:
        if net.is_tree_node(c):
            y = next(ch for ch in net.children(c) if ch != t)
            return HeadMoveCase("c", {"u": u, "v": v, "w": w, "x": t,
                                      "y": y, "z": c}, ())
        y = next(p for p in net.parents(c) if p != v)
        if u == y:
            coin.append("u=y")
        return HeadMoveCase("d", {"u": u, "v": v, "w": t, "x": w,
                                  "y": y, "z": c}, tuple(coin))
    raise AssertionError("distance-1 head move matches no local pattern")


# -- helpers -------------------------------------------------------------------

def _ranked_edges(net: Network):
    ranks = canonical_labeling(net)
    return sorted(net.edges, key=lambda e: (ranks[e[0]], ranks[e[1]]))


def _apply_chain(net: Network, moves):
    """Apply tail moves in order; returns (final, chain) where chain holds
    (net_before, move, info, net_after) per step.  Raises on invalid step."""
    chain = []
    cur = net
    for mv in moves:
        nxt, info = apply_move(cur, mv)
        chain.append((cur, mv, info, nxt))
        cur = nxt
    return cur, chain


def _reverse_transport(start: Network, chain):
    """Replay the inverses of a move chain, transported onto ``start``
    (which must be isomorphic to the chain's final network)."""
    moves = []
    cur = start
    for net_before, mv, info, net_after in reversed(chain):
        inv = inverse_move(mv, info)
        psi = find_isomorphism(net_after, cur)
        assert psi is not None, "reverse transport lost the isomorphism"
        mapped = Move(TAIL, (psi[inv.moving[0]], psi[inv.moving[1]]),
                      (psi[inv.target[0]], psi[inv.target[1]]))
        moves.append(mapped)
        cur, _ = apply_move(cur, mapped)
    return moves, cur


def _solve_one(cur: Network, moving_edge, want: bytes):
    """The unique-ish closing move: relocate ``moving_edge`` so the result
    has canonical code ``want``; None if no target works."""
    if not cur.has_edge(*moving_edge):
        return None
    for target in _ranked_edges(cur):
        mv = Move(TAIL, moving_edge, target)
        if not can_apply(cur, mv):
            continue
        res, _ = apply_move(cur, mv)
        if canonical_code(res).data == want:
            return mv
    return None


def _bridge(net: Network, goal: Network, fwd: int, bwd: int,
            cap: int = 20000):
    """Meet-in-the-middle tail-move search, used only as a last resort on
    small networks when every template strategy has failed."""
    if len(net.nodes) > 14:
        return None
    want = canonical_code(goal).data
    front = {canonical_code(net).data: (net, [])}
    layers_f = [front]
    for _ in range(fwd):
        new = {}
        for cur, path in list(layers_f[-1].values()):
            for mv in enumerate_moves(cur, "tail"):
                nxt, info = apply_move(cur, mv)
                code = canonical_code(nxt).data
                if any(code in lay for lay in layers_f) or code in new:
                    continue
                new[code] = (nxt, path + [(cur, mv, info, nxt)])
                if len(new) > cap:
                    return None
        layers_f.append(new)
    forward = {}
    for lay in layers_f:
        forward.update(lay)
    back = {canonical_code(goal).data: (goal, [])}
    layers_b = [back]
    for _ in range(bwd):
        new = {}
        for cur, chain in list(layers_b[-1].values()):
            for mv in enumerate_moves(cur, "tail"):
                nxt, info = apply_move(cur, mv)
                code = canonical_code(nxt).data
                if any(code in lay for lay in layers_b) or code in new:
                    continue
                new[code] = (nxt, chain + [(cur, mv, info, nxt)])
                if len(new) > cap:
                    return None
        layers_b.append(new)
    best = None
    for lay in layers_b:
        for code, (bnet, bchain) in lay.items():
            if code not in forward:
                continue
            fnet, fpath = forward[code]
            cost = len(fpath) + len(bchain)
            if best is None or cost < best[0]:
                best = (cost, fnet, fpath, bchain)
    if best is None:
        return None
    _, fnet, fpath, bchain = best
    moves = [mv for (_, mv, _, _) in fpath]
    closing, final = _reverse_transport(fnet, bchain)
    assert canonical_code(final).data == want
    return moves + closing


def _extra_tail_candidates(net: Network, avoid, first_target):
    """Movable edges usable as an extra tail, canonically ordered; edges
    whose endpoints meet ``avoid`` come last (they rarely verify)."""
    ranked = []
    for s, t in _ranked_edges(net):
        if not is_movable(net, (s, t)):
            continue
        mv = Move(TAIL, (s, t), first_target)
        if not can_apply(net, mv):
            continue
        clash = s in avoid or t in avoid
        ranked.append((clash, (s, t)))
    ranked.sort(key=lambda item: item[0])
    return [edge for _, edge in ranked]


# -- case drivers ---------------------------------------------------------------

def _case_a(net, move, case, M, info_m):
    b = case.bindings
    u, v, w, x, y, z = (b[k] for k in "uvwxyz")
    want = canonical_code(M).data
    if "u=w" not in case.coincidences:
        m1 = Move(TAIL, (z, y), (v, x))
        _, chain = _apply_chain(net, [m1])
        info1 = chain[0][2]
        m2 = Move(TAIL, (info1.created, x), info1.merged_edge)
        return [m1, m2], "a.1"
    # triangle at z: expand it with an extra tail, run the sideways shuffle,
    # then put the extra tail back where it was
    for s, t in _extra_tail_candidates(net, {u, z, v, x, y}, (z, y)):
        try:
            m1 = Move(TAIL, (s, t), (z, y))
            cur, chain = _apply_chain(net, [m1])
            i1 = chain[0][2]
            m2 = Move(TAIL, (i1.created, y), (v, x))
            cur, chain = _apply_chain(cur, [m2])
            i2 = chain[0][2]
            m3 = Move(TAIL, (i2.created, x), i2.merged_edge)
            cur, chain = _apply_chain(cur, [m3])
            i3 = chain[0][2]
            m4 = Move(TAIL, (i3.created, t), i1.merged_edge)
            final, _ = _apply_chain(cur, [m4])
            if canonical_code(final).data == want:
                return [m1, m2, m3, m4], "a.2.i"
        except (InvalidMove, AssertionError):
            continue
    # no free edge elsewhere: borrow a child edge of y itself (or of x, by
    # reading the same pattern on the result network)
    moves = _case_a_via_y(net, case, want)
    if moves is not None:
        return moves, "a.2.i"
    m_rev = inverse_move(move, info_m)
    case_rev = classify_head_move(M, m_rev)
    if case_rev.case == "a":
        moves_rev = _case_a_via_y(M, case_rev, canonical_code(net).data)
        if moves_rev is not None:
            _, chain = _apply_chain(M, moves_rev)
            moves, _ = _reverse_transport(net, chain)
            return moves, "a.2.i"
    return None


def _case_a_via_y(net, case, want):
    """Triangle subcase where the extra tail is a child edge of y: three
    moves walk it through (v,x) and the triangle's bottom edge, ending with
    the two merge remnants repairing each other."""
    b = case.bindings
    v, x, y, z = b["v"], b["x"], b["y"], b["z"]
    if not net.is_tree_node(y):
        return None
    ranks = canonical_labeling(net)
    for t in sorted(net.children(y), key=ranks.__getitem__):
        if not is_movable(net, (y, t)):
            continue
        try:
            m1 = Move(TAIL, (y, t), (v, x))
            cur, chain = _apply_chain(net, [m1])
            i1 = chain[0][2]
            m2 = Move(TAIL, (i1.created, x), (z, v))
            cur, chain = _apply_chain(cur, [m2])
            i2 = chain[0][2]
            m3 = Move(TAIL, i1.merged_edge, i2.merged_edge)
            final, _ = _apply_chain(cur, [m3])
            if canonical_code(final).data == want:
                return [m1, m2, m3]
        except (InvalidMove, AssertionError):
            continue
    return None


def _case_a_root(net, move, case, M, n_new):
    """Last resort for the triangle subcase: park the triangle's bottom
    edge on the root edge (in both networks — they then differ by a short
    local shuffle), bridge the gap, and land the parked edge back."""
    b = case.bindings
    u, v, x, y, z = (b[k] for k in "uvxyz")
    root_edge = (net.root, net.children(net.root)[0])
    m0 = Move(TAIL, (z, v), root_edge)
    if not can_apply(net, m0):
        return None
    n1, chain0 = _apply_chain(net, [m0])
    zM = next(p for p in M.parents(n_new) if p != u)
    rootM = (M.root, M.children(M.root)[0])
    m0M = Move(TAIL, (zM, n_new), rootM)
    if not can_apply(M, m0M):
        return None
    m1_goal, chainM = _apply_chain(M, [m0M])
    inner = _bridge(n1, m1_goal, 1, 1)
    if inner is None:
        return None
    cur, _ = _apply_chain(n1, inner)
    closing, _ = _reverse_transport(cur, chainM)
    return [m0] + inner + closing


def _case_b(net, move, case, M, allow_mirror=True):
    b = case.bindings
    u, v, x, y, z = (b[k] for k in "uvxyz")
    ranks = canonical_labeling(net)
    lcas = lca_set(net, x, y)
    want = canonical_code(M).data

    if x not in lcas and y not in lcas:
        # a proper lowest common ancestor supplies the extra tail
        candidates = []
        for ell in sorted(lcas, key=ranks.__getitem__):
            for child in sorted(net.children(ell), key=ranks.__getitem__):
                if is_movable(net, (ell, child)):
                    above_y = is_above(net, (ell, child), y)
                    candidates.append((0 if above_y else 1, (ell, child)))
        candidates.sort(key=lambda item: item[0])
        for above_rank, (s, t) in candidates:
            try:
                m1 = Move(TAIL, (s, t), (x, v))
                cur, chain = _apply_chain(net, [m1])
                i1 = chain[0][2]
                m2 = Move(TAIL, (i1.created, v), (y, z))
                cur, chain = _apply_chain(cur, [m2])
                i2 = chain[0][2]
                m3 = Move(TAIL, (i2.created, z), i2.merged_edge)
                cur, chain = _apply_chain(cur, [m3])
                i3 = chain[0][2]
                m4 = Move(TAIL, (i3.created, t), i1.merged_edge)
                final, _ = _apply_chain(cur, [m4])
                if canonical_code(final).data == want:
                    return [m1, m2, m3, m4], "b.1.i"
            except (InvalidMove, AssertionError):
                continue
        # none of the edges worked in this orientation: mirror the move
        if allow_mirror:
            return _mirror_case_b(net, move, M, "b.1.ii")
        return None

    if x in lcas:
        return _case_b_x_is_lca(net, move, case, M)

    if allow_mirror:
        return _mirror_case_b(net, move, M, "b.3")
    return None


def _case_b_x_is_lca(net, move, case, M):
    b = case.bindings
    u, v, x, y, z = (b[k] for k in "uvxyz")
    want = canonical_code(M).data
    assert net.is_tree_node(x), "the covering attachment point must be a tree node"
    t_other = next(ch for ch in net.children(x) if ch != v)
    p = net.parents(x)[0]
    if is_movable(net, (x, v)):
        m1 = Move(TAIL, (x, v), (y, z))
        _, chain = _apply_chain(net, [m1])
        i1 = chain[0][2]
        m2 = Move(TAIL, (i1.created, z), i1.merged_edge)
        return [m1, m2], "b.2.i"
    # (x,v) is blocked by the triangle p -> x -> t_other, p -> t_other:
    # park the triangle's long edge on the root edge (frees (x,v) whenever
    # something sits above the triangle besides the root), shuffle, return
    root_edge = (net.root, net.children(net.root)[0])
    m0 = Move(TAIL, (p, t_other), root_edge)
    if can_apply(net, m0):
        try:
            cur, chain0 = _apply_chain(net, [m0])
            i0 = chain0[0][2]
            m1 = Move(TAIL, (x, v), (y, z))
            cur, chain1 = _apply_chain(cur, [m1])
            i1 = chain1[0][2]
            m2 = Move(TAIL, (i1.created, z), i1.merged_edge)
            cur, _ = _apply_chain(cur, [m2])
            m3 = _solve_one(cur, (i0.created, t_other), want)
            if m3 is not None:
                return [m0, m1, m2, m3], "b.2.ii"
        except (InvalidMove, AssertionError):
            pass
    # no room above: subdivide the triangle's bottom edge with an extra tail
    for s, t in _extra_tail_candidates(net, {p, x, t_other, v, z, y},
                                       (x, t_other)):
        try:
            m0 = Move(TAIL, (s, t), (x, t_other))
            cur, chain0 = _apply_chain(net, [m0])
            i0 = chain0[0][2]
            m1 = Move(TAIL, (x, v), (y, z))
            cur, chain1 = _apply_chain(cur, [m1])
            i1 = chain1[0][2]
            m2 = Move(TAIL, (i1.created, z), i1.merged_edge)
            cur, _ = _apply_chain(cur, [m2])
            m3 = _solve_one(cur, (i0.created, t), want)
            if m3 is not None:
                return [m0, m1, m2, m3], "b.2.ii"
        except (InvalidMove, AssertionError):
            continue
    return None


def _mirror_case_b(net, move, M, tag):
    """Rewrite the reverse head move on the result, then transport the
    reversed sequence back; covers the x<->y-symmetric subcases."""
    _, info = apply_move(net, move)
    m_rev = inverse_move(move, info)
    assert m_rev.kind == HEAD
    case_rev = classify_head_move(M, m_rev)
    assert case_rev.case == "b"
    M_rev, _ = apply_move(M, m_rev)
    got = _case_b(M, m_rev, case_rev, M_rev, allow_mirror=False)
    if got is None:
        return None
    moves_rev, _ = got
    _, chain = _apply_chain(M, moves_rev)
    moves, _ = _reverse_transport(net, chain)
    return moves, tag


def _case_c(net, move, case):
    b = case.bindings
    v, w, y, z = b["v"], b["w"], b["y"], b["z"]
    return [Move(TAIL, (z, y), (w, v))], "c"


def _case_d(net, move, case, M, n_new):
    b = case.bindings
    u, v, w, x, y, z = (b[k] for k in "uvwxyz")

    def direct(cur_net, mv_u, mv_v, tgt_y, tgt_z):
        m1 = Move(TAIL, (mv_u, mv_v), (tgt_y, tgt_z))
        _, chain = _apply_chain(cur_net, [m1])
        i1 = chain[0][2]
        m2 = Move(TAIL, (i1.created, tgt_z), i1.merged_edge)
        return [m1, m2]

    # d.1: one of the two in-edges of v (read on either network) is movable
    if net.is_tree_node(u) and is_movable(net, (u, v)):
        return direct(net, u, v, y, z), "d.1"
    # mirror: the same pattern read on the result network
    if M.is_tree_node(y) and is_movable(M, (y, z)):
        try:
            moves_rev = direct(M, y, z, u, n_new)
            _, chain = _apply_chain(M, moves_rev)
            moves, _ = _reverse_transport(net, chain)
            return moves, "d.1"
        except (InvalidMove, AssertionError):
            pass

    # d.2: a blocked tree node; break its triangle first
    for side_net, side_u, side_v, side_y, side_z, mirrored in (
            (net, u, v, y, z, False), (M, y, z, u, n_new, True)):
        if not side_net.is_tree_node(side_u):
            continue
        if is_movable(side_net, (side_u, side_v)):
            continue
        parent = side_net.parents(side_u)[0]
        base = next(ch for ch in side_net.children(side_u) if ch != side_v)
        side_want = canonical_code(M if not mirrored else net).data
        # subdivide the triangle's bottom edge with an extra tail
        for s, t in _extra_tail_candidates(side_net,
                                           {parent, side_u, base, side_v},
                                           (side_u, base)):
            try:
                m0 = Move(TAIL, (s, t), (side_u, base))
                cur, chain0 = _apply_chain(side_net, [m0])
                i0 = chain0[0][2]
                seq = direct(cur, side_u, side_v, side_y, side_z)
                cur, chain1 = _apply_chain(cur, seq)
                m3 = _solve_one(cur, (i0.created, t), side_want)
                if m3 is None:
                    continue
                moves = [m0] + seq + [m3]
                if mirrored:
                    _, chain = _apply_chain(M, moves)
                    moves, _ = _reverse_transport(net, chain)
                return moves, "d.2"
            except (InvalidMove, AssertionError):
                continue
        # or park the bottom edge on the root edge
        root_edge = (side_net.root, side_net.children(side_net.root)[0])
        m0 = Move(TAIL, (side_u, base), root_edge)
        if can_apply(side_net, m0):
            try:
                cur, chain0 = _apply_chain(side_net, [m0])
                i0 = chain0[0][2]
                merged_tail = i0.merged_edge[0]
                seq = direct(cur, merged_tail, side_v, side_y, side_z)
                cur, _ = _apply_chain(cur, seq)
                m3 = _solve_one(cur, (i0.created, base), side_want)
                if m3 is not None:
                    moves = [m0] + seq + [m3]
                    if mirrored:
                        _, chain = _apply_chain(M, moves)
                        moves, _ = _reverse_transport(net, chain)
                    return moves, "d.2"
            except (InvalidMove, AssertionError):
                pass

    # d.3: both attachment points are reticulations; give one an extra tail
    leaves = net.leaves()
    if len(leaves) >= 2:
        tag = "d.3.i"
    elif leaves[0] != w:
        tag = "d.3.ii"
    else:
        tag = "d.3.iii"
    for side_net, side_u, side_v, side_y, side_z, mirrored in (
            (net, u, v, y, z, False), (M, y, z, u, n_new, True)):
        side_want = canonical_code(M if not mirrored else net).data
        for s, t in _extra_tail_candidates(side_net, {side_u, side_v},
                                           (side_u, side_v)):
            try:
                m0 = Move(TAIL, (s, t), (side_u, side_v))
                cur, chain0 = _apply_chain(side_net, [m0])
                i0 = chain0[0][2]
                seq = direct(cur, i0.created, side_v, side_y, side_z)
                cur, chain1 = _apply_chain(cur, seq)
                last_info = chain1[-1][2]
                m3 = _solve_one(cur, (last_info.created, t), side_want)
                if m3 is None:
                    continue
                moves = [m0] + seq + [m3]
                if mirrored:
                    _, chain = _apply_chain(M, moves)
                    moves, _ = _reverse_transport(net, chain)
                return moves, tag
            except (InvalidMove, AssertionError):
                continue
    return None


def _case_reversed(net, move, case, M, info_m):
    """Cases (e)/(f): rewrite the reverse move (type c/d) on the result."""
    m_rev = inverse_move(move, info_m)
    case_rev = classify_head_move(M, m_rev)
    M_rev, info_rev = apply_move(M, m_rev)
    assert canonical_code(M_rev) == canonical_code(net)
    if case_rev.case == "c":
        got = _case_c(M, m_rev, case_rev)
    else:
        assert case_rev.case == "d"
        got = _case_d(M, m_rev, case_rev, M_rev, info_rev.created)
    if got is None:
        return None
    moves_rev, _ = got
    _, chain = _apply_chain(M, moves_rev)
    moves, _ = _reverse_transport(net, chain)
    return moves, f"{case.case}*"


def rewrite_head_move(net: Network, move: Move) -> RewritePlan:
    """A tail-move sequence equivalent to a distance-1 head move.

    The sequence has length at most four whenever the network has at least
    two leaves; the two-leaf one-reticulation networks admit no such
    sequence and raise ExceptionalNetwork.  Moves whose result is
    isomorphic to the input rewrite to the empty sequence.
    """
    if move.kind != HEAD or not can_apply(net, move):
        raise InvalidMove("rewrite requires a valid head move")
    if move_distance(net, move) != 1:
        raise NotDistanceOne("only distance-1 head moves are rewritten")
    M, info_m = apply_move(net, move)
    case = classify_head_move(net, move)
    if canonical_code(M) == canonical_code(net):
        return RewritePlan(move, (), f"{case.case}.iso")
    if len(net.taxa) == 2 and reticulation_number(net) == 1:
        raise ExceptionalNetwork(
            "two leaves, one reticulation: no tail-move sequence exists")

    got = None
    if case.case == "a":
        got = _case_a(net, move, case, M, info_m)
        if got is None:
            moves = _case_a_root(net, move, case, M, info_m.created)
            if moves is not None:
                got = (moves, "a.2.ii")
    elif case.case == "b":
        got = _case_b(net, move, case, M)
    elif case.case == "c":
        got = _case_c(net, move, case)
    elif case.case == "d":
        got = _case_d(net, move, case, M, info_m.created)
    else:
        got = _case_reversed(net, move, case, M, info_m)

    if got is None:
        moves = _bridge(net, M, 2, 2 if len(net.taxa) > 1 else 3)
        if moves is not None:
            got = (moves, f"{case.case}.bridge")
    assert got is not None, \
        f"no rewrite strategy succeeded for case {case.case}"
    moves, tag = got
    final, _ = _apply_chain(net, moves)
    assert canonical_code(final) == canonical_code(M), \
        "rewrite replay does not reproduce the head move"
    if len(net.taxa) >= 2 and not tag.startswith("d.3.iii"):
        assert len(moves) <= 4, f"rewrite used {len(moves)} moves"
    return RewritePlan(move, tuple(moves), tag)


# -- tail-move decomposition -----------------------------------------------------

def _directed_path(net: Network, src: int, dst: int):
    """Shortest directed path src -> dst as a node list (BFS)."""
    if src == dst:
        return [src]
    parent = {src: None}
    queue = deque([src])
    while queue:
        cur = queue.popleft()
        for nxt in net.children(cur):
            if nxt in parent:
                continue
            parent[nxt] = cur
            if nxt == dst:
                path = [dst]
                while path[-1] != src:
                    path.append(parent[path[-1]])
                return path[::-1]
            queue.append(nxt)
    raise AssertionError(f"no directed path {src} -> {dst}")


def decompose_tail_move(net: Network, move: Move) -> list[Move]:
    """Split a tail move into distance-1 tail moves with the same outcome.

    The moving tail walks along shortest directed paths from a lowest
    common ancestor of the old and new attachment points; consecutive
    targets share a node, so every step has distance 1.  At most
    |X| + 3k - 1 steps are needed.
    """
    if move.kind != TAIL or not can_apply(net, move):
        raise InvalidMove("decomposition requires a valid tail move")
    d = move_distance(net, move)
    if d == 0:
        return []
    if d == 1:
        return [move]
    (u, v), (s, t) = move.moving, move.target
    goal, _ = apply_move(net, move)
    ranks = canonical_labeling(net)
    ell = min(lca_set(net, u, s), key=ranks.__getitem__)
    up = _directed_path(net, ell, u)       # ell = a_m, ..., a_0 = u reversed
    down = _directed_path(net, ell, s)     # ell = b_0, ..., b_j = s
    a = up[::-1]                           # a[0] = u, a[-1] = ell
    m_len, j_len = len(a) - 1, len(down) - 1

    targets = []
    for i in range(2, m_len + 1):
        targets.append((a[i], a[i - 1]))
    if m_len >= 1 and j_len >= 1:
        targets.append((ell, down[1]))
    for i in range(1, j_len):
        targets.append((down[i], down[i + 1]))
    if m_len >= 1 and j_len == 0 and t == a[m_len - 1]:
        pass  # the last climb already subdivided the target edge
    else:
        targets.append((s, t))

    bound = len(net.taxa) + 3 * reticulation_number(net) - 1
    assert len(targets) <= bound, \
        f"decomposition of length {len(targets)} exceeds the bound {bound}"
    moves = []
    cur = net
    tail_node = u
    for tgt in targets:
        step = Move(TAIL, (tail_node, v), tgt)
        assert can_apply(cur, step), f"decomposition step invalid: {step}"
        assert move_distance(cur, step) == 1, "decomposition step not distance 1"
        cur, info = apply_move(cur, step)
        tail_node = info.created
        moves.append(step)
    assert canonical_code(cur) == canonical_code(goal), \
        "decomposition does not reproduce the move"
    return moves
