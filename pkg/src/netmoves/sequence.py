"""Connecting same-tier networks by tail moves, rSPR moves, or distance-1
tail moves.

The solver grows a pair of matched, downward-closed node sets (one per
network) upward from the leaves, keeping an explicit isomorphism between
the induced subgraphs.  Matched nodes are never touched again; each round
either extends the matching for free or performs a bounded number of moves
just above the matched region so the next extension becomes free:

* a reticulation wanted above a matched node is either relocated there
  (two tail moves, plus up to one more to break a triangle) or rebuilt
  there by a single head move in rSPR mode;
* a tree node wanted above two matched nodes is built by moving one of
  their parent edges onto the other (one tail move, plus up to one more
  to break a triangle).

Edits happen on both networks; the edits to the second network are
inverted, mapped through the final isomorphism, and appended, so the
result is a single move sequence from the first network to the second.
"""
from __future__ import annotations

from .canon import canonical_code, canonical_labeling, find_isomorphism
from .errors import (ExceptionalNetwork, InvalidMove, ProjectionBlocked,
                     TierMismatch)
from .moves import (HEAD, TAIL, Move, apply_move, can_apply, find_triangle,
                    inverse_move, is_movable)
from .network import Network, reticulation_number
from .rewrite import decompose_tail_move, rewrite_head_move


def _tier_text(net) -> str:
    return f"({','.join(sorted(net.taxa))}; k={reticulation_number(net)})"


def _has_root_triangle(net: Network) -> bool:
    top = net.children(net.root)[0]
    if not net.is_tree_node(top):
        return False
    a, b = net.children(top)
    return net.has_edge(a, b) or net.has_edge(b, a)


def replay_sequence(net: Network, moves) -> list[Network]:
    """All intermediate networks of a move sequence, starting with net."""
    out = [net]
    for mv in moves:
        net, _ = apply_move(net, mv)
        out.append(net)
    return out


def _expand_head_moves(start: Network, moves) -> list[Move]:
    """Replace every head move in a sequence by an equivalent run of tail
    moves, rewriting the node ids of all later moves to the new lineage."""
    if not any(mv.kind == HEAD for mv in moves):
        return list(moves)
    out = []
    chain, cur = start, start
    phi = {n: n for n in start.nodes}
    for mv in moves:
        mapped = Move(mv.kind, (phi[mv.moving[0]], phi[mv.moving[1]]),
                      (phi[mv.target[0]], phi[mv.target[1]]))
        nxt_chain, info_c = apply_move(chain, mv)
        if mv.kind == HEAD:
            plan = rewrite_head_move(cur, mapped)
            for m2 in plan.replacement:
                out.append(m2)
                cur, _ = apply_move(cur, m2)
            phi = find_isomorphism(nxt_chain, cur)
            assert phi is not None, "head-move expansion lost the isomorphism"
        else:
            out.append(mapped)
            nxt_cur, info_a = apply_move(cur, mapped)
            phi = {n: phi[n] for n in nxt_chain.nodes if n in phi}
            phi[info_c.created] = info_a.created
            cur = nxt_cur
        chain = nxt_chain
    return out


class _Side:
    """One network of the pair plus its matched set and move log."""

    def __init__(self, net: Network):
        self.net = net
        self.matched: set[int] = set()
        self.chain = []          # (net_before, move, info, net_after)

    def apply(self, move: Move, rtf: bool):
        nxt, info = apply_move(self.net, move)
        if rtf and _has_root_triangle(nxt):
            raise ProjectionBlocked(
                f"{move} would create a triangle at the root")
        self.chain.append((self.net, move, info, nxt))
        self.net = nxt
        return info

    def ranks(self):
        return canonical_labeling(self.net)

    def unmatched(self):
        return set(self.net.nodes) - self.matched


class _GreenLine:
    """Frontier-growing solver; ``rspr`` switches the reticulation case to
    a single head move, ``rtf`` forbids moves that create a root triangle
    (any candidate doing so is skipped; if none survive the search raises
    ProjectionBlocked)."""

    def __init__(self, a: Network, b: Network, rspr: bool, rtf: bool):
        if a.tier != b.tier:
            raise TierMismatch(_tier_text(a) + " vs " + _tier_text(b))
        self.P = _Side(a)
        self.Q = _Side(b)
        self.psi: dict[int, int] = {}
        self.rspr = rspr
        self.rtf = rtf

    # -- frontier bookkeeping --------------------------------------------------

    def _match(self, n: int, n2: int):
        a, b = self.P.net, self.Q.net
        assert a.role(n) == b.role(n2), "matched nodes must play the same role"
        self.psi[n] = n2
        self.P.matched.add(n)
        self.Q.matched.add(n2)

    def _assert_frontier(self):
        a, b = self.P.net, self.Q.net
        psi = self.psi
        assert set(psi) == self.P.matched
        assert set(psi.values()) == self.Q.matched
        for n in self.P.matched:
            assert a.role(n) == b.role(psi[n])
            for ch in a.children(n):
                assert ch in self.P.matched, "matched set must be downward closed"
                assert b.has_edge(psi[n], psi[ch]), "frontier map must preserve edges"
        for n2 in self.Q.matched:
            for ch in b.children(n2):
                assert ch in self.Q.matched, "matched set must be downward closed"

    def _closure(self):
        """Extend the matching as far as it goes without any moves."""
        a, b = self.P.net, self.Q.net
        progress = True
        while progress:
            progress = False
            ra, rb = None, None
            for x in sorted(self.P.matched):
                x2 = self.psi[x]
                retics_a = [p for p in a.parents(x)
                            if p not in self.P.matched and a.is_reticulation(p)]
                retics_b = [p for p in b.parents(x2)
                            if p not in self.Q.matched and b.is_reticulation(p)]
                if retics_a and retics_b:
                    if ra is None:
                        ra, rb = self.P.ranks(), self.Q.ranks()
                    self._match(min(retics_a, key=ra.__getitem__),
                                min(retics_b, key=rb.__getitem__))
                    progress = True
                    break
                trees_a = [p for p in a.parents(x)
                           if p not in self.P.matched and a.is_tree_node(p)
                           and all(c in self.P.matched for c in a.children(p))]
                for z in sorted(trees_a):
                    wanted = {self.psi[c] for c in a.children(z)}
                    for u2 in b.parents(x2):
                        if u2 in self.Q.matched or not b.is_tree_node(u2):
                            continue
                        if set(b.children(u2)) == wanted:
                            self._match(z, u2)
                            progress = True
                            break
                    if progress:
                        break
                if progress:
                    break
            if progress:
                continue
            ca, cb = a.children(a.root)[0], b.children(b.root)[0]
            if (ca in self.P.matched and cb in self.Q.matched
                    and a.root not in self.P.matched):
                assert self.psi[ca] == cb, "roots must sit above matched twins"
                self._match(a.root, b.root)
                progress = True

    # -- unblocking a tree edge whose tail sits in a triangle -------------------

    def _unblock(self, side: _Side, z: int, x: int):
        """Make (z,x) movable; z is an unmatched tree node.  Returns the
        number of moves spent, or None if nothing worked."""
        net = side.net
        if is_movable(net, (z, x)):
            return 0
        tri = find_triangle(net, z)
        assert tri is not None, "an unmovable tree edge implies a triangle"
        ranks = side.ranks()
        candidates = []
        # moving the triangle's long edge onto an edge above its apex ...
        if net.parents(tri.apex):
            b_node = net.parents(tri.apex)[0]
            for a_node in sorted(net.parents(b_node), key=ranks.__getitem__):
                candidates.append(Move(TAIL, tri.long_edge, (a_node, b_node)))
        # ... or subdividing its bottom edge with a borrowed unmatched tail
        for s, t in sorted(net.edges, key=lambda e: (ranks[e[0]], ranks[e[1]])):
            if s not in side.matched and is_movable(net, (s, t)):
                candidates.append(Move(TAIL, (s, t), tri.bottom_edge))
        for mv in candidates:
            if not can_apply(net, mv):
                continue
            trial, _ = apply_move(net, mv)
            if self.rtf and _has_root_triangle(trial):
                continue
            if not is_movable(trial, (z, x)):
                continue
            side.apply(mv, self.rtf)
            return 1
        return None

    # -- the paid cases ----------------------------------------------------------

    def _retic_targets(self, side: _Side, other: _Side, fwd: dict):
        """Matched nodes (on ``side``) that want a reticulation parent:
        their twin in ``other`` has an unmatched reticulation parent."""
        out = []
        for x in sorted(side.matched):
            x2 = fwd[x]
            if any(p not in other.matched and other.net.is_reticulation(p)
                   for p in other.net.parents(x2)):
                if any(p not in side.matched for p in side.net.parents(x)):
                    out.append(x)
        return out

    def _case_reticulation(self, side: _Side, x: int):
        """Put some unmatched reticulation of ``side`` directly above x."""
        net = side.net
        ranks = side.ranks()
        zs = [p for p in net.parents(x)
              if p not in side.matched and net.is_tree_node(p)]
        assert zs, "counting guarantees an unmatched tree parent here"
        if self.rspr:
            self._relocate_retic_by_head(side, x, zs, ranks)
        else:
            self._relocate_retic_by_tails(side, x, zs, ranks)

    def _relocate_retic_by_tails(self, side: _Side, x: int, zs, ranks):
        for z in sorted(zs, key=ranks.__getitem__):
            spent = self._unblock(side, z, x)
            if spent is None:
                continue
            net = side.net
            ranks2 = side.ranks()
            retics = [r for r in side.unmatched() if net.is_reticulation(r)]
            assert retics, "tier counting guarantees an unmatched reticulation"
            u = min(retics, key=ranks2.__getitem__)
            v = net.children(u)[0]
            assert v != x, "a reticulation already above x is matched for free"
            if v == z:
                other = next(c for c in net.children(z) if c != x)
                w = min(net.parents(u), key=ranks2.__getitem__)
                mv = Move(TAIL, (z, other), (w, u))
                assert can_apply(net, mv), f"retic hand-off move invalid: {mv}"
                side.apply(mv, self.rtf)
                return
            m1 = Move(TAIL, (z, x), (u, v))
            assert can_apply(net, m1), f"retic approach move invalid: {m1}"
            i1 = side.apply(m1, self.rtf)
            w = min(side.net.parents(u), key=ranks2.__getitem__)
            m2 = Move(TAIL, (i1.created, v), (w, u))
            assert can_apply(side.net, m2), f"retic hand-off move invalid: {m2}"
            side.apply(m2, self.rtf)
            return
        # Every tree parent of x sits in a triangle whose apex hangs off the
        # root, so no tail move frees it.  Moving the head of the triangle's
        # long edge onto (z,x) leaves a reticulation right above x; the head
        # move is expanded into tail moves after the frontier is complete.
        for z in sorted(zs, key=ranks.__getitem__):
            tri = find_triangle(side.net, z)
            if tri is None:
                continue
            assert tri.base not in side.matched, \
                "counting keeps the blocking reticulation off the frontier"
            mv = Move(HEAD, tri.long_edge, (z, x))
            if not can_apply(side.net, mv):
                continue
            side.apply(mv, self.rtf)
            return
        raise AssertionError("no tree parent of x could be unblocked")

    def _relocate_retic_by_head(self, side: _Side, x: int, zs, ranks):
        net = side.net
        retics = sorted((r for r in side.unmatched() if net.is_reticulation(r)),
                        key=ranks.__getitem__)
        assert retics, "tier counting guarantees an unmatched reticulation"
        for z in sorted(zs, key=ranks.__getitem__):
            for v in retics:
                for p in sorted(net.parents(v), key=ranks.__getitem__):
                    mv = Move(HEAD, (p, v), (z, x))
                    if not can_apply(net, mv):
                        continue
                    try:
                        side.apply(mv, self.rtf)
                        return
                    except ProjectionBlocked:
                        continue
        raise ProjectionBlocked(
            "every reticulation head move here creates a root triangle")

    def _tree_targets(self, other: _Side):
        """Lowest unmatched tree nodes of ``other`` (all children matched)."""
        net = other.net
        out = []
        for n in other.unmatched():
            if n == net.root or not net.is_tree_node(n):
                continue
            if all(c in other.matched for c in net.children(n)):
                out.append(n)
        return sorted(out, key=other.ranks().__getitem__)

    def _case_tree(self, side: _Side, x: int, y: int):
        """Build a tree node directly above matched x and y on ``side``."""

        def parents_of(n):
            net, ranks = side.net, side.ranks()
            return sorted((p for p in net.parents(n)
                           if p not in side.matched and net.is_tree_node(p)),
                          key=ranks.__getitem__)

        def attempt(src, dst, unblock):
            for z_src in parents_of(src):
                if unblock:
                    if self._unblock(side, z_src, src) is None:
                        continue
                elif not is_movable(side.net, (z_src, src)):
                    continue
                for z_dst in parents_of(dst):
                    if z_dst == z_src:
                        continue
                    mv = Move(TAIL, (z_src, src), (z_dst, dst))
                    if not can_apply(side.net, mv):
                        continue
                    try:
                        side.apply(mv, self.rtf)
                        return True
                    except ProjectionBlocked:
                        continue
            return False

        for unblock in (False, True):
            for src, dst in ((x, y), (y, x)):
                if attempt(src, dst, unblock):
                    return True
        return False

    # -- main loop ---------------------------------------------------------------

    def run(self) -> list[Move]:
        a, b = self.P.net, self.Q.net
        for label in a.taxa:
            self._match(a.leaf_with_label(label), b.leaf_with_label(label))
        rounds = 0
        limit = 2 * len(a.nodes) + 4
        while True:
            rounds += 1
            assert rounds <= limit, "frontier stopped growing"
            self._closure()
            self._assert_frontier()
            if len(self.P.matched) == len(self.P.net.nodes):
                break
            psi_inv = {v: k for k, v in self.psi.items()}
            want_retic_P = self._retic_targets(self.P, self.Q, self.psi)
            if want_retic_P:
                self._case_reticulation(self.P, want_retic_P[0])
                continue
            want_retic_Q = self._retic_targets(self.Q, self.P, psi_inv)
            if want_retic_Q:
                self._case_reticulation(self.Q, want_retic_Q[0])
                continue
            done = False
            for u2 in self._tree_targets(self.Q):
                x2, y2 = self.Q.net.children(u2)
                if self._case_tree(self.P, psi_inv[x2], psi_inv[y2]):
                    done = True
                    break
            if done:
                continue
            for u in self._tree_targets(self.P):
                x, y = self.P.net.children(u)
                if self._case_tree(self.Q, self.psi[x], self.psi[y]):
                    done = True
                    break
            if done:
                continue
            if self.rtf:
                raise ProjectionBlocked(
                    "no move advances the frontier without a root triangle")
            raise AssertionError("no case advances the frontier")

        # fold the second network's edits back into one forward sequence
        moves = [mv for (_, mv, _, _) in self.P.chain]
        cur = self.P.net
        for net_before, mv, info, net_after in reversed(self.Q.chain):
            inv = inverse_move(mv, info)
            iso = find_isomorphism(net_after, cur)
            assert iso is not None, "edit transport lost the isomorphism"
            mapped = Move(inv.kind, (iso[inv.moving[0]], iso[inv.moving[1]]),
                          (iso[inv.target[0]], iso[inv.target[1]]))
            moves.append(mapped)
            if self.rtf:
                nxt, _ = apply_move(cur, mapped)
                assert not _has_root_triangle(nxt)
                cur = nxt
            else:
                cur, _ = apply_move(cur, mapped)
        return moves


def green_line_tail(a: Network, b: Network) -> list[Move]:
    """Tail moves turning ``a`` into a network isomorphic to ``b``.

    At most 3(|X| + 2k) moves.  Raises TierMismatch for different tiers and
    ExceptionalNetwork on the two tiers whose members tail moves cannot
    connect (two leaves with one reticulation, one leaf with two).
    """
    if a.tier != b.tier:
        raise TierMismatch(_tier_text(a) + " vs " + _tier_text(b))
    if canonical_code(a) == canonical_code(b):
        return []
    k = reticulation_number(a)
    if (len(a.taxa), k) in ((2, 1), (1, 2)):
        raise ExceptionalNetwork(
            "tail moves cannot connect this tier; only trivial moves exist")
    moves = _expand_head_moves(a, _GreenLine(a, b, rspr=False, rtf=False).run())
    assert all(mv.kind == TAIL for mv in moves)
    budget = 3 * (len(a.taxa) + 2 * k)
    assert len(moves) <= budget, f"{len(moves)} moves exceed budget {budget}"
    final = replay_sequence(a, moves)[-1]
    assert canonical_code(final) == canonical_code(b), "sequence misses target"
    return moves


def green_line_rspr(a: Network, b: Network,
                    root_triangle_free: bool = False) -> list[Move]:
    """rSPR moves (tail and head) turning ``a`` into a network isomorphic
    to ``b``; at most 2|X| + 3k - 1 moves.  With ``root_triangle_free``
    every intermediate avoids a triangle at the root's child (raising
    ProjectionBlocked when impossible), which makes the whole sequence
    projectable to unrooted networks.
    """
    if a.tier != b.tier:
        raise TierMismatch(_tier_text(a) + " vs " + _tier_text(b))
    if canonical_code(a) == canonical_code(b):
        return []
    moves = _GreenLine(a, b, rspr=True, rtf=root_triangle_free).run()
    budget = 2 * len(a.taxa) + 3 * reticulation_number(a) - 1
    assert len(moves) <= budget, f"{len(moves)} moves exceed budget {budget}"
    final = replay_sequence(a, moves)[-1]
    assert canonical_code(final) == canonical_code(b), "sequence misses target"
    return moves


def tail1_sequence(a: Network, b: Network) -> list[Move]:
    """Distance-1 tail moves turning ``a`` into a network isomorphic to
    ``b``: the tail-move sequence with every move decomposed in place.
    At most 3(|X| + 2k)(|X| + 3k - 1) moves."""
    coarse = green_line_tail(a, b)
    moves = []
    chain, cur = a, a
    phi = {n: n for n in a.nodes}
    for mv in coarse:
        mapped = Move(mv.kind, (phi[mv.moving[0]], phi[mv.moving[1]]),
                      (phi[mv.target[0]], phi[mv.target[1]]))
        chain, _ = apply_move(chain, mv)
        for step in decompose_tail_move(cur, mapped):
            moves.append(step)
            cur, _ = apply_move(cur, step)
        phi = find_isomorphism(chain, cur)
        assert phi is not None, "decomposition lost the isomorphism"
    assert canonical_code(cur) == canonical_code(b)
    k = reticulation_number(a)
    budget = 3 * (len(a.taxa) + 2 * k) * (len(a.taxa) + 3 * k - 1)
    assert len(moves) <= budget
    return moves


def find_sequence(a: Network, b: Network, move_class: str = "tail") -> list[Move]:
    """Dispatch to the solver for a move class."""
    if move_class == "tail":
        return green_line_tail(a, b)
    if move_class == "rspr":
        return green_line_rspr(a, b)
    if move_class == "tail1":
        return tail1_sequence(a, b)
    raise InvalidMove(f"no sequence solver for move class {move_class!r}")
