"""Constructive distance-domination algorithms and their building blocks.

Everything here is expressed as a pure function of a node's view, so the
round engine's determinism and budget checks apply uniformly.  The module
provides:

* ``log_star`` -- iterated base-2 logarithm (iterate until the value is <= 1).
* ``choose_smallest`` -- the min-label rule: a node joins the output set when
  its label is the minimum of somebody's half-budget ball.  On every graph the
  output is T-dominating, has size at most n - floor(T/2), runs in exactly
  2*floor(T/2) rounds, and every node learns a path to a nearby member.
* ``cole_vishkin_three_colour`` -- deterministic 3-colouring of a labelled
  ring by iterated bit-index colour reduction, run on two label-oriented
  forests so that no global ring orientation is ever assumed.
* ``ruling_set_dominator`` -- a ring-only dominator built from the
  3-colouring; see its docstring for the exact guarantees per regime.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from .graphs import (
    GraphError,
    RingSpec,
    View,
    arc_sequence,
    ball_in_view,
    view_adjacency,
    view_distance_map,
)
from .sim import NodeAlgorithm, NodeOutput

# A family is an algorithm parameterised by its round budget, e.g.
# ``choose_smallest`` itself, or ``lambda t: ruling_set_dominator(t, L)``.
AlgorithmFamily = Callable[[int], NodeAlgorithm]


def log_star(n: int) -> int:
    """Least i >= 0 such that the i-fold iterated base-2 logarithm of n is <= 1."""
    if n < 1:
        raise ValueError(f"log_star requires a positive integer, got {n!r}")
    if n.bit_length() > 900:  # avoid float overflow on huge inputs
        x, count = math.log2(n), 1
    else:
        x, count = float(n), 0
    while x > 1.0:
        x = math.log2(x)
        count += 1
    return count


def constant_algorithm(bit: int) -> NodeAlgorithm:
    """Every node outputs ``bit`` without communicating."""
    if bit not in (0, 1):
        raise ValueError("bit must be 0 or 1")

    def decide(params: Mapping, view: View) -> NodeOutput:
        if bit == 1:
            return NodeOutput(bit=1, path_certificate=(view.root,))
        return NodeOutput(bit=0)

    return NodeAlgorithm(name=f"constant-{bit}", parameters={"bit": bit}, rounds_used=0, decide=decide)


# ---------------------------------------------------------------------------
# ChooseSmallest
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChooseSmallestState:
    """Intermediate per-node state of the min-label rule (mainly for tests)."""

    r: int
    labels_within: frozenset[int]
    min_label: int
    min_values: frozenset[int]


def _bfs_path(adj: Mapping[int, list[int]], start: int, target: int) -> list[int]:
    """Shortest path as labels, expanding smaller labels first (canonical)."""
    if start == target:
        return [start]
    parent: dict[int, int] = {start: start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for w in sorted(adj[x]):
            if w not in parent:
                parent[w] = x
                if w == target:
                    path = [w]
                    while path[-1] != start:
                        path.append(parent[path[-1]])
                    path.reverse()
                    return path
                queue.append(w)
    raise GraphError(f"label {target} unreachable from {start} inside the view")


def _min_flood(view: View, r: int) -> dict[int, int]:
    """r rounds of min-label flooding: label -> min label within distance r."""
    adj = view_adjacency(view)
    cur = {lab: lab for lab in adj}
    for _ in range(r):
        nxt = {}
        for lab, nbrs in adj.items():
            best = cur[lab]
            for w in nbrs:
                if cur[w] < best:
                    best = cur[w]
            nxt[lab] = best
        cur = nxt
    return cur


def choose_smallest_state(view: View, r: int) -> ChooseSmallestState:
    dmap = view_distance_map(view)
    flood = _min_flood(view, r)
    near = [lab for lab, d in dmap.items() if d <= r]
    return ChooseSmallestState(
        r=r,
        labels_within=frozenset(near),
        min_label=flood[view.root],
        min_values=frozenset(flood[lab] for lab in near),
    )


def _window_minima(seq: Sequence[int], circular: bool, r: int, j_lo: int, j_hi: int) -> dict[int, int]:
    """min(seq[j-r .. j+r]) for each j in [j_lo, j_hi] (indices wrap when circular)."""
    m = len(seq)
    out: dict[int, int] = {}
    dq: deque[tuple[int, int]] = deque()
    start = j_lo - r
    for t in range(start, j_hi + r + 1):
        val = seq[t % m] if circular else seq[t]
        while dq and dq[-1][1] >= val:
            dq.pop()
        dq.append((t, val))
        if t - start >= 2 * r:
            j = t - r
            while dq[0][0] < j - r:
                dq.popleft()
            out[j] = dq[0][1]
    return out


def choose_smallest(T: int) -> NodeAlgorithm:
    """The min-label dominator with round budget ``T``.

    With r = floor(T/2): gather the labels within distance r, compute their
    minimum, then gather the minima of all nodes within distance r; output 1
    exactly when the own label occurs among those minima.  The certificate is
    the canonical shortest path to the node holding the own ball's minimum
    (that node always outputs 1).  For T in {0, 1} the radius degenerates to 0
    and every node outputs 1.
    """
    if T < 0:
        raise ValueError("round budget T must be non-negative")
    r = T // 2

    def decide(params: Mapping, view: View) -> NodeOutput:
        rr = params["r"]
        sub = view if view.radius == 2 * rr else ball_in_view(view, view.root, 2 * rr)
        if rr == 0:
            return NodeOutput(bit=1, path_certificate=(sub.root,))
        try:
            seq, pos, circular = arc_sequence(sub)
        except GraphError:
            seq = None  # type: ignore[assignment]
        if seq is not None:
            minima = _window_minima(seq, circular, rr, pos - rr, pos + rr)
            min_values = set(minima.values())
            bit = 1 if seq[pos % len(seq)] in min_values else 0
            target = minima[pos]
            if not circular:
                tp = next(j for j in range(pos - rr, pos + rr + 1) if seq[j] == target)
                step = 1 if tp >= pos else -1
                cert = tuple(seq[j] for j in range(pos, tp + step, step))
                return NodeOutput(bit=bit, path_certificate=cert)
            cert = tuple(_bfs_path(view_adjacency(sub), sub.root, target))
            return NodeOutput(bit=bit, path_certificate=cert)
        dmap = view_distance_map(sub)
        flood = _min_flood(sub, rr)
        near = [lab for lab, d in dmap.items() if d <= rr]
        min_values = {flood[lab] for lab in near}
        bit = 1 if sub.root in min_values else 0
        cert = tuple(_bfs_path(view_adjacency(sub), sub.root, flood[sub.root]))
        return NodeOutput(bit=bit, path_certificate=cert)

    return NodeAlgorithm(
        name="choose-smallest",
        parameters={"T": T, "r": r},
        rounds_used=2 * r,
        decide=decide,
    )


# ---------------------------------------------------------------------------
# Deterministic ring 3-colouring (Cole-Vishkin style, orientation-free)
# ---------------------------------------------------------------------------
#
# An undirected ring has no globally consistent successor, so the classic
# reduction is run on two forests instead: every node points at its largest
# larger-labelled neighbour (F1), and each leftover edge hangs off its
# smaller endpoint (F2).  Both structures are functional and acyclic, the
# reduction is valid on each, and the colour pair is proper on every ring
# edge.  Each forest is brought to 3 colours by shift-down/eliminate rounds,
# and the 9 resulting pairs are reduced to 3 ring colours class by class.
#
# The whole pipeline is invariant under reversing the label sequence, which
# is what lets a node recompute any nearby node's colour from its own view.


def _cv_schedule(L: int) -> list[int]:
    sizes = []
    p = int(L) + 1  # colour values start as labels, living in [0, L+1)
    while p > 6:
        p = 2 * (p - 1).bit_length()
        sizes.append(p)
    return sizes


def colour_reduction_rounds(L: int) -> int:
    """Rounds the 3-colouring consumes for label bound ``L`` (its ``t0``).

    len(schedule) reduction rounds, 6 shift/eliminate rounds per forest pair,
    6 pair-elimination rounds, plus one round of slack because the second
    forest's structure is distance-2 information.
    """
    if L < 1:
        raise ValueError("label bound L must be positive")
    return len(_cv_schedule(L)) + 13


def _forest_structure(seq: Sequence[int], circular: bool):
    """Parent directions (+1/-1/None) for both label-oriented forests.

    For path windows the arrays are only guaranteed correct on positions
    [1, m-2] (F1) and for edges whose endpoints both lie there (F2); the
    round bookkeeping in ``_three_colour_window`` never reads beyond that.
    """
    m = len(seq)
    par1: list[int | None] = [None] * m
    par2: list[int | None] = [None] * m

    def lab(i: int) -> int:
        return seq[i % m]

    rng = range(m) if circular else range(1, m - 1)
    for i in rng:
        a, b = lab(i - 1), lab(i + 1)
        if a > seq[i] or b > seq[i]:
            par1[i] = -1 if a > b else +1
    erng = range(m) if circular else range(1, m - 2)
    for i in erng:
        j = (i + 1) % m
        if par1[i] == +1 or par1[j] == -1:
            continue  # edge claimed by F1
        child = i if seq[i] < seq[j % m] else j
        assert par2[child] is None, "a node acquired two F2 parents"
        par2[child] = +1 if child == i else -1
    return par1, par2


def _three_colour_window(seq: Sequence[int], circular: bool, L: int):
    """3-colour a full ring (``circular``) or the interior of a path window.

    Returns ``(colours, lo, hi)``: ``colours[i]`` is in {1, 2, 3} for every
    ``lo <= i <= hi`` (the whole index range when circular).  The colour at a
    position depends only on the labels within ``colour_reduction_rounds(L)``
    hops of it and is invariant under reversing the sequence, so windows of
    different nodes always agree where they overlap.
    """
    m = len(seq)
    schedule = _cv_schedule(L)
    par1, par2 = _forest_structure(seq, circular)
    rounds = 0

    def positions() -> range:
        if circular:
            return range(m)
        lo, hi = 1 + rounds, m - 2 - rounds
        return range(lo, hi + 1) if hi >= lo else range(0)

    c1 = [int(x) for x in seq]
    c2 = [int(x) for x in seq]

    def cv_new(c: list[int], par, i: int) -> int:
        ci = c[i]
        d = par[i]
        if d is None:
            return ci & 1  # root: bit-index 0, own bit value
        cp = c[(i + d) % m]
        x = ci ^ cp
        assert x, "equal colours across a forest edge"
        b = (x & -x).bit_length() - 1
        return 2 * b + ((ci >> b) & 1)

    for _ in schedule:
        rounds += 1
        o1, o2 = c1[:], c2[:]
        for i in positions():
            c1[i] = cv_new(o1, par1, i)
            c2[i] = cv_new(o2, par2, i)
    if schedule:
        for i in positions():
            c1[i] += 1  # encoded values 0..5 -> palette {1..6}
            c2[i] += 1

    def children(par, i: int):
        out = []
        for d in (-1, 1):
            j = i + d
            if circular:
                j %= m
            elif not (0 <= j < m):
                continue
            if par[j] == -d:
                out.append(j)
        return out

    def shift_new(c: list[int], par, i: int) -> int:
        d = par[i]
        if d is None:
            cur = c[i]
            return next(x for x in (1, 2, 3) if x != cur)
        return c[(i + d) % m]

    def elim_new(c: list[int], par, i: int, q: int) -> int:
        if c[i] != q:
            return c[i]
        forbidden = {c[(i + par[i]) % m]} if par[i] is not None else set()
        for j in children(par, i):
            forbidden.add(c[j])
        free = [x for x in (1, 2, 3) if x not in forbidden]
        assert free, "forest elimination ran out of colours"
        return free[0]

    for q in (6, 5, 4):
        rounds += 1
        o1, o2 = c1[:], c2[:]
        for i in positions():
            c1[i] = shift_new(o1, par1, i)
            c2[i] = shift_new(o2, par2, i)
        rounds += 1
        o1, o2 = c1[:], c2[:]
        for i in positions():
            c1[i] = elim_new(o1, par1, i, q)
            c2[i] = elim_new(o2, par2, i, q)

    pc = [0] * m
    for i in positions():
        pc[i] = 3 * (c1[i] - 1) + c2[i]

    for q in (9, 8, 7, 6, 5, 4):
        rounds += 1
        opc = pc[:]
        for i in positions():
            if opc[i] != q:
                continue
            taken = set()
            for d in (-1, 1):
                j = i + d
                if circular:
                    j %= m
                elif not (0 <= j < m):
                    continue
                taken.add(opc[j])
            pc[i] = next(x for x in (1, 2, 3) if x not in taken)

    if circular:
        return pc, 0, m - 1
    lo, hi = 1 + rounds, m - 2 - rounds
    return pc, lo, hi


def cole_vishkin_three_colour(ring: RingSpec, L: int | None = None) -> tuple[dict[int, int], int]:
    """Proper 3-colouring of the ring plus the number of rounds it costs.

    The round count ``t0`` depends only on the label bound ``L`` (default:
    the ring's natural bound), never on the particular labelling, so callers
    can budget against it before seeing the network.
    """
    if L is None:
        L = max(ring.n, max(ring.labels))
    if max(ring.labels) > L:
        raise GraphError(f"ring labels exceed the label bound L={L}")
    colours, lo, hi = _three_colour_window(ring.labels, True, L)
    assert lo == 0 and hi == ring.n - 1
    return {lab: colours[i] for i, lab in enumerate(ring.labels)}, colour_reduction_rounds(L)


def _mis_at(colours: Sequence[int], i: int, lo: int, hi: int, circular: bool, m: int) -> bool:
    """Greedy phase-by-colour MIS membership of position ``i``.

    Phase 1 admits colour-1 nodes (an independent class), later phases admit
    nodes with no earlier-phase neighbour.  Reads colours up to 2 positions
    away, so ``i`` must satisfy lo+2 <= i <= hi-2 on path windows.
    """

    def col(j: int) -> int | None:
        if circular:
            return colours[j % m]
        return colours[j] if lo <= j <= hi else None

    def phase1(j: int) -> bool:
        return col(j) == 1

    def phase2(j: int) -> bool:
        return col(j) == 2 and not (phase1(j - 1) or phase1(j + 1))

    c = col(i)
    if c == 1:
        return True
    if c == 2:
        return not (phase1(i - 1) or phase1(i + 1))
    return not any(phase1(j) or phase2(j) for j in (i - 1, i + 1))


# ---------------------------------------------------------------------------
# Ruling-set dominator
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RulingParams:
    """Budget split of the ruling-set dominator: colouring rounds plus phases."""

    T: int
    L: int
    t0: int
    k: int

    @classmethod
    def derive(cls, T: int, L: int) -> "RulingParams":
        t0 = colour_reduction_rounds(L)
        k = (T - t0) // 3 if T > t0 else 0
        return cls(T=T, L=L, t0=t0, k=k)

    @property
    def fallback(self) -> bool:
        return self.T <= self.t0 or self.k < 1


def ruling_set_dominator(T: int, L: int) -> NodeAlgorithm:
    """Ring dominator spending ``t0`` rounds on colouring and ``3k`` on spacing.

    With k = floor((T - t0) / 3) the output on a ring is, per regime:

    * ``T <= t0`` or ``k = 0``: every node joins (trivially T-dominating,
      zero rounds).
    * A node's truncated ball closes into the whole ring (n <= 2(t0+3k)):
      the canonical packing -- every (k+1)-th node along the
      minimum-label-anchored orientation.  Members are pairwise more than k
      apart, the set is k-dominating, and its size is max(1, floor(n/(k+1))).
    * Otherwise: the maximal independent set obtained greedily from the
      3-colouring.  This is 1-dominating (hence T-dominating) with members
      pairwise more than 1 apart and size at most ceil(n/2); for k >= 2 the
      packing distance stays 2 because no deterministic in-budget rule can
      space members k apart without seeing the whole ring.

    Rounds used are at most t0 + 3k <= T in every regime.  Non-ring inputs
    raise GraphError.
    """
    if T < 0:
        raise ValueError("round budget T must be non-negative")
    rp = RulingParams.derive(T, L)

    if rp.fallback:
        def decide_all(params: Mapping, view: View) -> NodeOutput:
            return NodeOutput(bit=1, path_certificate=(view.root,))

        return NodeAlgorithm(
            name="ruling-set",
            parameters={"T": T, "L": L, "t0": rp.t0, "k": rp.k},
            rounds_used=0,
            decide=decide_all,
        )

    radius = rp.t0 + 3 * rp.k

    def decide(params: Mapping, view: View) -> NodeOutput:
        t0, k = params["t0"], params["k"]
        r = t0 + 3 * k
        sub = view if view.radius == r else ball_in_view(view, view.root, r)
        try:
            seq, pos, circular = arc_sequence(sub)
        except GraphError as exc:
            raise GraphError("ruling-set dominator requires a ring") from exc
        if circular:
            n = len(seq)
            i_min = min(range(n), key=seq.__getitem__)
            direction = 1 if seq[(i_min + 1) % n] < seq[(i_min - 1) % n] else -1
            offset = ((pos - i_min) * direction) % n
            count = max(1, n // (k + 1))
            member = offset % (k + 1) == 0 and offset // (k + 1) < count
            return NodeOutput(bit=1 if member else 0,
                              path_certificate=(sub.root,) if member else None)
        colours, lo, hi = _three_colour_window(seq, False, params["L"])
        if not (lo + 2 <= pos <= hi - 2):
            raise GraphError("view too small for the colouring window")  # r >= t0+3 prevents this
        member = _mis_at(colours, pos, lo, hi, False, len(seq))
        return NodeOutput(bit=1 if member else 0,
                          path_certificate=(sub.root,) if member else None)

    return NodeAlgorithm(
        name="ruling-set",
        parameters={"T": T, "L": L, "t0": rp.t0, "k": rp.k},
        rounds_used=radius,
        decide=decide,
    )
