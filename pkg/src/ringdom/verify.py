"""Ground-truth checkers: domination, windows, colourings, stretches, certificates.

Every predicate returns a :class:`Verdict` that is truthy on success and
carries a machine-checkable witness on failure, so harnesses can print
counterexamples instead of bare booleans.  The exact minimum-size search is
deliberately guarded to small instances; it exists to calibrate the fast
algorithms, not to compete with them.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping

from .graphs import GraphError, LabeledGraph, RingSpec
from .sim import ExecutionResult


@dataclass(frozen=True)
class Verdict:
    """Outcome of one verification predicate."""

    predicate: str
    ok: bool
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.ok

    def as_dict(self) -> dict:
        return {"predicate": self.predicate, "verdict": self.ok, "witness": self.witness}


def is_t_dominating(g: LabeledGraph, members: Iterable[int], T: int) -> Verdict:
    """True iff every node of ``g`` is within distance ``T`` of some member.

    ``members`` are node ids.  On failure the witness names the (smallest)
    uncovered node together with its distance to the nearest member
    (``None`` when the member set is empty).
    """
    if T < 0:
        raise GraphError("domination radius T must be non-negative")
    mset = set(members)
    unknown = mset - g.nodes
    if unknown:
        raise GraphError(f"members contain unknown nodes: {sorted(unknown)}")
    dist = {v: 0 for v in mset}
    queue = deque(sorted(mset))
    while queue:
        x = queue.popleft()
        if dist[x] == T:
            continue
        for w in g.neighbours(x):
            if w not in dist:
                dist[w] = dist[x] + 1
                queue.append(w)
    uncovered = sorted(v for v in g.nodes if v not in dist)
    if not uncovered:
        return Verdict("is_t_dominating", True)
    witness_node = uncovered[0]
    nearest = None
    if mset:
        seen = {witness_node: 0}
        queue = deque([witness_node])
        while queue:
            x = queue.popleft()
            if x in mset:
                nearest = seen[x]
                break
            for w in g.neighbours(x):
                if w not in seen:
                    seen[w] = seen[x] + 1
                    queue.append(w)
    return Verdict(
        "is_t_dominating",
        False,
        {"node": witness_node, "nearest_member_distance": nearest},
    )


def window_check_ring(ring: RingSpec, members: Iterable[int], T: int) -> Verdict:
    """True iff every run of 2T+1 consecutive ring nodes contains a member.

    Members are labels of the ring.  Requires n >= 2T+1 (otherwise a window
    would wrap onto itself).
    """
    if T < 0:
        raise GraphError("window radius T must be non-negative")
    n = ring.n
    if n < 2 * T + 1:
        raise GraphError(f"ring of size {n} is smaller than one window of {2 * T + 1}")
    mset = set(members)
    unknown = mset - set(ring.labels)
    if unknown:
        raise GraphError(f"members contain labels not on the ring: {sorted(unknown)}")
    positions = sorted(ring.position(lab) for lab in mset)
    if not positions:
        return Verdict(
            "window_check_ring",
            False,
            {"window_start_position": 0, "window_labels": list(ring.arc(0, 2 * T + 1))},
        )
    for idx, p in enumerate(positions):
        q = positions[(idx + 1) % len(positions)]
        gap = (q - p - 1) % n if len(positions) > 1 else n - 1
        if gap >= 2 * T + 1:
            start = (p + 1) % n
            return Verdict(
                "window_check_ring",
                False,
                {"window_start_position": start, "window_labels": list(ring.arc(start, 2 * T + 1))},
            )
    return Verdict("window_check_ring", True)


def min_dominating_size_oracle(g: LabeledGraph, T: int, *, guard: int = 24) -> int:
    """Exact minimum size of a T-dominating set, by branch-and-bound search.

    Exponential in the worst case; refuses graphs with more than ``guard``
    nodes.  Branches on the first uncovered node, trying every ball that
    could cover it, with a greedy upper bound and a coverage-based lower
    bound for pruning.
    """
    if T < 0:
        raise GraphError("domination radius T must be non-negative")
    n = g.n
    if n > guard:
        raise GraphError(f"oracle is guarded to n <= {guard}, got n = {n}")
    order = sorted(g.nodes)
    index = {v: i for i, v in enumerate(order)}
    balls = []
    for v in order:
        dist = {v: 0}
        queue = deque([v])
        mask = 0
        while queue:
            x = queue.popleft()
            mask |= 1 << index[x]
            if dist[x] == T:
                continue
            for w in g.neighbours(x):
                if w not in dist:
                    dist[w] = dist[x] + 1
                    queue.append(w)
        balls.append(mask)
    full = (1 << n) - 1

    # Greedy cover for the initial upper bound.
    cover, best = 0, 0
    while cover != full:
        cover |= max(balls, key=lambda b: (b | cover).bit_count())
        best += 1

    max_ball = max(b.bit_count() for b in balls)

    def search(cover: int, count: int) -> None:
        nonlocal best
        if cover == full:
            best = min(best, count)
            return
        remaining = (full ^ cover).bit_count()
        if count + (remaining + max_ball - 1) // max_ball >= best:
            return
        first = (full ^ cover) & -(full ^ cover)
        target = first.bit_length() - 1
        candidates = [b for b in balls if b & (1 << target)]
        candidates.sort(key=lambda b: -(b & ~cover).bit_count())
        for b in candidates:
            search(cover | b, count + 1)

    search(0, 0)
    return best


def is_proper_colouring(g: LabeledGraph, colours: Mapping[int, int], q: int) -> Verdict:
    """True iff ``colours`` is a total map into {1..q} with no monochromatic edge."""
    missing = sorted(g.nodes - set(colours))
    if missing:
        raise GraphError(f"colouring misses nodes: {missing}")
    for v in sorted(g.nodes):
        c = colours[v]
        if not isinstance(c, int) or not 1 <= c <= q:
            return Verdict("is_proper_colouring", False, {"node": v, "colour": c, "palette": q})
    for u, v in sorted(g.edges):
        if colours[u] == colours[v]:
            return Verdict(
                "is_proper_colouring", False, {"edge": [u, v], "colour": colours[u]}
            )
    return Verdict("is_proper_colouring", True)


@dataclass(frozen=True)
class Stretch:
    """A maximal run of consecutive ring nodes sharing one kind.

    ``nodes`` lists the member labels consecutively; when the run has
    distinct endpoints it is oriented so the first label is smaller than the
    last.  ``degenerate`` marks the whole-ring run of a single kind.
    """

    kind: Hashable
    nodes: tuple[int, ...]
    degenerate: bool = False

    @property
    def length(self) -> int:
        return len(self.nodes)


def stretch_decomposition(ring: RingSpec, kinds: Mapping[int, Hashable]) -> list[Stretch]:
    """Partition the ring into maximal one-kind runs, merging across the wrap.

    ``kinds`` must cover every ring label.  A single-kind ring yields one
    degenerate stretch.  Runs appear in ring order starting from the first
    kind-change; each run's node tuple is flipped, when needed, so that the
    smaller-labelled endpoint comes first.
    """
    n = ring.n
    missing = [lab for lab in ring.labels if lab not in kinds]
    if missing:
        raise GraphError(f"kind mapping misses ring labels: {missing[:5]}")
    seq = ring.labels
    tags = [kinds[lab] for lab in seq]
    boundary = next((i for i in range(n) if tags[i] != tags[i - 1]), None)
    if boundary is None:
        return [Stretch(kind=tags[0], nodes=tuple(seq), degenerate=True)]
    stretches: list[Stretch] = []
    i = boundary
    consumed = 0
    while consumed < n:
        j = i
        run = []
        while consumed < n and tags[j % n] == tags[i % n]:
            run.append(seq[j % n])
            j += 1
            consumed += 1
        if len(run) >= 2 and run[0] > run[-1]:
            run.reverse()
        stretches.append(Stretch(kind=tags[i % n], nodes=tuple(run)))
        i = j
    return stretches


def check_certificates(g: LabeledGraph, result: ExecutionResult, T: int) -> Verdict:
    """Validate every emitted path certificate against the graph and members.

    A certificate must start at its node's own label, follow graph edges,
    have length at most ``T``, and end at a label held by a member.  Nodes
    without certificates pass vacuously.
    """
    member_labels = {g.label[v] for v in result.member_set}
    by_label = {g.label[v]: v for v in g.nodes}
    for v in sorted(result.outputs):
        cert = result.outputs[v].path_certificate
        if cert is None:
            continue
        fail = None
        if not cert:
            fail = "empty certificate"
        elif cert[0] != g.label[v]:
            fail = f"certificate starts at {cert[0]}, node's label is {g.label[v]}"
        elif len(cert) - 1 > T:
            fail = f"certificate length {len(cert) - 1} exceeds T={T}"
        elif any(lab not in by_label for lab in cert):
            fail = "certificate uses labels not present in the graph"
        elif cert[-1] not in member_labels:
            fail = f"certificate endpoint {cert[-1]} is not a member"
        else:
            for a, b in zip(cert, cert[1:]):
                na, nb = by_label[a], by_label[b]
                if (min(na, nb), max(na, nb)) not in g.edges:
                    fail = f"labels {a} and {b} are not adjacent"
                    break
        if fail:
            return Verdict("check_certificates", False, {"node": v, "reason": fail})
    return Verdict("check_certificates", True)
