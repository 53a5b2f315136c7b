"""Cut-and-paste adversary: a certified size lower bound for ring dominators.

The harness runs a candidate algorithm on two disjoint reference rings,
selects one representative member per segment of 2T+1 nodes, cuts out the
representatives' radius-T balls in consecutive pairs, and splices the pieces
(each pair separated by a single segment-middle node) into a new ring of the
original size, padded with fresh labels.  Every representative keeps its
exact radius-T view, so a deterministic algorithm must answer identically on
the composed ring; together with the window argument this forces at least
3c + 4 members there, which exceeds lambda * n / (2T+1) for the admissible
parameter range (lambda < 3/2, with divisibility assumptions on n).

All bound comparisons use exact rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .graphs import GraphError, LabeledGraph, RingSpec, ball
from .sim import ExecutionResult, NodeAlgorithm, execute, views_equal
from .verify import Verdict, is_t_dominating


class InfeasibleParameters(ValueError):
    """The (n, T, lambda) triple violates the construction's assumptions."""


class CandidateFalsified(RuntimeError):
    """The candidate failed to produce a dominating set on a concrete ring."""

    def __init__(self, ring_name: str, verdict: Verdict):
        self.ring_name = ring_name
        self.verdict = verdict
        super().__init__(f"candidate output is not T-dominating on {ring_name}: {verdict.witness}")


@dataclass(frozen=True)
class Feasibility:
    """Outcome of the parameter check, with the derived construction sizes."""

    ok: bool
    reason: str | None
    n: int
    T: int
    lam: Fraction
    c: int = 0
    paths_available: int = 0
    filler_size: int = 0
    min_filler: int = 0

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "reason": self.reason,
            "n": self.n,
            "T": self.T,
            "lambda": str(self.lam),
            "c": self.c,
            "paths_available": self.paths_available,
            "filler_size": self.filler_size,
            "min_filler": self.min_filler,
        }


def feasibility(n: int, T: int, lam: Fraction) -> Feasibility:
    """Check every assumption the composed-ring construction relies on.

    Requires lambda < 3/2 strictly, T >= 1, (2T+1) | n, 4 | n/(2T+1),
    c = floor((lambda/3) * n/(2T+1)) at most the 2r+2 paths the two source
    rings supply, and a filler of at least 8T+4 nodes.
    """
    lam = Fraction(lam)

    def fail(reason: str, **kw) -> Feasibility:
        return Feasibility(ok=False, reason=reason, n=n, T=T, lam=lam, **kw)

    if lam >= Fraction(3, 2):
        return fail("lambda must be strictly smaller than 3/2")
    if lam <= 0:
        return fail("lambda must be positive")
    if T < 1:
        return fail("T must be a positive integer")
    if n % (2 * T + 1) != 0:
        return fail(f"2T+1 = {2 * T + 1} must divide n = {n}")
    segments = n // (2 * T + 1)
    if segments % 4 != 0:
        return fail(f"n/(2T+1) = {segments} must be divisible by 4")
    c = int(lam / 3 * segments)
    paths_available = segments // 2  # r + 1 per source ring, two rings
    filler = n - c * (4 * T + 3)
    min_filler = 8 * T + 4
    if c > paths_available:
        return fail(
            f"construction needs c = {c} paths but only {paths_available} are available",
            c=c, paths_available=paths_available,
        )
    if filler < min_filler:
        return fail(
            f"filler {filler} < {min_filler}",
            c=c, paths_available=paths_available, filler_size=filler, min_filler=min_filler,
        )
    return Feasibility(
        ok=True, reason=None, n=n, T=T, lam=lam,
        c=c, paths_available=paths_available, filler_size=filler, min_filler=min_filler,
    )


@dataclass
class AdversaryArtifacts:
    """Every intermediate object of the composed-ring construction.

    Segments and representatives are indexed globally: indices below
    n/(2T+1) belong to the first source ring, the rest to the second.
    ``ball_paths[j]`` is the 2T+1-node path around representative ``2j``;
    ``glue_paths[k]`` is ball path 4k, the middle node of segment 4k+1, then
    ball path 4k+2 (4T+3 nodes).  The composed ring concatenates the first
    ``c`` glue paths and the filler.
    """

    n: int
    T: int
    lam: Fraction
    c: int
    source_rings: tuple[RingSpec, RingSpec]
    segments: tuple[tuple[int, ...], ...]
    representatives: tuple[int, ...]
    ball_paths: tuple[tuple[int, ...], ...]
    separators: tuple[int, ...]
    glue_paths: tuple[tuple[int, ...], ...]
    chosen_paths: tuple[tuple[int, ...], ...]
    filler: tuple[int, ...]
    composed: RingSpec

    def pair_representatives(self, k: int) -> tuple[int, int]:
        return self.representatives[4 * k], self.representatives[4 * k + 2]

    def between_labels(self, k: int) -> tuple[int, ...]:
        """The 2T+1 labels strictly between the k-th pair inside its glue path."""
        return self.glue_paths[k][self.T + 1: 3 * self.T + 2]


def build_adversary_instance(
    alg: NodeAlgorithm, n: int, T: int, lam: Fraction
) -> tuple[AdversaryArtifacts, dict[str, ExecutionResult]]:
    """Run the candidate on both source rings and assemble the composed ring.

    Raises InfeasibleParameters for inadmissible (n, T, lambda) and
    CandidateFalsified (with the witness verdict) when a source-ring output
    is not T-dominating.  Returns the artifacts plus the source executions.
    """
    feas = feasibility(n, T, lam)
    if not feas.ok:
        raise InfeasibleParameters(feas.reason)
    lam = Fraction(lam)
    c = feas.c
    width = 2 * T + 1
    segments_per_ring = n // width

    ring1 = RingSpec(tuple(range(1, n + 1)))
    ring2 = RingSpec(tuple(range(n + 1, 2 * n + 1)))
    g1 = ring1.to_graph(L=2 * n)
    g2 = ring2.to_graph(L=2 * n)
    exec1 = execute(alg, g1, T)
    verdict1 = is_t_dominating(g1, exec1.member_set, T)
    if not verdict1:
        raise CandidateFalsified("source ring 1", verdict1)
    exec2 = execute(alg, g2, T)
    verdict2 = is_t_dominating(g2, exec2.member_set, T)
    if not verdict2:
        raise CandidateFalsified("source ring 2", verdict2)

    members1 = exec1.member_set  # node ids equal labels on built rings
    members2 = exec2.member_set

    segments: list[tuple[int, ...]] = []
    representatives: list[int] = []
    for i in range(2 * segments_per_ring):
        seg = tuple(range(width * i + 1, width * (i + 1) + 1))
        members = members1 if i < segments_per_ring else members2
        reps = [lab for lab in seg if lab in members]
        assert reps, "window property guarantees a member per segment"
        segments.append(seg)
        representatives.append(min(reps))

    def ring_of(index: int) -> tuple[RingSpec, int]:
        if index < segments_per_ring:
            return ring1, 0
        return ring2, n

    ball_paths: list[tuple[int, ...]] = []
    for j in range(segments_per_ring):  # global even segment index 2j
        src, base = ring_of(2 * j)
        pos = representatives[2 * j] - base - 1
        ball_paths.append(src.arc(pos - T, width))

    separators: list[int] = []
    glue_paths: list[tuple[int, ...]] = []
    for k in range(segments_per_ring // 2):
        v_k = width * (4 * k + 1) + T + 1  # middle node of segment 4k+1
        separators.append(v_k)
        glue = ball_paths[2 * k] + (v_k,) + ball_paths[2 * k + 1]
        assert len(glue) == 4 * T + 3
        glue_paths.append(glue)

    chosen = tuple(glue_paths[:c])
    used = {lab for path in chosen for lab in path}
    filler_count = n - c * (4 * T + 3)
    filler = tuple(sorted(set(range(1, 2 * n + 1)) - used))[:filler_count]
    composed_labels = tuple(lab for path in chosen for lab in path) + filler
    assert len(composed_labels) == n
    composed = RingSpec(composed_labels)

    artifacts = AdversaryArtifacts(
        n=n, T=T, lam=lam, c=c,
        source_rings=(ring1, ring2),
        segments=tuple(segments),
        representatives=tuple(representatives),
        ball_paths=tuple(ball_paths),
        separators=tuple(separators),
        glue_paths=tuple(glue_paths),
        chosen_paths=chosen,
        filler=filler,
        composed=composed,
    )
    return artifacts, {"ring1": exec1, "ring2": exec2}


@dataclass
class PairVerdict:
    """Checks for one spliced representative pair on the composed ring."""

    index: int
    rep_a: int
    rep_b: int
    view_equal_a: bool
    view_equal_b: bool
    output_a: int
    output_b: int
    extra_member_between: bool

    def ok(self) -> bool:
        return (
            self.view_equal_a
            and self.view_equal_b
            and self.output_a == 1
            and self.output_b == 1
            and self.extra_member_between
        )

    def as_dict(self) -> dict:
        return {
            "pair": self.index,
            "representatives": [self.rep_a, self.rep_b],
            "views_equal": [self.view_equal_a, self.view_equal_b],
            "outputs": [self.output_a, self.output_b],
            "extra_member_between": self.extra_member_between,
        }


@dataclass
class AdversaryReport:
    """Full outcome of one composed-ring experiment."""

    n: int
    T: int
    lam: Fraction
    c: int
    algorithm: str
    falsified_on: str | None
    falsification_witness: dict | None
    member_count: int
    lower_bound: int                 # 3c + 4
    target: Fraction                 # lambda * n / (2T + 1)
    pair_verdicts: list[PairVerdict]
    filler_members: int
    bound_certified: bool
    composed_ring: tuple[int, ...] | None = None

    def as_dict(self, *, include_ring: bool = False) -> dict:
        out = {
            "n": self.n,
            "T": self.T,
            "lambda": str(self.lam),
            "c": self.c,
            "algorithm": self.algorithm,
            "falsified_on": self.falsified_on,
            "falsification_witness": self.falsification_witness,
            "member_count": self.member_count,
            "lower_bound": self.lower_bound,
            "target": str(self.target),
            "target_float": float(self.target),
            "pairs": [p.as_dict() for p in self.pair_verdicts],
            "filler_members": self.filler_members,
            "bound_certified": self.bound_certified,
        }
        if include_ring and self.composed_ring is not None:
            out["composed_ring"] = list(self.composed_ring)
        return out


def run_adversary_experiment(
    alg: NodeAlgorithm, n: int, T: int, lam: Fraction, *, keep_ring: bool = False
) -> AdversaryReport:
    """Build the composed ring, run the candidate on it, and certify the bound.

    The report records, per spliced pair, that both representatives keep
    their source-ring radius-T views (checked with exact view equality),
    that they output 1 again, and that a further member sits strictly
    between them; plus at least four members in the filler.  The headline
    inequality is member_count >= 3c + 4 > lambda * n / (2T+1).

    A candidate that fails to dominate on any of the three rings is reported
    as falsified (with the witness) rather than certified.
    """
    lam = Fraction(lam)
    target = lam * n / (2 * T + 1)
    try:
        artifacts, sources = build_adversary_instance(alg, n, T, lam)
    except CandidateFalsified as exc:
        return AdversaryReport(
            n=n, T=T, lam=lam, c=0, algorithm=alg.name,
            falsified_on=exc.ring_name,
            falsification_witness=exc.verdict.witness,
            member_count=0, lower_bound=0, target=target,
            pair_verdicts=[], filler_members=0, bound_certified=False,
        )
    g_c = artifacts.composed.to_graph(L=2 * n)
    exec_c = execute(alg, g_c, T)
    verdict_c = is_t_dominating(g_c, exec_c.member_set, T)
    if not verdict_c:
        return AdversaryReport(
            n=n, T=T, lam=lam, c=artifacts.c, algorithm=alg.name,
            falsified_on="composed ring",
            falsification_witness=verdict_c.witness,
            member_count=len(exec_c.member_set), lower_bound=0, target=target,
            pair_verdicts=[], filler_members=0, bound_certified=False,
            composed_ring=artifacts.composed.labels if keep_ring else None,
        )

    member_labels = exec_c.member_labels(g_c)
    g_sources = (
        artifacts.source_rings[0].to_graph(L=2 * n),
        artifacts.source_rings[1].to_graph(L=2 * n),
    )
    pair_verdicts: list[PairVerdict] = []
    for k in range(artifacts.c):
        rep_a, rep_b = artifacts.pair_representatives(k)
        g_a = g_sources[0] if rep_a <= n else g_sources[1]
        g_b = g_sources[0] if rep_b <= n else g_sources[1]
        between = artifacts.between_labels(k)
        pair_verdicts.append(
            PairVerdict(
                index=k,
                rep_a=rep_a,
                rep_b=rep_b,
                view_equal_a=views_equal(ball(g_a, rep_a, T), ball(g_c, rep_a, T)),
                view_equal_b=views_equal(ball(g_b, rep_b, T), ball(g_c, rep_b, T)),
                output_a=exec_c.outputs[rep_a].bit,
                output_b=exec_c.outputs[rep_b].bit,
                extra_member_between=any(lab in member_labels for lab in between),
            )
        )
    filler_members = sum(1 for lab in artifacts.filler if lab in member_labels)
    lower_bound = 3 * artifacts.c + 4
    certified = (
        all(p.ok() for p in pair_verdicts)
        and filler_members >= 4
        and len(exec_c.member_set) >= lower_bound
        and Fraction(lower_bound) > target
    )
    return AdversaryReport(
        n=n, T=T, lam=lam, c=artifacts.c, algorithm=alg.name,
        falsified_on=None, falsification_witness=None,
        member_count=len(exec_c.member_set),
        lower_bound=lower_bound, target=target,
        pair_verdicts=pair_verdicts,
        filler_members=filler_members,
        bound_certified=certified,
        composed_ring=artifacts.composed.labels if keep_ring else None,
    )
