"""Reduction from fast small dominating sets to deterministic ring 8-colouring.

Given an algorithm family promising, for every budget t, a t-dominating set
of size at most x*n, the reduction colours any ring with 8 colours in 2yT
rounds: run the family once with budget T to split the ring into *member*
and *non-member* stretches, re-run it with a smaller budget T' inside long
member stretches to split those into *survivor* and *non-survivor*
stretches, then 2-colour every stretch by parity from its smaller-labelled
end, giving each of the four stretch kinds its own colour pair.

The short-stretch bounds this relies on are validated explicitly; any
overlong survivor run is converted into a concrete counterexample ring on
which the family's size promise provably fails (its middle band keeps its
views, hence its outputs, so the output set is too large).  That conversion
is machine-checked here, view equality and all.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Mapping, Sequence

from .algorithms import AlgorithmFamily, log_star
from .graphs import GraphError, LabeledGraph, RingSpec, arc_sequence, ball
from .sim import execute, execute_at, views_equal
from .verify import Stretch, stretch_decomposition


NON_MEMBER_STRETCH = "non-member-stretch-bound"          # run of 0-outputs, bound 2T
NON_SURVIVOR_STRETCH = "non-survivor-stretch-bound"      # run of 0-survivors, bound 2T
SURVIVOR_STRETCH = "survivor-stretch-bound"              # run of 1-survivors, bound yT - 1
MEMBER_BOUNDARY = "member-boundary-visibility"           # stretch ends within 2yT - T
SURVIVOR_BOUNDARY = "survivor-boundary-visibility"       # run ends within yT

_BASE_NON_MEMBER = 1
_BASE_SHORT_MEMBER = 3
_BASE_NON_SURVIVOR = 5
_BASE_SURVIVOR = 7


@dataclass(frozen=True)
class ReductionParams:
    """Derived constants of one reduction run."""

    n: int
    x: Fraction
    beta: Fraction
    y: int
    alpha: Fraction
    T: int
    T_prime: int
    below_scale: bool

    @property
    def budget(self) -> int:
        return 2 * self.y * self.T

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "x": str(self.x),
            "beta": str(self.beta),
            "y": self.y,
            "alpha": str(self.alpha),
            "T": self.T,
            "T_prime": self.T_prime,
            "budget": self.budget,
            "below_scale": self.below_scale,
        }


def compute_params(
    n: int,
    x: Fraction,
    beta: Fraction = Fraction(2, 3),
    *,
    T: int | None = None,
    T_prime: int | None = None,
) -> ReductionParams:
    """Derive (y, alpha, T, T') from the target fraction ``x``.

    ``y`` is the smallest integer with (y-2)/y > x and ``alpha = beta/(4y)``.
    The natural budget T = floor(alpha * log*(n)) is far below 1 at desk
    scale, in which case the run is flagged ``below_scale``; explicit ``T``
    (and optionally ``T_prime``) overrides exercise the mechanism anyway.
    """
    x = Fraction(x)
    beta = Fraction(beta)
    if not 0 < x < 1:
        raise ValueError("target fraction x must satisfy 0 < x < 1")
    if beta <= 0:
        raise ValueError("beta must be positive")
    y = int(2 / (1 - x)) + 1
    assert Fraction(y - 2, y) > x and y > 2
    alpha = beta / (4 * y)
    if T is None:
        T_eff = int(alpha * log_star(n))
    else:
        if T < 1:
            raise ValueError("override budget T must be at least 1")
        T_eff = T
    below = T_eff < 1
    if below:
        return ReductionParams(n=n, x=x, beta=beta, y=y, alpha=alpha,
                               T=T_eff, T_prime=0, below_scale=True)
    if T_prime is None:
        Tp = int(alpha * log_star(y * T_eff))
    else:
        Tp = T_prime
    if not 0 <= Tp <= T_eff:
        raise ValueError(f"T' must lie in [0, T], got {Tp} with T = {T_eff}")
    return ReductionParams(n=n, x=x, beta=beta, y=y, alpha=alpha,
                           T=T_eff, T_prime=Tp, below_scale=False)


@dataclass(frozen=True)
class ClaimVerdict:
    """One validated stretch bound, with a witness run when it fails."""

    claim: str
    ok: bool
    bound: int
    witness: tuple[int, ...] | None = None

    def as_dict(self) -> dict:
        return {
            "claim": self.claim,
            "ok": self.ok,
            "bound": self.bound,
            "witness": list(self.witness) if self.witness else None,
        }


@dataclass
class ColouringResult:
    """Outcome of one reduction run."""

    params: ReductionParams
    colours: dict[int, int]
    rounds_used: int
    memberships: dict[int, int]
    survivorships: dict[int, int]
    claim_violations: list[ClaimVerdict]
    degenerate: bool = False
    below_scale: bool = False
    uncoloured: tuple[int, ...] = ()

    def as_dict(self) -> dict:
        return {
            "params": self.params.as_dict(),
            "colours": sorted(self.colours.items()),
            "rounds_used": self.rounds_used,
            "claim_violations": [v.as_dict() for v in self.claim_violations],
            "degenerate": self.degenerate,
            "below_scale": self.below_scale,
            "uncoloured": sorted(self.uncoloured),
        }


def _long_member_stretches(ring: RingSpec, membership: Mapping[int, int], y: int, T: int):
    """Member stretches longer than yT (the ones whose nodes re-run the family)."""
    longs = []
    for stretch in stretch_decomposition(ring, membership):
        if stretch.kind == 1 and (stretch.length > y * T or stretch.degenerate):
            longs.append(stretch)
    return longs


def validate_stretch_bounds(
    ring: RingSpec,
    membership: Mapping[int, int],
    survivorship: Mapping[int, int] | None,
    params: ReductionParams,
) -> list[ClaimVerdict]:
    """Check every stretch-length and boundary-visibility bound of the reduction.

    ``membership`` maps each ring label to its first-execution bit;
    ``survivorship`` maps the labels of long member stretches to their
    second-execution bit (may be None/empty when no stretch is long).
    Returns one verdict per bound; failing verdicts carry the offending run.
    """
    y, T = params.y, params.T
    verdicts: list[ClaimVerdict] = []
    stretches = stretch_decomposition(ring, membership)

    def bound_check(runs: list[Stretch], claim: str, limit: int) -> None:
        bad = [s for s in runs if s.length > limit]
        if bad:
            worst = max(bad, key=lambda s: s.length)
            verdicts.append(ClaimVerdict(claim=claim, ok=False, bound=limit, witness=worst.nodes))
        else:
            verdicts.append(ClaimVerdict(claim=claim, ok=True, bound=limit))

    non_member_runs = [s for s in stretches if s.kind == 0]
    bound_check(non_member_runs, NON_MEMBER_STRETCH, 2 * T)

    # Boundary visibility for members/non-members: the whole stretch plus its
    # two boundary nodes must fit in radius 2yT - T around any stretch node.
    visible = 2 * y * T - T
    offenders = [
        s for s in stretches
        if s.degenerate or (s.length + 1 > visible and not (s.kind == 1 and s.length > y * T))
    ]
    if offenders:
        verdicts.append(ClaimVerdict(
            claim=MEMBER_BOUNDARY, ok=False, bound=visible,
            witness=offenders[0].nodes,
        ))
    else:
        verdicts.append(ClaimVerdict(claim=MEMBER_BOUNDARY, ok=True, bound=visible))

    survivor_runs: list[Stretch] = []
    non_survivor_runs: list[Stretch] = []
    if survivorship:
        for stretch in _long_member_stretches(ring, membership, y, T):
            if stretch.degenerate:
                # Whole-ring member stretch: survivor runs may wrap, so
                # decompose them circularly.
                for sub in stretch_decomposition(ring, survivorship):
                    (survivor_runs if sub.kind == 1 else non_survivor_runs).append(sub)
                continue
            run: list[int] = []
            current = None
            for lab in stretch.nodes:
                tag = survivorship[lab]
                if current is None or tag != current:
                    if run:
                        (survivor_runs if current == 1 else non_survivor_runs).append(
                            Stretch(kind=current, nodes=tuple(run))
                        )
                    run, current = [], tag
                run.append(lab)
            if run:
                (survivor_runs if current == 1 else non_survivor_runs).append(
                    Stretch(kind=current, nodes=tuple(run))
                )
    bound_check(non_survivor_runs, NON_SURVIVOR_STRETCH, 2 * T)
    bound_check(survivor_runs, SURVIVOR_STRETCH, y * T - 1)
    sv_offenders = [s for s in survivor_runs + non_survivor_runs if s.length + 1 > y * T]
    if sv_offenders:
        verdicts.append(ClaimVerdict(
            claim=SURVIVOR_BOUNDARY, ok=False, bound=y * T,
            witness=sv_offenders[0].nodes,
        ))
    else:
        verdicts.append(ClaimVerdict(claim=SURVIVOR_BOUNDARY, ok=True, bound=y * T))
    return verdicts


def eight_colour_ring(
    alg_family: AlgorithmFamily,
    ring: RingSpec,
    x: Fraction,
    beta: Fraction = Fraction(2, 3),
    *,
    T: int | None = None,
    T_prime: int | None = None,
    nested: bool = True,
) -> ColouringResult:
    """Colour ``ring`` with 8 colours using the dominating-set family.

    Every node decides its colour from its radius-2yT view alone: it
    simulates the family at budget T on every node within 2yT - T (nested
    execution inside its own ball), walks to its stretch boundaries, and if
    it sits in a long member stretch simulates the family at budget T' on
    the stretch nodes within yT.  Nodes whose stretch boundaries are not
    visible at the mandated radii stay uncoloured and the corresponding
    bound shows up in ``claim_violations``.

    ``nested=False`` replaces the per-node nested simulations with the
    (provably identical) global executions; tests assert the equivalence.
    """
    params = compute_params(ring.n, x, beta, T=T, T_prime=T_prime)
    if params.below_scale:
        return ColouringResult(
            params=params, colours={}, rounds_used=0, memberships={},
            survivorships={}, claim_violations=[], below_scale=True,
        )
    if max(ring.labels) > ring.n:
        raise GraphError("the reduction expects ring labels drawn from {1..n}")
    y, T_eff, Tp, budget = params.y, params.T, params.T_prime, params.budget
    g = ring.to_graph()
    alg_T = alg_family(T_eff)
    alg_Tp = alg_family(Tp)

    exec_1 = execute(alg_T, g, T_eff)
    membership = {v: exec_1.outputs[v].bit for v in g.nodes}
    long_stretches = _long_member_stretches(ring, membership, y, T_eff)
    long_nodes = {lab for s in long_stretches for lab in s.nodes}
    survivorship: dict[int, int] = {}
    if long_nodes:
        exec_2 = execute(alg_Tp, g, Tp)
        survivorship = {lab: exec_2.outputs[lab].bit for lab in long_nodes}

    all_member = all(bit == 1 for bit in membership.values())
    degenerate = all_member and (ring.n <= y * T_eff or not survivorship or
                                 all(b == 1 for b in survivorship.values()))

    violations = validate_stretch_bounds(ring, membership, survivorship, params)
    claim_violations = [v for v in violations if not v.ok]

    colours: dict[int, int] = {}
    uncoloured: list[int] = []
    if not degenerate:
        n = ring.n
        seq = ring.labels
        pos_of = {lab: i for i, lab in enumerate(seq)}
        for v in seq:
            colour = _colour_of_node(
                g, ring, v, pos_of[v], params, alg_T, alg_Tp,
                membership, survivorship, nested,
            )
            if colour is None:
                uncoloured.append(v)
            else:
                colours[v] = colour
    else:
        uncoloured = list(ring.labels)

    return ColouringResult(
        params=params,
        colours=colours,
        rounds_used=budget,
        memberships=membership,
        survivorships=survivorship,
        claim_violations=claim_violations,
        degenerate=degenerate,
        uncoloured=tuple(uncoloured),
    )


def _colour_of_node(
    g: LabeledGraph,
    ring: RingSpec,
    v: int,
    pos: int,
    params: ReductionParams,
    alg_T,
    alg_Tp,
    global_membership: Mapping[int, int],
    global_survivorship: Mapping[int, int],
    nested: bool,
) -> int | None:
    """One node's colour decision from its own radius-2yT view (None = stuck)."""
    y, T, Tp, budget = params.y, params.T, params.T_prime, params.budget
    n = ring.n
    view = ball(g, v, budget) if nested else None

    def lab_at(off: int) -> int:
        return ring.at(pos + off)

    def ring_dist(off: int) -> int:
        off %= n
        return min(off, n - off)

    def member_bit(off: int) -> int | None:
        if ring_dist(off) > budget - T:
            return None
        w = lab_at(off)
        if nested:
            return execute_at(alg_T, view, w, T).bit
        return global_membership[w]

    def survivor_bit(off: int) -> int | None:
        if ring_dist(off) > y * T:
            return None
        w = lab_at(off)
        if nested:
            return execute_at(alg_Tp, view, w, Tp).bit
        # Walks only reach members of the node's own (long) stretch, which is
        # exactly the domain of the global survivorship map.
        return global_survivorship[w]

    def walk(bit_fn, value: int, direction: int, limit: int) -> tuple[int, bool] | None:
        """Steps until ``bit_fn`` leaves ``value``; (steps, hit_boundary) or None.

        ``steps`` counts positions holding ``value`` strictly beyond the
        start.  ``None`` means knowledge ran out before a boundary appeared;
        ``(steps, False)`` means the probe limit (or the whole ring) was
        exhausted without finding one.
        """
        steps = 0
        lim = min(limit, n)
        while steps < lim:
            b = bit_fn(direction * (steps + 1))
            if b is None:
                return None
            if b != value:
                return steps, True
            steps += 1
        return steps, False

    def parity_colour(base: int, left_steps: int, right_steps: int) -> int:
        first = lab_at(-left_steps)
        last = lab_at(right_steps)
        anchor_dist = left_steps if first <= last else right_steps
        return base + (anchor_dist % 2)

    my_bit = member_bit(0)
    assert my_bit is not None

    if my_bit == 0:
        left = walk(member_bit, 0, -1, n)
        right = walk(member_bit, 0, +1, n)
        if left is None or right is None or not (left[1] and right[1]):
            return None
        return parity_colour(_BASE_NON_MEMBER, left[0], right[0])

    # Member: first decide short vs long by probing up to yT + 1 each way.
    left = walk(member_bit, 1, -1, y * T + 1)
    right = walk(member_bit, 1, +1, y * T + 1)
    if left is None or right is None:
        return None
    short = left[1] and right[1] and (left[0] + right[0] + 1) <= y * T
    if short:
        return parity_colour(_BASE_SHORT_MEMBER, left[0], right[0])

    my_sbit = survivor_bit(0)
    if my_sbit is None:
        return None

    def run_bit(off: int) -> int | None:
        """Survivor bit, with the member-stretch ends acting as boundaries."""
        m = member_bit(off)
        if m == 0:
            return -1  # any value different from 0 and 1 ends the run
        s = survivor_bit(off)
        return s

    if my_sbit == 0:
        left = walk(run_bit, 0, -1, y * T)
        right = walk(run_bit, 0, +1, y * T)
        if left is None or right is None or not (left[1] and right[1]):
            return None
        return parity_colour(_BASE_NON_SURVIVOR, left[0], right[0])

    left = walk(run_bit, 1, -1, y * T)
    right = walk(run_bit, 1, +1, y * T)
    if left is None or right is None or not (left[1] and right[1]):
        return None  # survivor run too long to see both ends
    return parity_colour(_BASE_SURVIVOR, left[0], right[0])


def counterexample_ring(run_labels: Sequence[int], y: int, T: int) -> RingSpec:
    """Close the first yT nodes of an overlong survivor run into a ring."""
    needed = y * T
    if len(run_labels) < needed:
        raise GraphError(
            f"survivor run of length {len(run_labels)} is shorter than yT = {needed}"
        )
    return RingSpec(tuple(run_labels[:needed]))


@dataclass
class CounterexampleReport:
    """Machine check that an overlong survivor run breaks the size promise."""

    ring_size: int
    middle_band: tuple[int, ...]
    views_equal_all: bool
    outputs_reproduced: bool
    member_count: int
    min_expected: int                # (y - 2) * T
    fraction: Fraction               # member_count / ring_size
    exceeds_target: bool             # fraction > x

    def ok(self) -> bool:
        return self.views_equal_all and self.outputs_reproduced and self.exceeds_target

    def as_dict(self) -> dict:
        return {
            "ring_size": self.ring_size,
            "middle_band": list(self.middle_band),
            "views_equal_all": self.views_equal_all,
            "outputs_reproduced": self.outputs_reproduced,
            "member_count": self.member_count,
            "min_expected": self.min_expected,
            "fraction": str(self.fraction),
            "exceeds_target": self.exceeds_target,
        }


def verify_counterexample(
    alg_family: AlgorithmFamily,
    host_ring: RingSpec,
    run_labels: Sequence[int],
    params: ReductionParams,
    *,
    host_L: int | None = None,
) -> CounterexampleReport:
    """Re-run the family on the counterexample ring and certify the failure.

    The middle band (positions T+1 .. (y-1)T of the run) keeps its radius-T'
    view when the run is closed into a ring, so it reproduces its outputs;
    that alone already makes the output set larger than x times the ring.
    """
    y, T, Tp, x = params.y, params.T, params.T_prime, params.x
    rprime = counterexample_ring(run_labels, y, T)
    L = host_L if host_L is not None else max(host_ring.n, max(host_ring.labels))
    g_host = host_ring.to_graph(L=L)
    g_prime = rprime.to_graph(L=L)
    alg = alg_family(Tp)
    exec_3 = execute(alg, g_prime, Tp)
    band = tuple(rprime.labels[T:(y - 1) * T])
    veq = all(
        views_equal(ball(g_host, z, Tp), ball(g_prime, z, Tp)) for z in band
    )
    reproduced = all(exec_3.outputs[z].bit == 1 for z in band)
    count = len(exec_3.member_set)
    frac = Fraction(count, rprime.n)
    return CounterexampleReport(
        ring_size=rprime.n,
        middle_band=band,
        views_equal_all=veq,
        outputs_reproduced=reproduced,
        member_count=count,
        min_expected=(y - 2) * T,
        fraction=frac,
        exceeds_target=frac > x,
    )
