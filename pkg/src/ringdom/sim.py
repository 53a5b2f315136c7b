"""Synchronous LOCAL round engine.

In the LOCAL model a deterministic algorithm that runs for ``T`` rounds is
equivalent to a one-shot function of the radius-``T`` view: after ``T``
rounds of unbounded message exchange a node knows exactly its ``T``-ball and
nothing more.  Algorithms are therefore modelled as pure ``decide(params,
view)`` functions; the engine extracts each node's ball, applies ``decide``,
and collects the outputs.

The engine also cross-checks the round budget an algorithm declares: the
decision is re-evaluated on the smaller ball of the declared radius and must
not change.  That turns "runs in time t" into a tested claim.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

from .graphs import LabeledGraph, View, ball, ball_in_view, view_distance_map


class SimulationError(RuntimeError):
    """Broken contract between an algorithm and the round engine."""


class RoundContractViolation(SimulationError):
    """An algorithm's output depends on information beyond its declared rounds."""


@dataclass(frozen=True)
class NodeOutput:
    """A node's decision: the membership bit plus an optional path certificate.

    The certificate, when present, is a label sequence starting at the node
    itself and ending at the set member the node vouches for.
    """

    bit: int
    path_certificate: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.bit not in (0, 1):
            raise SimulationError(f"output bit must be 0 or 1, got {self.bit!r}")
        if self.path_certificate is not None:
            object.__setattr__(self, "path_certificate", tuple(self.path_certificate))


@dataclass
class NodeAlgorithm:
    """A deterministic per-node decision rule.

    ``decide`` may consult only its two arguments; equal parameters and equal
    views must give equal outputs.  ``rounds_used`` is the communication
    budget the rule actually needs (its decision must be a function of the
    ball of that radius); the engine verifies this on every execution.
    """

    name: str
    parameters: dict
    rounds_used: int
    decide: Callable[[Mapping, View], NodeOutput]

    def __call__(self, view: View) -> NodeOutput:
        return self.decide(self.parameters, view)


@dataclass
class ExecutionResult:
    """Outputs of one synchronous execution, keyed by node id."""

    outputs: dict[int, NodeOutput]
    rounds_used: int
    member_set: frozenset[int] = field(default=frozenset())

    def __post_init__(self):
        derived = frozenset(v for v, out in self.outputs.items() if out.bit == 1)
        if not self.member_set:
            self.member_set = derived
        elif self.member_set != derived:
            raise SimulationError("member_set must equal the nodes that output 1")

    def member_labels(self, g: LabeledGraph) -> frozenset[int]:
        return frozenset(g.label[v] for v in self.member_set)


def execute(
    alg: NodeAlgorithm,
    g: LabeledGraph,
    T: int,
    *,
    verify_rounds: bool = True,
) -> ExecutionResult:
    """Run ``alg`` at every node of ``g`` with round budget ``T``.

    Pure in all inputs: repeated calls give identical results.  With
    ``verify_rounds`` (the default) the engine re-evaluates every node on the
    ball of radius ``alg.rounds_used`` and raises RoundContractViolation on
    any disagreement.
    """
    if T < 0:
        raise SimulationError("round budget T must be non-negative")
    if alg.rounds_used > T:
        raise RoundContractViolation(
            f"{alg.name} declares {alg.rounds_used} rounds but the budget is {T}"
        )
    outputs: dict[int, NodeOutput] = {}
    for v in sorted(g.nodes):
        view = ball(g, v, T)
        out = alg.decide(alg.parameters, view)
        if verify_rounds and alg.rounds_used < T:
            small = ball(g, v, alg.rounds_used)
            redo = alg.decide(alg.parameters, small)
            if redo != out:
                raise RoundContractViolation(
                    f"{alg.name} at node {v}: output from the radius-{T} ball differs "
                    f"from the radius-{alg.rounds_used} ball it declared sufficient"
                )
        outputs[v] = out
    return ExecutionResult(outputs=outputs, rounds_used=alg.rounds_used)


def execute_at(alg: NodeAlgorithm, view: View, w: int, t_prime: int) -> NodeOutput:
    """Nested simulation: run ``alg`` at label ``w`` inside a host ``view``.

    Sound whenever ``distance(view.root, w) + t_prime <= view.radius``; the
    extracted ball then equals the one `execute` would hand ``w`` on the host
    graph, so the outputs coincide.  Containment violations raise loudly
    (they are correctness bugs in the caller, never recoverable data).
    """
    if alg.rounds_used > t_prime:
        raise RoundContractViolation(
            f"{alg.name} declares {alg.rounds_used} rounds but the nested budget is {t_prime}"
        )
    nested = ball_in_view(view, w, t_prime)
    return alg.decide(alg.parameters, nested)


def views_equal(a: View, b: View) -> bool:
    """Exact rooted-labelled isomorphism, frontier degrees included."""
    return a == b
