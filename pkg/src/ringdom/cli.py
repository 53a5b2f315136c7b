"""Batch experiment runner.

Subcommands::

    run        execute an algorithm on a graph and verify its output
    verify     check a supplied member set against a graph
    oracle     exact minimum dominating-set size on a small ring
    adversary  composed-ring lower-bound experiment
    colour     dominating-set -> 8-colouring reduction
    sweep      grids of (n, T) runs, CSV or JSON

Exit codes: 0 success / bound certified, 1 verification failure, 2 config
error (bad flags, malformed files, infeasible parameters).  Reports embed
the config that produced them; identical config and seed give byte-identical
output.  Rationals are passed exactly as ``p/q`` strings; no bound is ever
compared in floating point.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import random
import sys
from dataclasses import dataclass
from fractions import Fraction

from .adversary import InfeasibleParameters, feasibility, run_adversary_experiment
from .algorithms import choose_smallest, constant_algorithm, ruling_set_dominator
from .graphs import GraphError, GraphFormatError, RingSpec, parse_graph_file
from .reductions import eight_colour_ring
from .sim import execute
from .verify import (
    check_certificates,
    is_proper_colouring,
    is_t_dominating,
    min_dominating_size_oracle,
    window_check_ring,
)

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_CONFIG = 2


ALGORITHMS = {
    "choose-smallest": lambda T, L: choose_smallest(T),
    "ruling-set": lambda T, L: ruling_set_dominator(T, L),
    "constant-1": lambda T, L: constant_algorithm(1),
    "constant-0": lambda T, L: constant_algorithm(0),
}


@dataclass(frozen=True)
class ExperimentConfig:
    """The serialisable description of one command invocation."""

    command: str
    options: tuple[tuple[str, object], ...]

    @classmethod
    def make(cls, command: str, **options) -> "ExperimentConfig":
        clean = {k: v for k, v in options.items() if v is not None}
        return cls(command=command, options=tuple(sorted(clean.items())))

    def to_dict(self) -> dict:
        return {"command": self.command, **dict(self.options)}

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        opts = {k: v for k, v in data.items() if k != "command"}
        return cls.make(data["command"], **opts)


def parse_fraction(text: str) -> Fraction:
    try:
        if "/" in text:
            num, den = text.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational like 7/5, got {text!r}") from None


def _csv_ints(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _range_spec(text: str) -> tuple[int, int, int]:
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise argparse.ArgumentTypeError(f"expected a:b or a:b:step, got {text!r}")
    try:
        a, b = int(parts[0]), int(parts[1])
        step = int(parts[2]) if len(parts) == 3 else 1
    except ValueError:
        raise argparse.ArgumentTypeError(f"range bounds must be integers, got {text!r}") from None
    if step < 1:
        raise argparse.ArgumentTypeError("range step must be positive")
    return a, b, step


def ring_labels(n: int, labels: list[int] | None, seed: int | None) -> list[int]:
    """The ring labelling a config describes: explicit, seeded shuffle, or 1..n."""
    if labels is not None:
        if n and len(labels) != n:
            raise GraphError(f"--labels carries {len(labels)} labels but --ring is {n}")
        return labels
    base = list(range(1, n + 1))
    if seed is not None:
        random.Random(seed).shuffle(base)
    return base


def _emit(report: dict, args) -> None:
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    _write_out(text, args)


def _write_out(text: str, args) -> None:
    sys.stdout.write(text)
    output = getattr(args, "output", None)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)


def _resolve_graph(args):
    """Build (graph, ring_or_none) from --graph or --ring/--labels/--seed flags."""
    if getattr(args, "graph", None):
        g = parse_graph_file(args.graph)
        arc = g.ring_arc()
        ring = RingSpec(tuple(g.label[v] for v in arc)) if arc else None
        return g, ring
    if not getattr(args, "ring", None):
        raise GraphError("either --graph or --ring is required")
    labels = ring_labels(args.ring, getattr(args, "labels", None), getattr(args, "seed", None))
    ring = RingSpec(tuple(labels))
    L = getattr(args, "L", None)
    return ring.to_graph(L), ring


def cmd_run(args) -> int:
    g, ring = _resolve_graph(args)
    config = ExperimentConfig.make(
        "run", ring=getattr(args, "ring", None), labels=getattr(args, "labels", None),
        seed=getattr(args, "seed", None), graph=getattr(args, "graph", None),
        L=g.L, alg=args.alg, T=args.T,
    )
    alg = ALGORITHMS[args.alg](args.T, g.L)
    result = execute(alg, g, args.T)
    domination = is_t_dominating(g, result.member_set, args.T)
    certificates = check_certificates(g, result, args.T)
    report = {
        "config": config.to_dict(),
        "n": g.n,
        "L": g.L,
        "algorithm": alg.name,
        "T": args.T,
        "rounds_used": result.rounds_used,
        "rounds_within_budget": result.rounds_used <= args.T,
        "members": sorted(result.member_labels(g)),
        "set_size": len(result.member_set),
        "domination": domination.as_dict(),
        "certificates": certificates.as_dict(),
    }
    ok = bool(domination) and bool(certificates)
    if args.alg == "choose-smallest":
        bound = g.n - args.T // 2
        report["size_bound"] = bound
        report["size_within_bound"] = len(result.member_set) <= bound
        ok = ok and report["size_within_bound"]
    _emit(report, args)
    return EXIT_OK if ok else EXIT_VERIFICATION


def cmd_verify(args) -> int:
    g, ring = _resolve_graph(args)
    config = ExperimentConfig.make(
        "verify", ring=getattr(args, "ring", None), labels=getattr(args, "labels", None),
        seed=getattr(args, "seed", None), graph=getattr(args, "graph", None),
        members=args.members, T=args.T,
    )
    members = []
    for lab in args.members:
        members.append(g.node_of_label(lab))
    verdicts = [is_t_dominating(g, members, args.T)]
    if ring is not None and ring.n >= 2 * args.T + 1:
        verdicts.append(window_check_ring(ring, set(args.members), args.T))
    report = {
        "config": config.to_dict(),
        "n": g.n,
        "T": args.T,
        "verdicts": [v.as_dict() for v in verdicts],
    }
    _emit(report, args)
    return EXIT_OK if all(v.ok for v in verdicts) else EXIT_VERIFICATION


def cmd_oracle(args) -> int:
    g, ring = _resolve_graph(args)
    config = ExperimentConfig.make(
        "oracle", ring=getattr(args, "ring", None), labels=getattr(args, "labels", None),
        seed=getattr(args, "seed", None), T=args.T,
    )
    minimum = min_dominating_size_oracle(g, args.T)
    report = {
        "config": config.to_dict(),
        "n": g.n,
        "T": args.T,
        "minimum": minimum,
    }
    ok = True
    if ring is not None and 2 * args.T + 1 <= g.n:
        formula = math.ceil(g.n / (2 * args.T + 1))
        report["ring_formula"] = formula
        report["matches_formula"] = minimum == formula
        ok = report["matches_formula"]
    _emit(report, args)
    return EXIT_OK if ok else EXIT_VERIFICATION


def cmd_adversary(args) -> int:
    config = ExperimentConfig.make(
        "adversary", n=args.n, T=args.T, lam=str(args.lam), alg=args.alg,
    )
    feas = feasibility(args.n, args.T, args.lam)
    if not feas.ok:
        raise InfeasibleParameters(feas.reason)
    alg = ALGORITHMS[args.alg](args.T, 2 * args.n)
    report_obj = run_adversary_experiment(alg, args.n, args.T, args.lam,
                                          keep_ring=args.include_ring)
    report = {
        "config": config.to_dict(),
        "feasibility": feas.as_dict(),
        **report_obj.as_dict(include_ring=args.include_ring),
    }
    _emit(report, args)
    return EXIT_OK if report_obj.bound_certified else EXIT_VERIFICATION


def cmd_colour(args) -> int:
    labels = ring_labels(args.ring, args.labels, args.seed)
    ring = RingSpec(tuple(labels))
    config = ExperimentConfig.make(
        "colour", ring=args.ring, labels=args.labels, seed=args.seed,
        x=str(args.x), beta=str(args.beta), alg=args.alg,
        T=args.T, T_prime=args.T_prime,
    )
    family = lambda t: ALGORITHMS[args.alg](t, ring.n)  # noqa: E731
    result = eight_colour_ring(family, ring, args.x, args.beta,
                               T=args.T, T_prime=args.T_prime)
    report = {"config": config.to_dict(), **result.as_dict()}
    contract_broken = False
    if not result.below_scale and not result.degenerate and not result.claim_violations:
        g = ring.to_graph()
        proper = is_proper_colouring(g, {v: result.colours[v] for v in g.nodes}, 8)
        report["proper_8_colouring"] = proper.as_dict()
        contract_broken = not proper.ok
    _emit(report, args)
    return EXIT_VERIFICATION if contract_broken else EXIT_OK


def cmd_sweep(args) -> int:
    a, b, step = args.n_range
    rows = []
    for n in range(a, b + 1, step):
        for T in args.T_values:
            rng = random.Random(f"{args.seed}:{n}:{T}")
            labels = list(range(1, n + 1))
            rng.shuffle(labels)
            g = RingSpec(tuple(labels)).to_graph()
            alg = ALGORITHMS[args.alg](T, g.L)
            result = execute(alg, g, T)
            size = len(result.member_set)
            bound = math.ceil(n / (2 * T + 1))
            ratio = Fraction(size * (2 * T + 1), n)
            rows.append({
                "n": n,
                "T": T,
                "algorithm": args.alg,
                "setSize": size,
                "bound": bound,
                "ratio": f"{float(ratio):.6f}",
                "seed": args.seed,
            })
    if args.format == "json":
        config = ExperimentConfig.make(
            "sweep", alg=args.alg, n_range=list(args.n_range),
            T_values=args.T_values, seed=args.seed,
        )
        _emit({"config": config.to_dict(), "rows": rows}, args)
        return EXIT_OK
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "T", "algorithm", "setSize", "bound", "ratio", "seed"])
    for row in rows:
        writer.writerow([row["n"], row["T"], row["algorithm"], row["setSize"],
                         row["bound"], row["ratio"], row["seed"]])
    _write_out(buf.getvalue(), args)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ringdom",
        description="LOCAL-model distance-domination experiments on labelled rings",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_graph_flags(p, with_file=True):
        p.add_argument("--ring", type=int, help="ring size (labels 1..n unless --labels/--seed)")
        p.add_argument("--labels", type=_csv_ints, help="explicit ring labels, comma separated")
        p.add_argument("--seed", type=int, help="seed for a reproducible label permutation")
        if with_file:
            p.add_argument("--graph", help="graph file (see README for the format)")
        p.add_argument("--output", help="also write the report to this file")

    p_run = sub.add_parser("run", help="execute an algorithm and verify the output")
    add_graph_flags(p_run)
    p_run.add_argument("--L", type=int, help="label-space bound (default max(n, labels))")
    p_run.add_argument("--alg", choices=sorted(ALGORITHMS), default="choose-smallest")
    p_run.add_argument("--T", type=int, required=True)
    p_run.set_defaults(func=cmd_run)

    p_verify = sub.add_parser("verify", help="check a member set against a graph")
    add_graph_flags(p_verify)
    p_verify.add_argument("--members", type=_csv_ints, required=True,
                          help="member labels, comma separated")
    p_verify.add_argument("--T", type=int, required=True)
    p_verify.set_defaults(func=cmd_verify)

    p_oracle = sub.add_parser("oracle", help="exact minimum size on a small ring")
    add_graph_flags(p_oracle, with_file=False)
    p_oracle.add_argument("--T", type=int, required=True)
    p_oracle.set_defaults(func=cmd_oracle)

    p_adv = sub.add_parser("adversary", help="composed-ring lower-bound experiment")
    p_adv.add_argument("--n", type=int, required=True)
    p_adv.add_argument("--T", type=int, required=True)
    p_adv.add_argument("--lambda", dest="lam", type=parse_fraction, required=True,
                       help="target factor as p/q, strictly below 3/2")
    p_adv.add_argument("--alg", choices=sorted(ALGORITHMS), default="choose-smallest")
    p_adv.add_argument("--include-ring", action="store_true",
                       help="embed the composed ring in the report")
    p_adv.add_argument("--output", help="also write the report to this file")
    p_adv.set_defaults(func=cmd_adversary)

    p_col = sub.add_parser("colour", help="dominating-set to 8-colouring reduction")
    p_col.add_argument("--ring", type=int, required=True)
    p_col.add_argument("--labels", type=_csv_ints)
    p_col.add_argument("--seed", type=int)
    p_col.add_argument("--x", type=parse_fraction, required=True,
                       help="size-fraction promise of the family, 0 < x < 1")
    p_col.add_argument("--beta", type=parse_fraction, default=Fraction(2, 3))
    p_col.add_argument("--alg", choices=sorted(ALGORITHMS), default="choose-smallest")
    p_col.add_argument("--T", type=int, help="budget override for desk-scale runs")
    p_col.add_argument("--T-prime", dest="T_prime", type=int)
    p_col.add_argument("--output", help="also write the report to this file")
    p_col.set_defaults(func=cmd_colour)

    p_sweep = sub.add_parser("sweep", help="grid of runs, CSV or JSON")
    p_sweep.add_argument("--alg", choices=sorted(ALGORITHMS), default="choose-smallest")
    p_sweep.add_argument("--n-range", dest="n_range", type=_range_spec, required=True,
                         help="a:b or a:b:step (inclusive)")
    p_sweep.add_argument("--T-values", dest="T_values", type=_csv_ints, required=True)
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--format", choices=["csv", "json"], default="csv")
    p_sweep.add_argument("--output", help="also write the table to this file")
    p_sweep.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GraphFormatError as exc:
        print(f"ringdom: malformed graph file: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InfeasibleParameters as exc:
        print(f"ringdom: infeasible parameters: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (GraphError, ValueError) as exc:
        print(f"ringdom: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
