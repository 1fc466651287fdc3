"""Command-line driver: parse JSON problem specs, run solvers, emit results.

Exit codes: 0 success, 1 malformed spec, 2 domain error, 3 precision
error, 4 iteration limit, 5 failed contraction check.  All randomness
flows from --seed, and JSON output uses sorted keys, so identical spec
and seed give byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass

from . import jsonio
from .contraction import verify_contraction
from .number import (DomainError, IterationLimitError, PrecisionError)
from .recurrence import solve_coupled, solve_recurrence
from .tree import backward_sweep, random_boundary, uniqueness_gap

EXIT_OK = 0
EXIT_SPEC = 1
EXIT_DOMAIN = 2
EXIT_PRECISION = 3
EXIT_ITERATIONS = 4
EXIT_VERIFY_FAILED = 5

DEFAULT_PRECISION = 60
DEFAULT_TARGET = 20
DEFAULT_MAX_ITER = 512
SAFETY_MARGIN = 4


@dataclass(frozen=True, slots=True)
class RunConfig:
    """Run-wide knobs shared by all subcommands."""

    precision: int = DEFAULT_PRECISION
    target_valuation: int = DEFAULT_TARGET
    max_iter: int = DEFAULT_MAX_ITER
    seed: int = 0
    fmt: str = "json"

    def __post_init__(self) -> None:
        if self.target_valuation + SAFETY_MARGIN > self.precision:
            raise jsonio.SpecError(
                "target", f"target {self.target_valuation} + safety margin "
                f"{SAFETY_MARGIN} exceeds precision {self.precision}")
        if self.max_iter < 1:
            raise jsonio.SpecError("max-iter", "must be >= 1")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="padicsolve",
        description="Exact p-adic contraction solvers for recurrence and "
                    "tree equations")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_target=True):
        p.add_argument("--precision", type=int, default=None,
                       help="working digit count (default 60)")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for all sampling (default 0)")
        p.add_argument("--format", dest="fmt", choices=("json", "csv"),
                       default="json")
        if with_target:
            p.add_argument("--target", type=int, default=None,
                           help="target valuation for certificates")
            p.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)

    p_solve = sub.add_parser("solve", help="solve a recurrence problem")
    p_solve.add_argument("spec_file")
    common(p_solve)

    p_coupled = sub.add_parser("coupled", help="solve a coupled triple system")
    p_coupled.add_argument("spec_file")
    common(p_coupled)

    p_tree = sub.add_parser("tree", help="backward-solve a tree problem")
    p_tree.add_argument("spec_file")
    p_tree.add_argument("--compare-boundary", default=None, metavar="SRC",
                        help="'random' or a JSON file with a second boundary")
    common(p_tree)

    p_verify = sub.add_parser("verify", help="sample-check a map's contraction")
    p_verify.add_argument("map_id")
    p_verify.add_argument("--params", default="{}",
                          help="JSON parameter object or a path to one")
    p_verify.add_argument("--prime", type=int, required=True)
    p_verify.add_argument("--samples", type=int, default=1000)
    p_verify.add_argument("--domain", default=None,
                          help="domain name for constant/identity maps")
    common(p_verify, with_target=False)

    p_eval = sub.add_parser("eval", help="evaluate a map once")
    p_eval.add_argument("spec_file")
    common(p_eval, with_target=False)
    return parser


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise jsonio.SpecError("spec_file", f"cannot open {path!r}")
    except json.JSONDecodeError as exc:
        raise jsonio.SpecError("spec_file", f"invalid JSON: {exc}")


def _config(args, meta=None) -> RunConfig:
    precision = args.precision
    if precision is None:
        precision = (meta or {}).get("precision") or DEFAULT_PRECISION
    target = getattr(args, "target", None)
    if target is None:
        target = (meta or {}).get("target") or DEFAULT_TARGET
    return RunConfig(precision=precision, target_valuation=target,
                     max_iter=getattr(args, "max_iter", DEFAULT_MAX_ITER),
                     seed=args.seed, fmt=args.fmt)


def _emit(text: str) -> None:
    sys.stdout.write(text)


def _cmd_solve(args) -> int:
    raw = _load_json(args.spec_file)
    if args.precision is not None:
        raw = {**raw, "precision": args.precision}
    rng = random.Random(args.seed)
    rec, initial, meta = jsonio.load_solve_spec(raw, DEFAULT_PRECISION, rng)
    config = _config(args, meta)
    cert = solve_recurrence(rec, initial, config.target_valuation,
                            max_iter=config.max_iter)
    if config.fmt == "csv":
        _emit(jsonio.trace_to_csv(cert))
    else:
        _emit(jsonio.dump_json(jsonio.certificate_to_json(cert)))
    return EXIT_OK


def _cmd_coupled(args) -> int:
    raw = _load_json(args.spec_file)
    if args.precision is not None:
        raw = {**raw, "precision": args.precision}
    rng = random.Random(args.seed)
    coupled, initial, meta = jsonio.load_coupled_spec(raw, DEFAULT_PRECISION, rng)
    config = _config(args, meta)
    certs = solve_coupled(coupled, initial, config.target_valuation,
                          max_iter=config.max_iter)
    if config.fmt == "csv":
        _emit(jsonio.trace_to_csv(certs[0]))
    else:
        payload = {name: jsonio.certificate_to_json(c)
                   for name, c in zip(("x", "y", "z"), certs)}
        _emit(jsonio.dump_json(payload))
    return EXIT_OK


def _cmd_tree(args) -> int:
    raw = _load_json(args.spec_file)
    if args.precision is not None:
        raw = {**raw, "precision": args.precision}
    rng = random.Random(args.seed)
    problem, meta = jsonio.load_tree_spec(raw, DEFAULT_PRECISION, rng)
    _config(args, meta)  # validates knobs even though no target is consumed
    solution = backward_sweep(problem)
    report = {
        "branching": problem.shape.branching,
        "depth": problem.shape.depth,
        "root_text": [c.text() for c in solution.root_value.components],
        "root_value": jsonio.element_to_json(solution.root_value),
        "levels": [
            {"level": d, "vertices": len(level),
             "digest": jsonio.level_digest([solution.values[v] for v in level])}
            for d, level in enumerate(solution.levels)
        ],
    }
    if args.compare_boundary is not None:
        if args.compare_boundary == "random":
            boundary2 = random_boundary(problem.shape, problem.domain,
                                        problem.prime, problem.digits, rng)
        else:
            raw2 = _load_json(args.compare_boundary)
            problem2, _ = jsonio.load_tree_spec({**raw, "boundary": raw2},
                                                DEFAULT_PRECISION, rng)
            boundary2 = problem2.boundary
        gap = uniqueness_gap(problem, boundary2)
        report["gap"] = {
            "root_gap_valuation": jsonio.encode_valuation(gap.root_gap_valuation),
            "bound": jsonio.encode_valuation(gap.bound),
            "per_level": [jsonio.encode_valuation(g) for g in gap.per_level],
        }
    _emit(jsonio.dump_json(report))
    return EXIT_OK


def _cmd_verify(args) -> int:
    params_text = args.params
    if params_text.strip().startswith("{"):
        try:
            params = json.loads(params_text)
        except json.JSONDecodeError as exc:
            raise jsonio.SpecError("params", f"invalid JSON: {exc}")
    else:
        params = _load_json(params_text)
    precision = args.precision or DEFAULT_PRECISION
    domain = (jsonio.domain_from_json(args.domain, "domain")
              if args.domain else None)
    f = jsonio.map_from_json({"id": args.map_id, "params": params},
                             args.prime, precision, "map", domain)
    report = verify_contraction(f, samples=args.samples, seed=args.seed)
    _emit(jsonio.dump_json({
        "map": f.label,
        "samples": report.samples,
        "min_observed_gap": jsonio.encode_valuation(report.min_observed_gap),
        "declared_exponent": jsonio.encode_valuation(report.declared_exponent),
        "range_ok": report.range_ok,
        "pass": report.passed,
    }))
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def _cmd_eval(args) -> int:
    raw = _load_json(args.spec_file)
    if args.precision is not None:
        raw = {**raw, "precision": args.precision}
    f, call_args, _ = jsonio.load_eval_spec(raw, DEFAULT_PRECISION)
    value = f(*call_args)
    _emit(jsonio.dump_json({
        "value": jsonio.element_to_json(value),
        "text": [c.text() for c in value.components],
    }))
    return EXIT_OK


_COMMANDS = {"solve": _cmd_solve, "coupled": _cmd_coupled, "tree": _cmd_tree,
             "verify": _cmd_verify, "eval": _cmd_eval}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except jsonio.SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except PrecisionError as exc:
        print(f"precision error: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except IterationLimitError as exc:
        print(f"iteration limit: {exc}", file=sys.stderr)
        return EXIT_ITERATIONS


if __name__ == "__main__":
    sys.exit(main())
