"""Command-line front end: problem ingestion, solving, verification suites,
and machine-readable JSON reports.

Exit codes
----------
0   success (solve converged / suite passed / probes passed)
1   I/O or validation error (malformed JSON, invalid space or regulariser)
2   infeasible constraints or solver failure
3   verification failure (axiom violation, solution-distance or
    decomposition tolerance exceeded)
4   probe counterexample / regulariser not admissible

Problem files are JSON documents
``{"format": 1, "space": {"dim": int, "p": float, "weights": [...]?},
"data": [{"x": [...], "y": float}, ...], "regulariser": {...}?}``;
missing weights default to 1 and the regulariser defaults to
``{"type": "power", "alpha": 1}``.  Reports carry a ``"format": 1`` field
and round-trip double precision.  The environment variable
``SIP_INTERP_SEED`` supplies the default seed.  All diagnostics go to
stderr; report JSON goes to stdout unless ``--output`` is given.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from sip_interp import __version__, oracle as oracle_mod, regularisers as reg_mod
from sip_interp.solver import (
    InfeasibleError,
    InterpolationProblem,
    LineSearchConfig,
    NotAdmissibleError,
    SolverConfig,
    SolverConvergenceError,
    solve_regularised,
    verify_representer,
)
from sip_interp.space import (
    SpaceConfig,
    axiom_suite,
    norm,
    orthogonal_decompose,
    sip,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_INFEASIBLE = 2
EXIT_VERIFICATION = 3
EXIT_COUNTEREXAMPLE = 4

DEFAULT_REGULARISER = {"type": "power", "alpha": 1}


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValueError(f"{path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(
            f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc


def _inline_or_file(text: str):
    """Accept either inline JSON (starts with '{' or '[') or a file path."""
    stripped = text.strip()
    if stripped.startswith("{") or stripped.startswith("["):
        try:
            return json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ValueError(
                f"inline JSON: line {exc.lineno} column {exc.colno}: {exc.msg}"
            ) from exc
    return _load_json(text)


def _check_format(doc: dict, what: str) -> None:
    fmt = doc.get("format", 1)
    if fmt != 1:
        raise ValueError(f"{what}: unsupported format {fmt!r} (expected 1)")


def _space_from_dict(d) -> SpaceConfig:
    if not isinstance(d, dict):
        raise ValueError("field 'space' must be an object")
    if "dim" not in d or "p" not in d:
        raise ValueError("field 'space' requires 'dim' and 'p'")
    return SpaceConfig(dim=d["dim"], p=d["p"], weights=d.get("weights"))


def _problem_from_dict(doc: dict) -> tuple[InterpolationProblem, reg_mod.Regulariser]:
    _check_format(doc, "problem file")
    if "space" not in doc:
        raise ValueError("problem file requires field 'space'")
    if "data" not in doc or not isinstance(doc["data"], list) or not doc["data"]:
        raise ValueError("problem file requires a non-empty 'data' array")
    space = _space_from_dict(doc["space"])
    points, targets = [], []
    for i, rec in enumerate(doc["data"]):
        if not isinstance(rec, dict) or "x" not in rec or "y" not in rec:
            raise ValueError(f"data[{i}] must be an object with fields 'x' and 'y'")
        points.append(space.vector(rec["x"]))
        targets.append(float(rec["y"]))
    problem = InterpolationProblem(space, points, targets)
    reg = reg_mod.from_description(doc.get("regulariser", DEFAULT_REGULARISER))
    return problem, reg


def _solver_config_from_dict(d: dict | None) -> SolverConfig:
    if d is None:
        return SolverConfig()
    if not isinstance(d, dict):
        raise ValueError("solver config must be a JSON object")
    ls = d.get("line_search", {})
    if not isinstance(ls, dict):
        raise ValueError("field 'line_search' must be an object")
    kwargs = {}
    for key in (
        "max_iterations",
        "gradient_tolerance",
        "feasibility_tolerance",
        "hessian_mode",
        "divergence_bound",
    ):
        if key in d:
            kwargs[key] = d[key]
    return SolverConfig(line_search=LineSearchConfig(**ls), **kwargs)


def _resolve_seed(explicit: int | None) -> int:
    if explicit is not None:
        return explicit
    env = os.environ.get("SIP_INTERP_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise ValueError(f"SIP_INTERP_SEED must be an integer, got {env!r}") from None


def _emit(report: dict, output: str | None) -> None:
    text = json.dumps(report, indent=2)
    if output is None:
        print(text)
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        _log(f"report written to {output}")


def _finite_or_none(x: float) -> float:
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r} in report")
    return float(x)


# -- subcommands ---------------------------------------------------------------


def cmd_solve(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args.seed)
    problem, reg = _problem_from_dict(_load_json(args.input))
    config = _solver_config_from_dict(
        _load_json(args.config) if args.config else None
    )
    start = time.perf_counter()
    try:
        sol = solve_regularised(problem, reg, config, probe_seed=seed)
    except NotAdmissibleError as exc:
        _log(f"error: {exc}")
        return EXIT_COUNTEREXAMPLE
    except InfeasibleError as exc:
        _log(f"error: {exc}")
        return EXIT_INFEASIBLE
    except SolverConvergenceError as exc:
        _log(f"error: solver did not converge: {exc}")
        return EXIT_INFEASIBLE
    wall = time.perf_counter() - start

    deviation = verify_representer(sol, problem)
    report = {
        "format": 1,
        "tool_version": __version__,
        "seed": seed,
        "space": {
            "dim": problem.space.dim,
            "p": problem.space.p,
            "weights": problem.space.weights.tolist(),
        },
        "regulariser": reg_mod.to_description(reg),
        "solution": sol.f.coords.tolist(),
        "coefficients": sol.coefficients.tolist(),
        "constraint_residual": _finite_or_none(sol.constraint_residual),
        "peaking_gap": _finite_or_none(sol.peaking_gap),
        "representer_deviation": _finite_or_none(deviation),
        "dual_objective": _finite_or_none(sol.dual_objective),
        "objective_value": _finite_or_none(sol.objective_value),
        "iterations": sol.iterations,
        "converged": sol.converged,
        "wall_time_s": wall,
    }
    if args.oracle_check:
        oracle_cfg = oracle_mod.OracleConfig(seed=seed)
        f_oracle = oracle_mod.solve_constrained_direct(problem, reg, oracle_cfg)
        dist = norm(f_oracle - sol.f)
        report["oracle_check"] = {
            "oracle_solution": f_oracle.coords.tolist(),
            "distance": _finite_or_none(dist),
            "relative_distance": _finite_or_none(dist / (1.0 + norm(sol.f))),
        }
    _emit(report, args.output)
    return EXIT_OK


def cmd_verify_axioms(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args.seed)
    for p in args.p_list:
        if not math.isfinite(p) or p <= 1.0:
            raise ValueError(f"--p-list entries must lie in (1, inf), got {p}")
    for d in args.dims:
        if d < 1:
            raise ValueError(f"--dims entries must be positive, got {d}")
    if args.samples < 1:
        raise ValueError(f"--samples must be positive, got {args.samples}")
    if args.jobs < 1:
        raise ValueError(f"--jobs must be positive, got {args.jobs}")

    report = axiom_suite(
        p_list=args.p_list,
        dims=args.dims,
        n_samples=args.samples,
        seed=seed,
        jobs=args.jobs,
    )
    doc = {
        "format": 1,
        "tool_version": __version__,
        "seed": seed,
        "p_list": list(args.p_list),
        "dims": list(args.dims),
        "samples_run": report.samples_run,
        "tolerance": report.tolerance,
        "cauchy_schwarz_tolerance": report.cauchy_schwarz_tolerance,
        "max_violations": report.max_violations,
        "verdict": "pass" if report.passed else "fail",
    }
    if not report.passed:
        doc["worst_witness"] = report.worst_witness
    print(json.dumps(doc, indent=2))
    for name, v in report.max_violations.items():
        _log(f"axiom {name}: max relative violation {v:.3e}")
    if not report.passed:
        _log("axiom violation detected; offending triples serialized in report")
        return EXIT_VERIFICATION
    return EXIT_OK


def cmd_probe_regulariser(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args.seed)
    if args.samples < 1:
        raise ValueError(f"--samples must be positive, got {args.samples}")
    desc = _inline_or_file(args.regulariser)
    reg = reg_mod.from_description(desc)
    space_doc = _inline_or_file(args.space)
    space = _space_from_dict(space_doc)

    tangential = reg_mod.tangential_monotonicity_probe(reg, space, args.samples, seed)
    norm_probe = reg_mod.norm_monotonicity_probe(reg, space, args.samples, seed)
    verdict = "pass" if tangential.passed and norm_probe.passed else "counterexample"
    doc = {
        "format": 1,
        "tool_version": __version__,
        "seed": seed,
        "space": {"dim": space.dim, "p": space.p, "weights": space.weights.tolist()},
        "regulariser": desc,
        "tangential": tangential.to_dict(),
        "norm_monotonicity": norm_probe.to_dict(),
        "verdict": verdict,
    }
    print(json.dumps(doc, indent=2))
    return EXIT_OK if verdict == "pass" else EXIT_COUNTEREXAMPLE


def cmd_compare_regularisers(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args.seed)
    if args.jobs < 1:
        raise ValueError(f"--jobs must be positive, got {args.jobs}")
    problem, _ = _problem_from_dict(_load_json(args.input))
    descs = _inline_or_file(args.regs)
    if not isinstance(descs, list) or not descs:
        raise ValueError("--regs must be a non-empty JSON list of descriptions")
    regs = [reg_mod.from_description(d) for d in descs]

    for reg in regs:
        if reg.is_radial:
            continue
        for probe in (
            reg_mod.tangential_monotonicity_probe,
            reg_mod.norm_monotonicity_probe,
        ):
            report = probe(reg, problem.space, args.probe_samples, seed)
            if not report.passed:
                _log(
                    f"regulariser {reg.label!r} failed the {report.probe} probe; "
                    f"witness: {report.witness}"
                )
                return EXIT_COUNTEREXAMPLE

    oracle_cfg = oracle_mod.OracleConfig(seed=seed)

    def solve_one(reg):
        return oracle_mod.solve_constrained_direct(problem, reg, oracle_cfg)

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            solutions = list(pool.map(solve_one, regs))
    else:
        solutions = [solve_one(reg) for reg in regs]

    k = len(regs)
    matrix = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            dist = norm(solutions[i] - solutions[j]) / (
                1.0 + max(norm(solutions[i]), norm(solutions[j]))
            )
            matrix[i, j] = matrix[j, i] = dist
    max_dist = float(matrix.max()) if k > 1 else 0.0
    verdict = "pass" if max_dist <= args.tolerance else "fail"
    doc = {
        "format": 1,
        "tool_version": __version__,
        "seed": seed,
        "regularisers": [reg.label for reg in regs],
        "solutions": [sol.coords.tolist() for sol in solutions],
        "distance_matrix": matrix.tolist(),
        "max_relative_distance": max_dist,
        "tolerance": args.tolerance,
        "verdict": verdict,
    }
    print(json.dumps(doc, indent=2))
    return EXIT_OK if verdict == "pass" else EXIT_VERIFICATION


def cmd_decompose(args: argparse.Namespace) -> int:
    doc = _load_json(args.input)
    _check_format(doc, "decompose input")
    for field in ("space", "x", "basis"):
        if field not in doc:
            raise ValueError(f"decompose input requires field {field!r}")
    space = _space_from_dict(doc["space"])
    x = space.vector(doc["x"])
    basis_list = doc["basis"]
    if not isinstance(basis_list, list) or not basis_list:
        raise ValueError("field 'basis' must be a non-empty list of vectors")
    basis = [space.vector(row) for row in basis_list]

    x0, x_perp = orthogonal_decompose(x, basis)
    residuals = [abs(sip(u, x_perp)) for u in basis]
    verdict = "pass" if max(residuals) <= args.tolerance else "fail"
    out = {
        "format": 1,
        "tool_version": __version__,
        "x0": x0.coords.tolist(),
        "x_perp": x_perp.coords.tolist(),
        "sip_residuals": residuals,
        "tolerance": args.tolerance,
        "verdict": verdict,
    }
    print(json.dumps(out, indent=2))
    return EXIT_OK if verdict == "pass" else EXIT_VERIFICATION


# -- argument parsing ----------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sip-interp",
        description="Regularised interpolation on weighted l^p spaces with "
        "built-in numerical verification.",
    )
    parser.add_argument("--version", action="version", version=f"sip-interp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve a problem file and emit a report")
    p_solve.add_argument("input", help="path to a problem JSON file")
    p_solve.add_argument("--config", help="path to a solver-config JSON file")
    p_solve.add_argument("--output", help="write the report here instead of stdout")
    p_solve.add_argument(
        "--oracle-check",
        action="store_true",
        help="also run the penalty oracle and record the discrepancy",
    )
    p_solve.add_argument("--seed", type=int, default=None)
    p_solve.set_defaults(func=cmd_solve)

    p_axioms = sub.add_parser("verify-axioms", help="run the semi-inner-product axiom suite")
    p_axioms.add_argument("--p-list", type=float, nargs="+", default=[1.2, 1.5, 2.0, 3.0, 4.0, 7.0])
    p_axioms.add_argument("--dims", type=int, nargs="+", default=[1, 2, 3, 5, 10])
    p_axioms.add_argument("--samples", type=int, default=10_000)
    p_axioms.add_argument("--seed", type=int, default=None)
    p_axioms.add_argument("--jobs", type=int, default=1)
    p_axioms.set_defaults(func=cmd_verify_axioms)

    p_probe = sub.add_parser(
        "probe-regulariser", help="run both admissibility probes on a regulariser"
    )
    p_probe.add_argument(
        "regulariser", help="regulariser description: inline JSON or a file path"
    )
    p_probe.add_argument(
        "--space",
        default='{"dim": 2, "p": 3.0}',
        help="space description: inline JSON or a file path",
    )
    p_probe.add_argument("--samples", type=int, default=10_000)
    p_probe.add_argument("--seed", type=int, default=None)
    p_probe.set_defaults(func=cmd_probe_regulariser)

    p_cmp = sub.add_parser(
        "compare-regularisers",
        help="oracle-solve a problem under several regularisers and compare",
    )
    p_cmp.add_argument("input", help="path to a problem JSON file")
    p_cmp.add_argument(
        "--regs",
        required=True,
        help="JSON list of regulariser descriptions: inline or a file path",
    )
    p_cmp.add_argument("--tolerance", type=float, default=1e-4)
    p_cmp.add_argument("--probe-samples", type=int, default=2000)
    p_cmp.add_argument("--seed", type=int, default=None)
    p_cmp.add_argument("--jobs", type=int, default=1)
    p_cmp.set_defaults(func=cmd_compare_regularisers)

    p_dec = sub.add_parser(
        "decompose", help="orthogonally decompose x against a subspace basis"
    )
    p_dec.add_argument("input", help='path to a JSON file with "space", "x", "basis"')
    p_dec.add_argument("--tolerance", type=float, default=1e-8)
    p_dec.set_defaults(func=cmd_decompose)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NotAdmissibleError as exc:
        _log(f"error: {exc}")
        return EXIT_COUNTEREXAMPLE
    except (InfeasibleError, oracle_mod.OracleInfeasibleError) as exc:
        _log(f"error: {exc}")
        return EXIT_INFEASIBLE
    except SolverConvergenceError as exc:
        _log(f"error: {exc}")
        return EXIT_INFEASIBLE
    except (ValueError, OSError) as exc:
        _log(f"error: {exc}")
        return EXIT_VALIDATION


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
