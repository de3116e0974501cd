"""Command-line entry points: evaluate, run, urdf, report.

Exit codes: 0 ok, 1 malformed input, 2 runtime failure. All commands are
deterministic given their inputs (and an offline backend where one is used).
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .evaluation import evaluate
from .experiment import ExperimentError, load_experiment, load_targets
from .ledger import (
    LedgerError,
    final_front_rows,
    format_hv,
    read_curve_csv,
    read_ledger,
    recompute_curve,
    write_aggregate_csv,
    write_run_artifacts,
)
from .llm import BackendError
from .orchestrator import RunMode, aggregate_runs, run
from .pareto import DEFAULT_REF_POINT
from .space import DesignParams, SpaceConfig, from_vector, make_params, validate
from .urdf import emit_urdf

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_RUNTIME = 2


class InputError(ValueError):
    pass


def _load_params(args) -> DesignParams:
    if args.vector is not None:
        tokens = args.vector.replace(",", " ").split()
        try:
            values = [float(t) for t in tokens]
        except ValueError as exc:
            raise InputError(f"vector: {exc}") from exc
        if len(values) < 5 or (len(values) - 3) % 2 != 0:
            raise InputError(
                f"vector length {len(values)} is not 2D+3 for any joint count D >= 1"
            )
        d = (len(values) - 3) // 2
        try:
            return from_vector(np.array(values), SpaceConfig(n_joints=d))
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    try:
        raw = json.loads(Path(args.params).read_text(encoding="utf-8"))
        return make_params(raw["origin"], raw["joints"], raw["lengths"])
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"params file: {exc}") from exc


def _require_valid(params: DesignParams) -> None:
    violations = validate(params, SpaceConfig(n_joints=params.n_joints))
    if violations:
        raise InputError("; ".join(violations))


def cmd_evaluate(args) -> int:
    params = _load_params(args)
    _require_valid(params)
    targets = load_targets(args.targets)
    report = evaluate(params, targets, alpha=args.alpha)
    out = {
        "targets": targets.name,
        "e_pos": report.objectives.e_pos,
        "e_torque": report.objectives.e_torque,
        "per_target": [
            {
                "target": list(o.target),
                "reached": list(o.reached),
                "torque": list(o.torque),
                "e_pos": o.e_pos,
                "e_torque": o.e_torque,
                "converged": o.converged,
                "iterations": o.iterations,
            }
            for o in report.per_target
        ],
    }
    print(json.dumps(out, indent=2))
    return EXIT_OK


def cmd_urdf(args) -> int:
    params = _load_params(args)
    _require_valid(params)
    text = emit_urdf(params)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _apply_overrides(spec, args):
    base = spec.base
    if args.mode:
        base = replace(base, mode=RunMode(args.mode))
    if args.n_step:
        base = replace(base, n_step=args.n_step)
    if args.backend == "mock" and base.backend.kind == "http":
        base = replace(base, backend=replace(base.backend, kind="mock-heuristic"))
    if args.backend == "http":
        if not (base.backend.base_url and base.backend.model):
            raise InputError("--backend http needs base_url and model in the experiment file")
        base = replace(base, backend=replace(base.backend, kind="http"))
    seeds = tuple(args.seed) if args.seed else spec.seeds
    out_dir = Path(args.out) if args.out else spec.out_dir
    return replace(spec, base=base, seeds=seeds, out_dir=out_dir)


def cmd_run(args) -> int:
    try:
        spec = load_experiment(args.experiment)
    except ExperimentError as exc:
        raise InputError(str(exc)) from exc
    spec = _apply_overrides(spec, args)

    if spec.base.mode.uses_llm and spec.base.backend.kind == "http":
        import os

        if not os.environ.get(spec.base.backend.token_env, ""):
            print(
                f"error: live backend requires a token in ${spec.base.backend.token_env}",
                file=sys.stderr,
            )
            return EXIT_RUNTIME

    spec.out_dir.mkdir(parents=True, exist_ok=True)
    results = []
    for config in spec.configs():
        result = run(config)
        write_run_artifacts(spec.out_dir / f"seed_{config.seed}", result)
        results.append(result)

    agg = aggregate_runs(results)
    write_aggregate_csv(spec.out_dir / "hv_aggregate.csv", agg)
    summary = {
        "experiment": spec.name,
        "mode": spec.base.mode.value,
        "seeds": list(agg.seeds),
        "final_hv_per_seed": {str(s): v for s, v in zip(agg.seeds, agg.final_per_seed)},
        "final_hv_mean": float(np.mean(agg.final_per_seed)),
        "final_hv_std": float(np.std(agg.final_per_seed)),
        "mean_hv_over_iterations": agg.mean_hv,
        "mean_std_over_iterations": agg.mean_std,
    }
    (spec.out_dir / "summary.json").write_text(
        json.dumps(summary, indent=2) + "\n", encoding="utf-8"
    )
    print(json.dumps(summary, indent=2))
    return EXIT_OK


def cmd_report(args) -> int:
    ref = tuple(args.ref) if args.ref else DEFAULT_REF_POINT
    if len(ref) != 2:
        raise InputError("--ref needs exactly two values")

    curves = []
    fronts = []
    for path in map(Path, args.ledgers):
        try:
            rows = read_ledger(path)
        except OSError as exc:
            raise InputError(f"{path}: {exc}") from exc
        curve = recompute_curve(rows, ref)
        stored = path.parent / "hv_curve.csv"
        if stored.exists():
            stored_curve = read_curve_csv(stored)
            if len(stored_curve) != len(curve) or not (stored_curve == curve).all():
                print(f"error: recomputed curve disagrees with {stored}", file=sys.stderr)
                return EXIT_RUNTIME
        curves.append(curve)
        fronts.append((path, final_front_rows(rows)))

    lengths = {len(c) for c in curves}
    if len(lengths) != 1:
        raise InputError(f"ledgers have mismatched iteration counts: {sorted(lengths)}")
    stacked = np.stack(curves)
    mean = stacked.mean(axis=0)
    std = stacked.std(axis=0)

    print("iteration,mean,std")
    for t, (m, s) in enumerate(zip(mean, std)):
        print(f"{t + 1},{format_hv(m)},{format_hv(s)}")
    for path, front in fronts:
        print(f"# final front: {path}")
        print("id,source,e_pos,e_torque")
        for row in front:
            print(f"{row.id},{row.source},{format_hv(row.objectives.e_pos)},{format_hv(row.objectives.e_torque)}")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    """Usage mistakes are input errors: exit 1, not argparse's default 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="armdesign", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_params_args(p):
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--params", help="JSON file with origin/joints/lengths")
        group.add_argument("--vector", help="flat 2D+3 design vector, comma separated")

    p_eval = sub.add_parser("evaluate", help="score a design against a target set")
    add_params_args(p_eval)
    p_eval.add_argument("--targets", required=True, help="targets JSON file")
    p_eval.add_argument("--alpha", type=float, default=40.0)
    p_eval.set_defaults(func=cmd_evaluate)

    p_urdf = sub.add_parser("urdf", help="emit the URDF for a design")
    add_params_args(p_urdf)
    p_urdf.add_argument("--out", help="output path (stdout if omitted)")
    p_urdf.set_defaults(func=cmd_urdf)

    p_run = sub.add_parser("run", help="execute an experiment file")
    p_run.add_argument("--experiment", required=True)
    p_run.add_argument("--seed", type=int, nargs="+", help="override the seed list")
    p_run.add_argument("--mode", choices=[m.value for m in RunMode])
    p_run.add_argument("--n-step", type=int, dest="n_step")
    p_run.add_argument("--backend", choices=["mock", "http"])
    p_run.add_argument("--out", help="override the output directory")
    p_run.set_defaults(func=cmd_run)

    p_rep = sub.add_parser("report", help="recompute hv curves and fronts from ledgers")
    p_rep.add_argument("ledgers", nargs="+")
    p_rep.add_argument("--ref", type=float, nargs=2, metavar=("E_POS", "E_TORQUE"))
    p_rep.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ExperimentError, LedgerError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BackendError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
