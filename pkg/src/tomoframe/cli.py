"""Command-line front end.

Subcommands:
    run           execute a scenario: build the quorum, take exact or
                  sampled statistics, reconstruct, verify the truncation
                  optimality conditions, and write a report
    quorum-check  print completeness, conditioning, and design diagnostics
    sample-sweep  reconstruction error versus shot count, as CSV

Reports are deterministic: rerunning the same scenario with the same seed
produces byte-identical files (timing is printed to stdout only). Next to
each delimited report the matching figure is rendered as PNG unless
--no-plot is given. Relative output paths can be redirected with the
TOMOFRAME_REPORT_DIR environment variable.

Exit codes: 0 success, 2 scenario/validation error, 3 numerical failure.
"""

import argparse
import csv
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (
    CompletenessError,
    ConditioningError,
    DataError,
    DesignError,
    DimensionError,
    FeasibilityError,
    RangeError,
    ResourceError,
    ScenarioError,
    SpanError,
    StateError,
)
from .opspace import OperatorBasis, build_dual_frame, operator_expectations
from .phase import (
    PhaseDistribution,
    export_distribution_csv,
    phase_diagonal_reconstruct,
)
from .plotting import (
    save_distribution_figure,
    save_matrix_figure,
    save_quorum_figure,
    save_sweep_figure,
)
from .qudit import _design_residuals, qudit_quorum_gram, reconstruct_from_probabilities
from .report import build_report
from .sampling import error_scaling_sweep, export_sweep_csv, simulate_binary_outcomes
from .scenario import build_scenario, load_scenario, matrix_to_pairs
from .sdp import TruncationProblem, optimality_diagnostics
from .spin import export_directions_csv, quorum_compatibility_report, spin_reconstruct

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

VALIDATION_ERRORS = (
    ScenarioError,
    DesignError,
    DataError,
    DimensionError,
    RangeError,
    StateError,
    SpanError,
    ResourceError,
)
NUMERICAL_ERRORS = (ConditioningError, CompletenessError, FeasibilityError)

# strict mode gates exact-data reconstructions on these residuals
PROFILES = {"default": None, "strict": {"trace_atol": 1e-8, "min_eig_atol": 1e-8}}


def _projector_stack(scenario):
    if scenario.kind == "phase":
        return scenario.quorum.projectors()
    return scenario.quorum.projectors


def _exact_probabilities(scenario):
    return operator_expectations(_projector_stack(scenario), scenario.state)


def _reconstruct(scenario, frequencies):
    """Returns (report, extras, distribution-or-None)."""
    if scenario.kind == "phase":
        basis = scenario.quorum
        dist = PhaseDistribution(
            values=np.asarray(frequencies) * basis.dim / (2.0 * np.pi),
            thetas=basis.thetas,
        )
        matrix, residual = phase_diagonal_reconstruct(dist, basis, rho=scenario.state)
        report = build_report(
            probabilities=frequencies,
            matrix=matrix,
            condition_number=1.0,
            reference=scenario.state,
        )
        return report, {"dephasing_residual": residual}, dist
    if scenario.kind == "spin":
        report = spin_reconstruct(scenario.quorum, frequencies, reference=scenario.state)
        return report, {}, None
    report = reconstruct_from_probabilities(
        scenario.quorum, frequencies, reference=scenario.state
    )
    return report, {}, None


def _truncation_frame(scenario):
    if scenario.kind == "phase":
        return build_dual_frame(OperatorBasis(scenario.quorum.projectors()))
    return scenario.quorum.dual_frame()


def _pyify(obj):
    if isinstance(obj, dict):
        return {str(k): _pyify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_pyify(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_pyify(v) for v in obj.tolist()]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def _flat_items(obj, prefix=""):
    if isinstance(obj, dict):
        for key in sorted(obj):
            yield from _flat_items(obj[key], f"{prefix}{key}." if prefix or True else key)
    elif isinstance(obj, list):
        for i, value in enumerate(obj):
            yield from _flat_items(value, f"{prefix}{i}.")
    else:
        yield prefix[:-1], obj


def _format_cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_report(doc, path, fmt):
    doc = _pyify(doc)
    if fmt == "json":
        with open(path, "w") as fh:
            fh.write(json.dumps(doc, indent=2, sort_keys=True))
            fh.write("\n")
    else:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["key", "value"])
            for key, value in _flat_items(doc):
                writer.writerow([key, _format_cell(value)])


def _resolve_out(path):
    # TOMOFRAME_REPORT_DIR redirects relative output paths
    path = Path(path)
    base = os.environ.get("TOMOFRAME_REPORT_DIR")
    if base and not path.is_absolute():
        return Path(base) / path
    return path


def _output_target(args, scenario, default_suffix, default_format="json"):
    fmt = args.format or scenario.output_format or default_format
    path = args.out or scenario.output_path
    if path is None:
        stem = Path(args.scenario).stem
        path = f"{stem}{default_suffix}.{fmt}"
    return _resolve_out(path), fmt


def _cmd_run(args):
    start = time.perf_counter()
    scenario = build_scenario(load_scenario(args.scenario), seed_override=args.seed)
    exact = scenario.plan is None
    p_exact = _exact_probabilities(scenario)
    sampling_doc = None
    if exact:
        used = p_exact
    else:
        sampled = simulate_binary_outcomes(np.clip(p_exact, 0.0, 1.0), scenario.plan)
        used = sampled.frequencies
        sampling_doc = {
            "shots_per_setting": scenario.plan.shots_per_setting,
            "seed": scenario.plan.seed,
            "counts": [int(c) for c in sampled.counts],
        }
    report, extras, dist = _reconstruct(scenario, used)
    diag = optimality_diagnostics(
        TruncationProblem(scenario.state, _truncation_frame(scenario))
    )
    doc = {
        "library_version": __version__,
        "kind": scenario.kind,
        "scenario": scenario.raw,
        "scheme": scenario.scheme,
        "seed": scenario.plan.seed if scenario.plan else scenario.seed,
        "sampling": sampling_doc,
        "exact_probabilities": [float(p) for p in p_exact],
        "probabilities": [float(p) for p in used],
        "matrix": matrix_to_pairs(report.matrix),
        "trace": report.trace,
        "min_eigenvalue": report.min_eigenvalue,
        "condition_number": report.condition_number,
        "fidelity": report.fidelity,
        "trace_distance": report.trace_distance,
        "sdp": {
            "feasibility_margin": diag.feasibility_margin,
            "duality_gap": diag.duality_gap,
            "slackness_residual": diag.slackness_residual,
        },
        **extras,
    }
    out_path, fmt = _output_target(args, scenario, "-report")
    write_report(doc, out_path, fmt)
    print(f"report: {out_path}")
    if not args.no_plot:
        figure_path = out_path.with_suffix(".png")
        save_matrix_figure(
            report.matrix, figure_path, title=f"{scenario.kind} reconstruction"
        )
        print(f"figure: {figure_path}")
        if dist is not None:
            dist_csv = out_path.with_name(out_path.stem + "-distribution.csv")
            export_distribution_csv(dist, dist_csv)
            dist_png = dist_csv.with_suffix(".png")
            save_distribution_figure(dist.thetas, dist.values, dist_png)
            print(f"distribution: {dist_csv}")
            print(f"figure: {dist_png}")
    print(f"trace: {report.trace!r}")
    print(f"min_eigenvalue: {report.min_eigenvalue!r}")
    if report.trace_distance is not None:
        print(f"trace_distance: {report.trace_distance!r}")
    print(
        "sdp: feasibility_margin=%r duality_gap=%r slackness_residual=%r"
        % (diag.feasibility_margin, diag.duality_gap, diag.slackness_residual)
    )
    print(f"elapsed_seconds: {time.perf_counter() - start:.3f}")
    profile = PROFILES[args.tolerance_profile]
    if profile is not None and exact:
        if abs(report.trace - 1.0) > profile["trace_atol"]:
            print(
                f"strict profile: trace {report.trace!r} deviates from 1 "
                f"beyond {profile['trace_atol']:.0e}",
                file=sys.stderr,
            )
            return EXIT_NUMERICAL
        if report.min_eigenvalue < -profile["min_eig_atol"]:
            print(
                f"strict profile: min eigenvalue {report.min_eigenvalue!r} below "
                f"-{profile['min_eig_atol']:.0e}",
                file=sys.stderr,
            )
            return EXIT_NUMERICAL
    return EXIT_OK


def _frame_bounds(eigenvalues):
    w = np.asarray(eigenvalues, dtype=float)
    kept = w[w > 1e-12 * max(float(w[-1]), 0.0)]
    if kept.size == 0:
        return None
    return float(kept[0]), float(kept[-1])


def _cmd_quorum_check(args):
    scenario = build_scenario(
        load_scenario(args.scenario), seed_override=args.seed, require_state=False
    )
    quorum = scenario.quorum
    kind = scenario.kind
    print(f"kind: {kind}")
    if kind == "phase":
        frame = build_dual_frame(OperatorBasis(quorum.projectors()))
        eigenvalues = frame.gram.eigenvalues
        rank = frame.gram.rank
        total = quorum.dim**2
        print(f"settings: {quorum.dim}")
        print(f"completeness rank: {rank} of {total} (complete: {rank == total})")
        print(f"gram condition number: {frame.gram.condition_number!r}")
        directions = None
    else:
        eigenvalues = quorum.gram_eigenvalues
        total = quorum.dim**2
        print(f"settings: {quorum.k}")
        print(
            f"completeness rank: {quorum.rank} of {total} "
            f"(complete: {quorum.complete})"
        )
        if not quorum.complete:
            print("warning: quorum is informationally incomplete")
        print(f"gram condition number: {quorum.condition_number!r}")
        directions = quorum.directions
    bounds = _frame_bounds(eigenvalues)
    if bounds:
        print(f"frame bounds: A={bounds[0]!r} B={bounds[1]!r}")
    if kind == "qubit":
        first, second = _design_residuals(quorum.directions)
        print(f"design residuals: first moment {first:.3e}, second moment {second:.3e}")
    if kind in ("qubit", "qudit") and quorum.complete:
        gram_report = qudit_quorum_gram(quorum)
        print(f"design gram-form residual: {gram_report.gram_residual:.3e}")
        print(f"closed-form dual mismatch: {gram_report.dual_mismatch:.3e}")
    if kind == "spin":
        summary = quorum_compatibility_report(quorum)
        print(
            f"commutator norms: min {summary.min_norm:.6e} max {summary.max_norm:.6e} "
            f"degenerate pairs: {len(summary.degenerate_pairs)}"
        )
        print(f"jitter attempts: {quorum.jitter_attempts}")
        if directions is not None and directions.ndim == 3:
            directions = None
    if args.out:
        out_path = _resolve_out(args.out)
        if kind == "spin":
            export_directions_csv(quorum, out_path)
        else:
            with open(out_path, "w", newline="") as fh:
                writer = csv.writer(fh)
                if directions is not None and directions.ndim == 2:
                    writer.writerow(
                        ["index"] + [f"n{j}" for j in range(directions.shape[1])]
                    )
                    for i, row in enumerate(directions):
                        writer.writerow([i] + [repr(float(x)) for x in row])
                else:
                    writer.writerow(["index", "gram_eigenvalue"])
                    for i, w in enumerate(eigenvalues):
                        writer.writerow([i, repr(float(w))])
        print(f"directions: {out_path}")
        if not args.no_plot:
            figure_path = out_path.with_suffix(".png")
            plot_dirs = quorum.directions if kind == "spin" else directions
            if plot_dirs is not None and plot_dirs.ndim != 2:
                plot_dirs = None
            save_quorum_figure(
                eigenvalues, figure_path, directions=plot_dirs, title=f"{kind} quorum"
            )
            print(f"figure: {figure_path}")
    return EXIT_OK


def _cmd_sample_sweep(args):
    start = time.perf_counter()
    scenario = build_scenario(load_scenario(args.scenario), seed_override=args.seed)
    shots = [int(x) for x in args.shots.split(",") if x.strip()]
    seed = args.seed
    if seed is None:
        seed = scenario.plan.seed if scenario.plan else 0
    p_exact = np.clip(_exact_probabilities(scenario), 0.0, 1.0)
    quorum = scenario.quorum
    if scenario.kind == "phase":
        def rebuild(freqs):
            dist = PhaseDistribution(
                values=np.asarray(freqs) * quorum.dim / (2.0 * np.pi),
                thetas=quorum.thetas,
            )
            return phase_diagonal_reconstruct(dist, quorum).matrix
    elif scenario.kind == "spin":
        def rebuild(freqs):
            return spin_reconstruct(quorum, freqs).matrix
    else:
        def rebuild(freqs):
            return reconstruct_from_probabilities(quorum, freqs).matrix
    result = error_scaling_sweep(
        rebuild, scenario.state, p_exact, shots, trials=args.trials, seed=seed
    )
    out_path = _resolve_out(args.out if args.out else f"{Path(args.scenario).stem}-sweep.csv")
    export_sweep_csv(result, out_path)
    print(f"sweep: {out_path}")
    if not args.no_plot:
        figure_path = out_path.with_suffix(".png")
        save_sweep_figure(
            result.rows, result.slope, figure_path, title=f"{scenario.kind} error scaling"
        )
        print(f"figure: {figure_path}")
    for row in result.rows:
        print(
            f"N={row.shots}: mean={row.mean_trace_distance!r} "
            f"std={row.std_trace_distance!r}"
        )
    print(f"slope: {'' if result.slope is None else repr(result.slope)}")
    print(f"elapsed_seconds: {time.perf_counter() - start:.3f}")
    return EXIT_OK


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="tomoframe",
        description="Finite quantum state tomography with projector quorums.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="override the sampling seed")
    common.add_argument("--out", default=None, help="output path")
    common.add_argument(
        "--format", choices=("json", "csv"), default=None, help="report format"
    )
    common.add_argument(
        "--tolerance-profile",
        choices=tuple(PROFILES),
        default="default",
        help="strictness of the post-run quality gates",
    )
    common.add_argument("--no-plot", action="store_true", help="skip figure rendering")
    sub = parser.add_subparsers(dest="command", required=True)
    run_parser = sub.add_parser("run", parents=[common], help="execute a scenario")
    run_parser.add_argument("scenario", help="path to the scenario JSON file")
    run_parser.set_defaults(func=_cmd_run)
    check_parser = sub.add_parser(
        "quorum-check", parents=[common], help="print quorum diagnostics"
    )
    check_parser.add_argument("scenario", help="path to the scenario JSON file")
    check_parser.set_defaults(func=_cmd_quorum_check)
    sweep_parser = sub.add_parser(
        "sample-sweep", parents=[common], help="error scaling versus shot count"
    )
    sweep_parser.add_argument("scenario", help="path to the scenario JSON file")
    sweep_parser.add_argument(
        "--shots",
        default="100,1000,10000",
        help="comma-separated ascending shot counts",
    )
    sweep_parser.add_argument("--trials", type=int, default=20)
    sweep_parser.set_defaults(func=_cmd_sample_sweep)
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except VALIDATION_ERRORS as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    except NUMERICAL_ERRORS as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
