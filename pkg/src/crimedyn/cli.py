"""Command-line front end.

Exit codes: 0 success, 2 input validation, 3 mathematical inadmissibility,
4 numerical failure. Each invocation appends one JSON line to
``<out>/manifest.jsonl``.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import __version__, analysis, errata, experiments, plots, sensitivity
from ._io import dumps, write_text
from .errors import CrimeDynError, ParameterError
from .integrator import SolverConfig, integrate, seeded_random_initial_condition
from .model import ModelParams, StateVec, load_params

DEFAULT_OUT = "crimedyn-out"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParameterError(f"{self.prog}: {message}")


# -- argument parsing helpers ------------------------------------------------------


def _float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must lie in [0, 2^64)")
    return value


def _range(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"range must be lo:hi:n, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"range must be lo:hi:n, got {text!r}") from None
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi and n >= 2):
        raise argparse.ArgumentTypeError(f"range needs finite lo < hi and n >= 2, got {text!r}")
    return lo, hi, n


def _float_list(text: str) -> list[float]:
    try:
        values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _y0(text: str) -> StateVec:
    values = _float_list(text)
    if len(values) != 4:
        raise argparse.ArgumentTypeError("--y0 needs four comma-separated values S1,S2,C,R")
    return StateVec(*values)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--params", metavar="FILE", help="parameter file (key = value lines or JSON)")
    common.add_argument("--preset", metavar="NAME", help=f"shipped preset: {', '.join(experiments.PRESETS)}")
    common.add_argument("--out", metavar="DIR", default=DEFAULT_OUT, help=f"output directory (default {DEFAULT_OUT})")
    common.add_argument("--seed", type=_seed, default=0, help="seed for the random initial condition (default 0)")
    common.add_argument("--t-end", type=_float, default=experiments.DEFAULT_T_END, help="time horizon in years")
    common.add_argument("--rtol", type=_float, default=SolverConfig.rel_tol, help="relative tolerance")
    common.add_argument("--atol", type=_float, default=SolverConfig.abs_tol, help="absolute tolerance")
    common.add_argument("--output-interval", type=_float, default=SolverConfig.output_interval,
                        help="spacing of output samples in years")
    common.add_argument("--svg", action="store_true", help="also write an SVG plot (needs matplotlib)")

    parser = _Parser(prog="crimedyn", description="Imitation-driven crime model laboratory.")
    parser.add_argument("--version", action="version", version=f"crimedyn {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", parents=[common], help="thresholds, equilibria and stability")
    p.add_argument("params_file", nargs="?", help="parameter file (alternative to --params)")

    p = sub.add_parser("simulate", parents=[common], help="integrate from a seeded or given start")
    p.add_argument("--y0", type=_y0, help="initial state S1,S2,C,R (overrides --seed)")

    p = sub.add_parser("bifurcate", parents=[common], help="equilibrium branches along a parameter")
    p.add_argument("--vary", default="beta", help="parameter to vary (default beta)")
    p.add_argument("--range", type=_range, help="lo:hi:n grid (default 0.1..1.5 times beta*, 281 points)")

    p = sub.add_parser("contour", parents=[common], help="R0 over a sigma-gamma grid")
    p.add_argument("--sigma-range", type=_range, default=(0.10, 0.85, 50), help="lo:hi:n for sigma")
    p.add_argument("--gamma-range", type=_range, default=(0.03, 1.0, 50), help="lo:hi:n for gamma")

    p = sub.add_parser("sweep", parents=[common], help="imitation-coefficient sweep")
    p.add_argument("--alphas", type=_float_list, default=[1e-5, 1e-4, 2e-4], help="comma-separated alphas")
    p.add_argument("--y0", type=_y0, help="initial state S1,S2,C,R (overrides --seed)")

    sub.add_parser("sensitivity", parents=[common], help="sensitivity indices of R0")
    sub.add_parser("preset", parents=[common], help="analysis plus seeded simulation of a preset")
    sub.add_parser("errata", parents=[common], help="quoted versus recomputed values")
    return parser


# -- shared plumbing ---------------------------------------------------------------


class Run:
    """Collects what goes into the manifest line."""

    def __init__(self, args):
        self.args = args
        self.out = Path(args.out)
        self.outputs: list[str] = []
        self.warnings: list[str] = []
        self.params: ModelParams | None = None
        self.preset: str | None = None

    def write(self, name: str, text: str) -> None:
        self.outputs.append(str(write_text(self.out / name, text)))

    def config(self) -> SolverConfig:
        a = self.args
        return SolverConfig(rel_tol=a.rtol, abs_tol=a.atol, output_interval=a.output_interval)

    def resolve_params(self, required: bool = True) -> ModelParams | None:
        a = self.args
        path = a.params or getattr(a, "params_file", None)
        if path and a.preset:
            raise ParameterError("give either --params or --preset, not both")
        if path:
            self.params = load_params(path)
        elif a.preset:
            self.preset = a.preset
            self.params = experiments.get_preset(a.preset).params
        elif required:
            raise ParameterError("a parameter set is required: pass --params FILE or --preset NAME")
        return self.params

    def t_end(self) -> float:
        t = self.args.t_end
        if not t > 0:
            raise ParameterError(f"--t-end must be > 0, got {t!r}")
        return t

    def y0(self) -> StateVec:
        y0 = getattr(self.args, "y0", None)
        return y0 if y0 is not None else seeded_random_initial_condition(self.args.seed)

    def meta(self, kind: str, config=None, extra=None) -> dict:
        return experiments.metadata(
            kind, preset=self.preset, params=self.params, seed=self.args.seed, config=config,
            flags=self.warnings, extra=extra,
        )


def _preset_flags(run: Run) -> None:
    if run.preset:
        for c in experiments.preset_comparisons(experiments.get_preset(run.preset)):
            if c.status != "PASS":
                run.warnings.append(
                    f"{run.preset} {c.item} ({c.where}): reported {c.reported!r}, recomputed {c.recomputed:.10g}"
                )


def _comparison_lines(run: Run) -> list[str]:
    if not run.preset:
        return []
    lines = ["", "quoted values next to recomputed ones:"]
    for c in experiments.preset_comparisons(experiments.get_preset(run.preset)):
        lines.append(
            f"  {c.item} ({c.where}): quoted {c.reported!r}, recomputed {c.recomputed:.10g}  [{c.status}]"
        )
    return lines


# -- commands ----------------------------------------------------------------------


def cmd_analyze(run: Run) -> None:
    params = run.resolve_params()
    summary = analysis.analyze(params)
    _preset_flags(run)
    report = analysis.summary_text(summary) + "\n".join(_comparison_lines(run))
    report = report.rstrip("\n") + "\n"
    run.write("analysis.json", dumps(summary.to_dict()))
    run.write("analysis.txt", report)
    sys.stdout.write(report)


def cmd_simulate(run: Run) -> None:
    params = run.resolve_params()
    cfg = run.config()
    y0 = run.y0()
    traj = integrate(params, y0, run.t_end(), cfg)
    _preset_flags(run)
    extra = {
        "y0": list(y0),
        "t_end": run.t_end(),
        "steps_accepted": traj.steps_accepted,
        "steps_rejected": traj.steps_rejected,
        "min_step_used": traj.min_step_used,
        "final": list(traj.final),
    }
    svg = (lambda p: plots.trajectory_svg(traj, p)) if run.args.svg else None
    run.outputs += experiments.write_experiment(run.out, "trajectory", traj.to_csv(), run.meta("simulate", cfg, extra), svg)
    print("final state: " + ", ".join(f"{k}={v:.10g}" for k, v in zip(("S1", "S2", "C", "R"), traj.final)))
    print(f"steps accepted {traj.steps_accepted}, rejected {traj.steps_rejected}")


def cmd_bifurcate(run: Run) -> None:
    params = run.resolve_params()
    vary = run.args.vary
    if run.args.range is None:
        if vary != "beta":
            raise ParameterError("--range is required when --vary is not beta")
        bs = analysis.beta_star(params)
        lo, hi, n = 0.1 * bs, 1.5 * bs, 281
    else:
        lo, hi, n = run.args.range
    points = experiments.bifurcation_curve(params, (lo, hi), n, vary)
    failed = [p for p in points if p.error]
    if failed:
        run.warnings.append(f"{len(failed)} grid points failed; see the error column")
    _preset_flags(run)
    extra = {"vary": vary, "range": [lo, hi, n], "r0_fold": analysis.fold_r0(params) if vary == "beta" else None}
    svg = (lambda p: plots.curve_svg(points, p, vary)) if run.args.svg else None
    run.outputs += experiments.write_experiment(
        run.out, "bifurcation", experiments.curve_to_csv(points, vary), run.meta("bifurcate", extra=extra), svg
    )
    counts = [len(p.branches) for p in points]
    print(f"{n} points; branch counts seen: {sorted(set(counts))}")


def cmd_contour(run: Run) -> None:
    params = run.resolve_params()
    s_lo, s_hi, nx = run.args.sigma_range
    g_lo, g_hi, ny = run.args.gamma_range
    cells = experiments.contour_grid(params, (s_lo, s_hi), (g_lo, g_hi), nx, ny)
    bad = sum(not c.admissible for c in cells)
    if bad:
        run.warnings.append(f"{bad} inadmissible cells")
    _preset_flags(run)
    extra = {"sigma_range": [s_lo, s_hi, nx], "gamma_range": [g_lo, g_hi, ny]}
    svg = (lambda p: plots.contour_svg(cells, nx, ny, p)) if run.args.svg else None
    run.outputs += experiments.write_experiment(
        run.out, "contour", experiments.grid_to_csv(cells), run.meta("contour", extra=extra), svg
    )
    r0s = [c.r0 for c in cells if c.admissible]
    print(f"{len(cells)} cells; R0 range [{min(r0s):.6g}, {max(r0s):.6g}]")


def cmd_sweep(run: Run) -> None:
    params = run.resolve_params()
    cfg = run.config()
    y0 = run.y0()
    results = experiments.imitation_sweep(params, run.args.alphas, y0, run.t_end(), cfg)
    failures = [(a, r) for a, r in results if isinstance(r, Exception)]
    for a, exc in failures:
        run.warnings.append(f"alpha={a!r}: {exc}")
    _preset_flags(run)
    finals = {repr(a): (None if isinstance(r, Exception) else r.final.c) for a, r in results}
    extra = {"alphas": run.args.alphas, "y0": list(y0), "t_end": run.t_end(), "terminal_C": finals}
    svg = (lambda p: plots.sweep_svg(results, p)) if run.args.svg else None
    run.outputs += experiments.write_experiment(
        run.out, "sweep", experiments.sweep_to_csv(results), run.meta("sweep", cfg, extra), svg
    )
    for a, r in results:
        print(f"alpha={a:g}: " + (f"error: {r}" if isinstance(r, Exception) else f"terminal C = {r.final.c:.10g}"))
    if failures:
        raise failures[0][1]


def cmd_sensitivity(run: Run) -> None:
    params = run.resolve_params()
    printed = sensitivity.TABLE2 if params == experiments.TABLE4.params else {}
    rows = sensitivity.sensitivity_table(params, printed=printed)
    for line in sensitivity.errata_lines(rows):
        run.warnings.append("sensitivity " + line)
    run.write("sensitivity.csv", sensitivity.table_to_csv(rows))
    run.write("sensitivity.json", dumps(sensitivity.table_to_json(rows)))
    report = sensitivity.text_report(rows)
    run.write("sensitivity.txt", report)
    sys.stdout.write(report)


def cmd_preset(run: Run) -> None:
    if not run.args.preset:
        raise ParameterError("preset: --preset NAME is required")
    run.resolve_params()
    cfg = run.config()
    res = experiments.run_preset(run.args.preset, run.args.seed, run.t_end(), cfg)
    run.warnings += res.warnings
    summary = res.summary.to_dict()
    summary["preset"] = {
        "name": res.preset.name,
        "source": res.preset.source,
        "expected_r0": res.preset.expected_r0,
        "comparisons": [c.to_dict() for c in res.comparisons],
    }
    run.write("preset_summary.json", dumps(summary))
    extra = {"y0": list(res.trajectory.states[0]), "t_end": run.t_end(), "final": list(res.trajectory.final)}
    svg = (lambda p: plots.trajectory_svg(res.trajectory, p)) if run.args.svg else None
    run.outputs += experiments.write_experiment(
        run.out, "preset_trajectory", res.trajectory.to_csv(), run.meta("preset", cfg, extra), svg
    )
    text = analysis.summary_text(res.summary) + "\n".join(_comparison_lines(run)) + "\n"
    run.write("preset_report.txt", text)
    sys.stdout.write(text)


def cmd_errata(run: Run) -> None:
    items = errata.errata_items()
    text = errata.errata_text(items)
    run.write("errata.txt", text)
    run.write("errata.json", errata.errata_json(items))
    sys.stdout.write(text)


COMMANDS = {
    "analyze": cmd_analyze,
    "simulate": cmd_simulate,
    "bifurcate": cmd_bifurcate,
    "contour": cmd_contour,
    "sweep": cmd_sweep,
    "sensitivity": cmd_sensitivity,
    "preset": cmd_preset,
    "errata": cmd_errata,
}


def _out_from_argv(argv) -> str:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--out", default=DEFAULT_OUT)
    known, _ = pre.parse_known_args(argv)
    return known.out


def _append_manifest(out: str, entry: dict) -> None:
    path = Path(out)
    try:
        path.mkdir(parents=True, exist_ok=True)
        with open(path / "manifest.jsonl", "a", encoding="utf-8") as fh:
            fh.write(json.dumps(entry, sort_keys=True) + "\n")
    except OSError as exc:
        print(f"warning: could not write manifest: {exc}", file=sys.stderr)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if any(a in ("-h", "--help", "--version") for a in argv):
        build_parser().parse_args(argv)  # prints and exits 0
    run = None
    command = argv[0] if argv and not argv[0].startswith("-") else None
    status = 0
    error = None
    try:
        args = build_parser().parse_args(argv)
        run = Run(args)
        COMMANDS[args.command](run)
    except CrimeDynError as exc:
        status = exc.exit_code
        error = f"{type(exc).__name__}: {exc}"
        print(f"error: {exc}", file=sys.stderr)
    entry = {
        "command": command,
        "argv": argv,
        "inputs": None if run is None or run.params is None else run.params.as_dict(),
        "preset": None if run is None else run.preset,
        "seed": None if run is None else run.args.seed,
        "outputs": [] if run is None else run.outputs,
        "exit_status": status,
        "error": error,
        "warnings": [] if run is None else run.warnings,
        "version": __version__,
    }
    _append_manifest(run.args.out if run is not None else _out_from_argv(argv), entry)
    return status


if __name__ == "__main__":
    sys.exit(main())
