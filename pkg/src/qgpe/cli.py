"""Command-line experiment runner (installed as ``solver``).

    solver run config.json [config2.json ...] [--output-dir DIR] [--jobs N] [--seed S]
    solver newton --n 7 --kappa 1.0 [--output-dir DIR]
    solver full|dd|classical-dd|dla|variance|compare [flags...]

Each mode writes a ``<mode>.json`` summary into its output directory;
training modes also write ``<mode>_trace.csv`` plus log-scale SVG plots.
Diagnostics go to stderr (verbosity via ``SOLVER_LOG`` in error/info/debug),
results never do.  Exit codes: 0 ok, 2 invalid configuration, 3 solver
failure, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .circuit import AnsatzSpec
from .config import (
    CONVERGE,
    ExperimentConfig,
    budget_match,
    config_from_dict,
    config_to_dict,
    parse_config,
)
from .domain_decomp import DdSchedule, build_layout, run_classical_dd, run_dd
from .dla import ansatz_generators, lie_closure, sample_cost_variance, subdomain_dla_ratio
from .exceptions import ConfigurationError, QgpeError
from .global_vqa import GlobalVqaProblem, train_full_domain, wavefunction
from .grid import default_problem, l2_error
from .newton import newton_ground_state
from .optimize import OptimizerConfig
from .svgplot import PLOT_KINDS, emit_plot
from .trace import TrainingTrace, emit_trace

_log = logging.getLogger("qgpe")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_IO = 4


def _setup_logging() -> None:
    level = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}.get(
        os.environ.get("SOLVER_LOG", "error").strip().lower(), logging.ERROR
    )
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s")


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _emit_plots(outdir: Path, stem: str, traces, labels) -> None:
    for kind in PLOT_KINDS:
        try:
            emit_plot(traces, kind, outdir / f"{stem}_{kind}.svg", labels=labels)
        except QgpeError:
            _log.info("skipping %s plot for %s (no positive data)", kind, stem)


def _training_summary(cfg, ref, trace: TrainingTrace, psi_final, terminations, wall) -> dict:
    final_energy = trace.rows[-1].energy if trace.rows else float("nan")
    return {
        "e_newton": ref.energy,
        "final_energy": final_energy,
        "final_energy_error": abs(final_energy - ref.energy),
        "final_l2_error": l2_error(psi_final, ref.psi.astype(np.complex128)),
        "total_iterations": len(trace),
        "wall_time_s": wall,
        "termination_reasons": terminations,
    }


def _run_newton(cfg: ExperimentConfig, outdir: Path) -> dict:
    prob = default_problem(cfg.n, cfg.kappa)
    res = newton_ground_state(prob)
    return {
        "n": cfg.n,
        "kappa": cfg.kappa,
        "energy": res.energy,
        "chemical_potential": res.lam,
        "residual_norm": res.residual_norm,
        "iterations": res.iterations,
        "psi": res.psi.tolist(),
    }


def _run_dla(cfg: ExperimentConfig, outdir: Path) -> dict:
    report = lie_closure(ansatz_generators(cfg.n))
    payload = {
        "n": cfg.n,
        "generator_count": report.generator_count,
        "closure_dimension": report.closure_dimension,
        "closed_after_rounds": report.closed_after_rounds,
        "subdomain_ratio": None,
    }
    if 3 <= cfg.n <= 6:
        payload["subdomain_ratio"] = subdomain_dla_ratio(cfg.n)
    return payload


def _run_variance(cfg: ExperimentConfig, outdir: Path) -> dict:
    prob = default_problem(cfg.n, cfg.kappa)
    mean, variance = sample_cost_variance(
        cfg.n, cfg.resolve_depth(), cfg.num_samples, cfg.seed, prob
    )
    return {
        "n": cfg.n,
        "d": cfg.resolve_depth(),
        "num_samples": cfg.num_samples,
        "seed": cfg.seed,
        "mean": mean,
        "variance": variance,
    }


def _full_training(cfg: ExperimentConfig, ref):
    prob = default_problem(cfg.n, cfg.kappa)
    problem = GlobalVqaProblem(
        prob=prob, ansatz=AnsatzSpec(n=cfg.n, depth=cfg.resolve_depth()), reference=ref
    )
    start = time.perf_counter()
    result, trace = train_full_domain(
        problem,
        OptimizerConfig(max_iters=cfg.max_full_iters),
        record_walltime=cfg.record_walltime,
    )
    wall = time.perf_counter() - start
    psi_final = wavefunction(problem, result.theta)
    return _training_summary(cfg, ref, trace, psi_final, [result.termination], wall), trace


def _dd_training(cfg: ExperimentConfig, ref, classical: bool, sweeps: int | None = None):
    prob = default_problem(cfg.n, cfg.kappa)
    layout = build_layout(cfg.n)
    schedule = DdSchedule(
        sweeps=sweeps if sweeps is not None else cfg.sweeps, budget=cfg.local_budget
    )
    start = time.perf_counter()
    if classical:
        psi, trace = run_classical_dd(
            prob, layout, schedule, reference=ref, record_walltime=cfg.record_walltime
        )
    else:
        local_spec = AnsatzSpec(n=cfg.n - 1, depth=cfg.resolve_local_depth())
        psi, trace = run_dd(
            prob,
            layout,
            local_spec,
            schedule,
            reference=ref,
            record_walltime=cfg.record_walltime,
        )
    wall = time.perf_counter() - start
    terminations = sorted(set(trace.meta.get("terminations", [])))
    return _training_summary(cfg, ref, trace, psi, terminations, wall), trace


def _run_full(cfg: ExperimentConfig, outdir: Path) -> dict:
    ref = newton_ground_state(default_problem(cfg.n, cfg.kappa))
    summary, trace = _full_training(cfg, ref)
    emit_trace(trace, outdir / "full_trace.csv")
    _emit_plots(outdir, "full", trace, [f"full n={cfg.n}"])
    return summary


def _run_dd_mode(cfg: ExperimentConfig, outdir: Path) -> dict:
    ref = newton_ground_state(default_problem(cfg.n, cfg.kappa))
    summary, trace = _dd_training(cfg, ref, classical=False)
    emit_trace(trace, outdir / "dd_trace.csv")
    _emit_plots(outdir, "dd", trace, [f"dd n={cfg.n}"])
    return summary


def _run_classical_dd(cfg: ExperimentConfig, outdir: Path) -> dict:
    ref = newton_ground_state(default_problem(cfg.n, cfg.kappa))
    summary, trace = _dd_training(cfg, ref, classical=True)
    emit_trace(trace, outdir / "classical_dd_trace.csv")
    _emit_plots(outdir, "classical_dd", trace, [f"classical dd n={cfg.n}"])
    return summary


def _run_compare(cfg: ExperimentConfig, outdir: Path) -> dict:
    """Budget-matched full-domain vs domain-decomposition comparison."""
    ref = newton_ground_state(default_problem(cfg.n, cfg.kappa))
    sweeps = budget_match(cfg.max_full_iters, int(cfg.local_budget), 3, cfg.cost_ratio)
    full_summary, full_trace = _full_training(cfg, ref)
    dd_summary, dd_trace = _dd_training(cfg, ref, classical=False, sweeps=sweeps)
    emit_trace(full_trace, outdir / "full_trace.csv")
    emit_trace(dd_trace, outdir / "dd_trace.csv")
    _emit_plots(
        outdir, "compare", [full_trace, dd_trace], [f"full n={cfg.n}", f"dd n={cfg.n}"]
    )
    return {
        "budget": {
            "full_iters": cfg.max_full_iters,
            "local_budget": cfg.local_budget,
            "cost_ratio": cfg.cost_ratio,
            "sweeps": sweeps,
        },
        "full": full_summary,
        "dd": dd_summary,
    }


_MODE_RUNNERS = {
    "newton": _run_newton,
    "dla": _run_dla,
    "variance": _run_variance,
    "full": _run_full,
    "dd": _run_dd_mode,
    "classical_dd": _run_classical_dd,
    "compare": _run_compare,
}


def execute_config(cfg: ExperimentConfig) -> dict:
    """Run one experiment; always leaves a <mode>.json summary behind."""
    outdir = Path(cfg.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    summary_path = outdir / f"{cfg.mode}.json"
    base = {"config": config_to_dict(cfg)}
    try:
        payload = _MODE_RUNNERS[cfg.mode](cfg, outdir)
    except QgpeError as exc:
        if isinstance(exc, ConfigurationError):
            raise
        _write_json(summary_path, {**base, "status": "failed", "error": str(exc)})
        raise
    summary = {**base, "status": "ok", **payload}
    _write_json(summary_path, summary)
    print(f"{cfg.mode}: wrote {summary_path}")
    return summary


def _exit_code_for(exc: Exception) -> int:
    if isinstance(exc, ConfigurationError):
        return EXIT_CONFIG
    if isinstance(exc, QgpeError):
        return EXIT_SOLVER
    if isinstance(exc, OSError):
        return EXIT_IO
    raise exc


def _run_one_file(path: str, output_dir: str | None, seed: int | None) -> int:
    _setup_logging()
    try:
        cfg = parse_config(path)
        if output_dir is not None:
            cfg.output_dir = output_dir
        if seed is not None:
            cfg.seed = seed
        execute_config(cfg)
        return EXIT_OK
    except Exception as exc:   # noqa: BLE001 - mapped to exit codes below
        code = _exit_code_for(exc)
        print(f"error ({path}): {exc}", file=sys.stderr)
        return code


def _cmd_run(args) -> int:
    jobs = []
    for path in args.configs:
        if args.output_dir is None:
            outdir = None
        elif len(args.configs) == 1:
            outdir = args.output_dir
        else:
            outdir = str(Path(args.output_dir) / Path(path).stem)
        jobs.append((path, outdir, args.seed))
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            codes = list(pool.map(_run_one_file, *zip(*jobs)))
    else:
        codes = [_run_one_file(*job) for job in jobs]
    return max(codes, default=EXIT_OK)


def _cmd_mode(args) -> int:
    raw = {"mode": args.mode.replace("-", "_")}
    for key in (
        "n",
        "d",
        "d_local",
        "kappa",
        "sweeps",
        "local_budget",
        "max_full_iters",
        "cost_ratio",
        "seed",
        "output_dir",
        "num_samples",
    ):
        value = getattr(args, key, None)
        if value is not None:
            raw[key] = value
    if getattr(args, "record_walltime", False):
        raw["record_walltime"] = True
    try:
        cfg = config_from_dict(raw)
        execute_config(cfg)
        return EXIT_OK
    except Exception as exc:   # noqa: BLE001
        code = _exit_code_for(exc)
        print(f"error: {exc}", file=sys.stderr)
        return code


def _budget(text: str):
    return text if text == CONVERGE else int(text)


def _add_mode_parser(sub, mode: str, help_text: str):
    p = sub.add_parser(mode, help=help_text)
    p.set_defaults(handler=_cmd_mode, mode=mode)
    p.add_argument("--n", type=int, required=True, help="qubit count")
    p.add_argument("--d", type=int, default=None, help="full-domain circuit depth")
    p.add_argument("--d-local", dest="d_local", type=int, default=None,
                   help="subdomain circuit depth (d/2 or d)")
    p.add_argument("--kappa", type=float, default=None, help="interaction strength")
    p.add_argument("--sweeps", type=int, default=None, help="domain-decomposition sweeps")
    p.add_argument("--local-budget", dest="local_budget", type=_budget, default=None,
                   help="BFGS iterations per subdomain update, or 'converge'")
    p.add_argument("--max-full-iters", dest="max_full_iters", type=int, default=None,
                   help="full-domain BFGS iteration budget")
    p.add_argument("--cost-ratio", dest="cost_ratio", type=float, default=None,
                   help="full-domain / subdomain cost ratio for budget matching")
    p.add_argument("--seed", type=int, default=None, help="RNG seed (variance mode)")
    p.add_argument("--num-samples", dest="num_samples", type=int, default=None,
                   help="Monte-Carlo samples (variance mode)")
    p.add_argument("--output-dir", dest="output_dir", default=None)
    p.add_argument("--record-walltime", dest="record_walltime", action="store_true",
                   help="record real wall times in trace rows (breaks byte reproducibility)")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="solver",
        description="Gross-Pitaevskii ground states via variational quantum optimization "
        "with overlapping domain decomposition.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute one or more JSON experiment configs")
    run.add_argument("configs", nargs="+", help="config JSON paths")
    run.add_argument("--output-dir", dest="output_dir", default=None,
                     help="override output directory (per-config subdirs when several)")
    run.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    run.add_argument("--seed", type=int, default=None, help="override the config seed")
    run.set_defaults(handler=_cmd_run)

    _add_mode_parser(sub, "full", "full-domain VQA training")
    _add_mode_parser(sub, "dd", "domain-decomposed VQA training")
    _add_mode_parser(sub, "classical-dd", "classical domain-decomposition baseline")
    _add_mode_parser(sub, "newton", "classical Newton ground-state reference")
    _add_mode_parser(sub, "dla", "dynamical Lie algebra closure dimensions")
    _add_mode_parser(sub, "variance", "Monte-Carlo cost-variance probe")
    _add_mode_parser(sub, "compare", "budget-matched full vs domain-decomposition run")
    return parser


def main(argv=None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
