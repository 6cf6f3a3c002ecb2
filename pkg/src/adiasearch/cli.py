"""Command-line front end.

Subcommands:

* ``run``     single propagation; writes ``trajectory.csv`` and ``result.json``
* ``sweep``   one run per value of a swept variable; writes ``sweep.csv``
* ``compare`` local strategy vs the equal-cost parallel schedule; ``compare.json``
* ``check``   reduced vs full-space propagation agreement; ``check.json``

Outputs are plain CSV/JSON so plotting can happen anywhere; identical
configs (including seeds) produce byte-identical files.  Exit codes:
0 success, 2 configuration error, 3 failed check.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import analytics, schedules
from .errors import AdiabaticSearchError, InvalidParameter
from .model import DEFAULT_ORACLE_CAP, SearchInstance
from .propagate import propagate, propagate_full, write_trajectory_csv
from .schedules import Schedule, Shape, Strategy

_STRATEGIES = tuple(s.value for s in Strategy)
_SHAPES = tuple(s.value for s in Shape)


@dataclass
class RunConfig:
    """One propagation request; also the per-point template for sweeps.

    Fields that do not apply to the chosen strategy must stay None; the
    build step rejects contradictions instead of silently ignoring them.
    """

    strategy: str
    n: int = 0
    marked: int = 0
    alpha: float | None = None
    beta: float | None = None
    epsilon: float | None = None
    T: float | None = None
    r: float | None = None
    shape: str | None = None
    steps: int = 200_000
    output: str = "."
    seed: int = 0

    def __post_init__(self) -> None:
        self.strategy = str(self.strategy).lower()
        if self.strategy not in _STRATEGIES:
            raise InvalidParameter(
                f"strategy must be one of {_STRATEGIES}, got {self.strategy!r}")
        self.n = int(self.n)
        self.marked = int(self.marked)
        self.steps = int(self.steps)
        self.seed = int(self.seed)
        self.output = str(self.output)
        for field in ("alpha", "beta", "epsilon", "T", "r"):
            value = getattr(self, field)
            if value is not None:
                setattr(self, field, float(value))
        if self.shape is not None:
            self.shape = str(self.shape).lower()
            if self.shape not in _SHAPES:
                raise InvalidParameter(
                    f"shape must be one of {_SHAPES}, got {self.shape!r}")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InvalidParameter(f"unknown config keys: {sorted(unknown)}")
        if "strategy" not in data:
            raise InvalidParameter("config requires a strategy")
        return cls(**data)

    def build(self) -> tuple[SearchInstance, Schedule]:
        """Validate the config against its strategy and build the schedule."""
        if self.n < 2:
            raise InvalidParameter(f"--n must be at least 2, got {self.n}")
        if self.steps < 1000:
            raise InvalidParameter(f"--steps must be at least 1000, got {self.steps}")
        inst = SearchInstance(self.n, self.marked)
        self._reject("beta", self.strategy != Strategy.PARALLEL)
        self._reject("alpha", self.strategy == Strategy.PARALLEL)
        self._reject("r", self.strategy != Strategy.PARALLEL)
        self._reject("shape", self.strategy != Strategy.PARALLEL)
        if self.strategy == Strategy.LOCAL:
            if self.epsilon is None:
                raise InvalidParameter("--epsilon is required for the local strategy")
            if self.T is not None:
                raise InvalidParameter(
                    "--T is derived for the local strategy; do not pass it")
            schedule = schedules.local_schedule(self.alpha or 1.0, self.epsilon, inst)
        elif self.strategy == Strategy.LINEAR:
            if self.T is None:
                raise InvalidParameter("--T is required for the linear strategy")
            schedule = schedules.linear_schedule(
                self.alpha or 1.0, self.T, inst, epsilon=self.epsilon)
        else:
            if self.T is None:
                raise InvalidParameter("--T is required for the parallel strategy")
            if self.epsilon is not None:
                raise InvalidParameter(
                    "--epsilon does not apply to a parallel run; pick --T directly")
            shape = Shape(self.shape) if self.shape is not None else Shape.TANH
            schedule = schedules.parallel_schedule(
                self.beta or 1.0, self.T, inst, r=self.r if self.r is not None else 8.0,
                shape=shape)
        return inst, schedule

    def _reject(self, field: str, condition: bool) -> None:
        if condition and getattr(self, field) is not None:
            raise InvalidParameter(
                f"--{field} does not apply to the {self.strategy} strategy")


def _oracle_cap() -> int:
    raw = os.environ.get("ADIA_ORACLE_CAP")
    if raw is None:
        return DEFAULT_ORACLE_CAP
    try:
        return int(raw)
    except ValueError as exc:
        raise InvalidParameter(f"ADIA_ORACLE_CAP must be an integer, got {raw!r}") from exc


def _write_json(path: str, payload: dict) -> str:
    text = json.dumps(payload, indent=2, sort_keys=True)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text + "\n")
    return text


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        strategy=args.strategy,
        n=args.n if args.n is not None else 0,
        marked=args.marked,
        alpha=args.alpha,
        beta=args.beta,
        epsilon=args.epsilon,
        T=args.T,
        r=args.r,
        shape=args.shape,
        steps=args.steps,
        output=args.output,
    )


def cmd_run(config: RunConfig) -> int:
    inst, schedule = config.build()
    trajectory, result = propagate(schedule, inst, steps=config.steps)
    os.makedirs(config.output, exist_ok=True)
    write_trajectory_csv(trajectory, os.path.join(config.output, "trajectory.csv"))
    record = {
        "p_m_final": result.p_m_final,
        "p_loss": result.p_loss,
        "cost": result.cost,
        "t_eff": result.t_eff,
        "boundary_residual": result.boundary_residual,
        "analytic_loss": result.analytic_loss,
    }
    print(_write_json(os.path.join(config.output, "result.json"), record))
    return 0


def _sweep_point_config(variable: str, x: float, template: RunConfig) -> RunConfig:
    """Instantiate the template at one sweep value; validates applicability."""
    strategy = template.strategy
    if variable == "epsilon":
        if strategy != Strategy.LOCAL:
            raise InvalidParameter("an epsilon sweep applies to the local strategy only")
        return dataclasses.replace(template, epsilon=float(x))
    if variable == "inv_gamma":
        if strategy != Strategy.PARALLEL:
            raise InvalidParameter(
                "an inv_gamma sweep applies to the parallel strategy only")
        if template.epsilon is not None:
            raise InvalidParameter(
                "--epsilon does not apply to an inv_gamma sweep; the value fixes T")
        beta = template.beta or 1.0
        return dataclasses.replace(template, T=float(x) * math.sqrt(template.n) / beta)
    n_point = int(round(x))
    if abs(n_point - x) > 1e-9:
        raise InvalidParameter(f"an n sweep needs integer values, got {x!r}")
    if strategy == Strategy.PARALLEL and template.T is None:
        # gamma = eps*r/2 keeps the parallel cost tied to the local one
        if template.epsilon is None:
            raise InvalidParameter(
                "an n sweep over the parallel strategy needs --epsilon "
                "(sets T via gamma = epsilon*r/2) or an explicit --T")
        beta = template.beta or 1.0
        r = template.r if template.r is not None else 8.0
        gamma = schedules.equal_cost_gamma(template.epsilon, r)
        t_par = math.sqrt(n_point) / (beta * gamma)
        return dataclasses.replace(template, n=n_point, T=t_par, epsilon=None)
    return dataclasses.replace(template, n=n_point)


def _sweep_row(task: tuple[float, RunConfig]) -> tuple[float, dict]:
    """Worker for one sweep point; never raises, errors land in the row."""
    x, config = task
    try:
        inst, schedule = config.build()
        _, result = propagate(schedule, inst, steps=config.steps)
        prediction = analytics.loss_prediction(schedule)
        return x, {
            "loss_numeric": result.p_loss,
            "loss_analytic_exact": None if prediction is None else prediction.exact,
            "loss_analytic_asymptotic":
                None if prediction is None else prediction.asymptotic,
            "cost": result.cost,
            "error": "",
        }
    except AdiabaticSearchError as exc:
        return x, {
            "loss_numeric": None,
            "loss_analytic_exact": None,
            "loss_analytic_asymptotic": None,
            "cost": None,
            "error": f"{type(exc).__name__}: {exc}",
        }


def _default_n_values() -> list[float]:
    return [float(v) for v in np.round(np.geomspace(10, 1000, 40)).astype(int)]


def cmd_sweep(variable: str, values: list[float], template: RunConfig,
              jobs: int = 1) -> int:
    if variable == "n" and not values:
        values = sorted(set(_default_n_values()))
    if not values:
        raise InvalidParameter("--values must be non-empty")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise InvalidParameter("--values must be strictly increasing")
    if jobs < 1:
        raise InvalidParameter(f"--jobs must be at least 1, got {jobs}")

    tasks = [(x, _sweep_point_config(variable, x, template)) for x in values]
    if jobs == 1:
        rows = [_sweep_row(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_row, tasks, chunksize=1))

    os.makedirs(template.output, exist_ok=True)
    path = os.path.join(template.output, "sweep.csv")
    fields = ("loss_numeric", "loss_analytic_exact", "loss_analytic_asymptotic", "cost")
    with open(path, "w", encoding="ascii", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("x",) + fields + ("error",))
        for x, row in rows:
            cells = [f"{x:.12g}"]
            cells += ["" if row[f] is None else f"{row[f]:.12g}" for f in fields]
            cells.append(row["error"])
            writer.writerow(cells)
    print(f"wrote {path} ({len(rows)} rows)")
    failed = sum(1 for _, row in rows if row["error"])
    if failed:
        print(f"{failed} point(s) failed; see the error column", file=sys.stderr)
    return 0


def cmd_compare(epsilon: float, r: float, n: int, steps: int = 200_000,
                output: str = ".") -> int:
    inst = SearchInstance(n)
    local = schedules.local_schedule(1.0, epsilon, inst)
    t_par = schedules.equal_cost_parallel_time(epsilon, r, n)
    parallel = schedules.parallel_schedule(1.0, t_par, inst, r=r)

    _, local_result = propagate(local, inst, steps=steps)
    _, parallel_result = propagate(parallel, inst, steps=steps)
    reference_cost = schedules.parallel_peak_reference(1.0, n) * parallel_result.t_eff

    report = {
        "n": n,
        "epsilon": epsilon,
        "r": r,
        "gamma": schedules.equal_cost_gamma(epsilon, r),
        "t_parallel": t_par,
        "local": {
            "t_total": local.t_char,
            "cost": local_result.cost,
            "p_loss": local_result.p_loss,
            "analytic_loss": local_result.analytic_loss,
        },
        "parallel": {
            "cost_numeric": parallel_result.cost,
            "cost_reference": reference_cost,
            "p_loss": parallel_result.p_loss,
            "analytic_loss": parallel_result.analytic_loss,
            "boundary_residual": parallel_result.boundary_residual,
        },
        "cost_ratio_numeric": parallel_result.cost / local_result.cost,
        "cost_ratio_reference": reference_cost / local_result.cost,
        "loss_ratio": parallel_result.p_loss / local_result.p_loss,
    }
    os.makedirs(output, exist_ok=True)
    print(_write_json(os.path.join(output, "compare.json"), report))
    return 0


def _check_schedules(n: int, inst: SearchInstance) -> list[Schedule]:
    # short windows keep the full-space RK4 cheap; equivalence must hold anyway
    return [
        schedules.linear_schedule(1.0, 50.0, inst),
        schedules.local_schedule(1.0, 0.2, inst),
        schedules.parallel_schedule(1.0, 0.6 * math.sqrt(n), inst, r=8.0),
    ]


def cmd_check(n_list: list[int], seed: int = 0, steps: int = 800_000,
              full_steps: int = 30_000, tolerance: float = 1e-7,
              output: str = ".") -> int:
    if not n_list:
        raise InvalidParameter("--n-list must be non-empty")
    if tolerance <= 0:
        raise InvalidParameter(f"--tolerance must be positive, got {tolerance!r}")
    cap = _oracle_cap()
    rng = np.random.default_rng(seed)
    entries = []
    for n in n_list:
        marked = int(rng.integers(0, n))
        inst = SearchInstance(n, marked)
        for schedule in _check_schedules(n, inst):
            _, reduced = propagate(schedule, inst, steps=steps)
            full = propagate_full(schedule, inst, steps=full_steps, cap=cap)
            entries.append({
                "n": n,
                "marked": marked,
                "strategy": schedule.kind.value,
                "p_m_reduced": reduced.p_m_final,
                "p_m_full": full.p_m_final,
                "delta": abs(reduced.p_m_final - full.p_m_final),
            })
    max_delta = max(entry["delta"] for entry in entries)
    report = {
        "seed": seed,
        "steps": steps,
        "full_steps": full_steps,
        "tolerance": tolerance,
        "entries": entries,
        "max_delta": max_delta,
        "pass": bool(max_delta < tolerance),
    }
    os.makedirs(output, exist_ok=True)
    print(_write_json(os.path.join(output, "check.json"), report))
    return 0 if report["pass"] else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adiasearch",
        description="Adiabatic-search schedule simulator (linear, local, parallel).")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config_flags(p: argparse.ArgumentParser, n_required: bool) -> None:
        p.add_argument("--strategy", required=True, choices=_STRATEGIES)
        p.add_argument("--n", type=int, required=n_required,
                       help="database size (>= 2)")
        p.add_argument("--marked", type=int, default=0, help="marked index")
        p.add_argument("--alpha", type=float, default=None,
                       help="coupling scale for linear/local (default 1)")
        p.add_argument("--beta", type=float, default=None,
                       help="coupling scale for parallel (default 1)")
        p.add_argument("--epsilon", type=float, default=None,
                       help="adiabaticity parameter")
        p.add_argument("--T", type=float, default=None,
                       help="total time (linear) or characteristic time (parallel)")
        p.add_argument("--r", type=float, default=None,
                       help="parallel window half-widths in units of T (default 8)")
        p.add_argument("--shape", choices=_SHAPES, default=None,
                       help="parallel switching profile (default tanh)")
        p.add_argument("--steps", type=int, default=200_000)
        p.add_argument("--output", default=".", help="output directory")

    run_p = sub.add_parser("run", help="single propagation")
    add_config_flags(run_p, n_required=True)

    sweep_p = sub.add_parser("sweep", help="one run per swept value")
    add_config_flags(sweep_p, n_required=False)
    sweep_p.add_argument("--variable", required=True,
                         choices=("inv_gamma", "n", "epsilon"))
    sweep_p.add_argument("--values", type=float, nargs="+", default=None,
                         help="strictly increasing sweep values "
                              "(n sweeps default to 40 log-spaced in [10, 1000])")
    sweep_p.add_argument("--jobs", type=int, default=1,
                         help="concurrent worker processes")

    compare_p = sub.add_parser(
        "compare", help="local vs equal-cost parallel at the same (epsilon, r, n)")
    compare_p.add_argument("--epsilon", type=float, required=True)
    compare_p.add_argument("--r", type=float, required=True)
    compare_p.add_argument("--n", type=int, required=True)
    compare_p.add_argument("--steps", type=int, default=200_000)
    compare_p.add_argument("--output", default=".")

    check_p = sub.add_parser(
        "check", help="reduced vs full-space propagation agreement")
    check_p.add_argument("--n-list", type=int, nargs="+", default=[4, 20, 128])
    check_p.add_argument("--seed", type=int, default=0)
    check_p.add_argument("--steps", type=int, default=800_000,
                         help="reduced-propagation steps")
    check_p.add_argument("--full-steps", type=int, default=30_000,
                         help="full-space RK4 steps")
    check_p.add_argument("--tolerance", type=float, default=1e-7)
    check_p.add_argument("--output", default=".")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(_config_from_args(args))
        if args.command == "sweep":
            if args.n is None and args.variable != "n":
                raise InvalidParameter("--n is required unless sweeping over n")
            template = _config_from_args(args)
            return cmd_sweep(args.variable, args.values or [], template,
                             jobs=args.jobs)
        if args.command == "compare":
            return cmd_compare(args.epsilon, args.r, args.n,
                               steps=args.steps, output=args.output)
        return cmd_check(args.n_list, seed=args.seed, steps=args.steps,
                         full_steps=args.full_steps, tolerance=args.tolerance,
                         output=args.output)
    except AdiabaticSearchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
