"""Batch verification of the certified bounds: configs, trials, reports.

A scenario crosses arcs, functions and orders; every trial samples nodes,
computes the divided difference two ways, evaluates the three bounds, and
records one row.  Rows are deterministic under a fixed seed regardless of
worker count, and a single failing trial flags its row instead of aborting.
"""

from __future__ import annotations

import json
import math
import os
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .arcs import diameter
from .bounds import curve_constants, dd_bound_certificate
from .configio import FUNCTION_BUILDERS, arc_from_config, function_from_config
from .divided import NodeSet, dd_lagrange, dd_recursive, lagrange_term_scale
from .errors import ArcInterpError, ConfigError

__all__ = [
    "GridSettings",
    "ToleranceSettings",
    "ScenarioConfig",
    "TrialRow",
    "VerificationReport",
    "SweepTable",
    "run_verification_suite",
    "sweep_tightness",
]

CSV_HEADER = "arc,function,n,trial,abs_dn,product_bound,diam_bound,sharper_bound,ratio,pass"

MIN_PARAM_GAP = 1e-3


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


@dataclass(frozen=True)
class GridSettings:
    constant_grid: int = 64
    diameter_grid: int = 512


@dataclass(frozen=True)
class ToleranceSettings:
    quadrature_tol: float = 1e-10
    cross_check_rtol: float = 1e-9
    safety_factor: float = 1.05


@dataclass(frozen=True)
class ScenarioConfig:
    arcs: tuple
    functions: tuple
    orders: tuple
    trials: int
    seed: int
    grids: GridSettings = field(default_factory=GridSettings)
    tolerances: ToleranceSettings = field(default_factory=ToleranceSettings)

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        if not isinstance(data, dict):
            raise ConfigError("config root must be a mapping")

        def require(key, kind, where="config"):
            if key not in data:
                raise ConfigError(f"{where}.{key}: missing")
            value = data[key]
            if kind is int and isinstance(value, bool):
                raise ConfigError(f"{where}.{key}: expected integer")
            if not isinstance(value, kind):
                raise ConfigError(f"{where}.{key}: expected {kind.__name__}")
            return value

        arcs = require("arcs", list)
        if not arcs:
            raise ConfigError("arcs: must be nonempty")
        for i, spec in enumerate(arcs):
            arc_from_config(spec)  # validates; raises ConfigError
        functions = require("functions", list)
        if not functions:
            raise ConfigError("functions: must be nonempty")
        for i, spec in enumerate(functions):
            if not isinstance(spec, dict) or spec.get("kind") not in FUNCTION_BUILDERS:
                raise ConfigError(f"functions[{i}].kind: unresolvable {spec!r}")
        orders = require("orders", list)
        if not orders or not all(isinstance(n, int) and not isinstance(n, bool) for n in orders):
            raise ConfigError("orders: must be a nonempty list of integers")
        if any(n < 2 for n in orders):
            raise ConfigError("orders: certified bounds require n >= 2")
        trials = require("trials", int)
        if trials < 1:
            raise ConfigError("trials: must be at least 1")
        seed = require("seed", int)
        if not (0 <= seed < 2**64):
            raise ConfigError("seed: must fit in 64 bits")

        grids = GridSettings()
        if "grids" in data:
            g = data["grids"]
            if not isinstance(g, dict):
                raise ConfigError("grids: expected mapping")
            try:
                grids = GridSettings(
                    constant_grid=int(g.get("constant_grid", grids.constant_grid)),
                    diameter_grid=int(g.get("diameter_grid", grids.diameter_grid)),
                )
            except (TypeError, ValueError):
                raise ConfigError("grids: entries must be integers") from None
        tols = ToleranceSettings()
        if "tolerances" in data:
            tchk = data["tolerances"]
            if not isinstance(tchk, dict):
                raise ConfigError("tolerances: expected mapping")
            try:
                tols = ToleranceSettings(
                    quadrature_tol=float(tchk.get("quadrature_tol", tols.quadrature_tol)),
                    cross_check_rtol=float(tchk.get("cross_check_rtol", tols.cross_check_rtol)),
                    safety_factor=float(tchk.get("safety_factor", tols.safety_factor)),
                )
            except (TypeError, ValueError):
                raise ConfigError("tolerances: entries must be numbers") from None
        if tols.safety_factor <= 0:
            raise ConfigError("tolerances.safety_factor: must be positive")
        return cls(
            arcs=tuple(arcs),
            functions=tuple(functions),
            orders=tuple(orders),
            trials=trials,
            seed=seed,
            grids=grids,
            tolerances=tols,
        )

    @classmethod
    def from_file(cls, path) -> "ScenarioConfig":
        with open(path, "r", encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config is not valid JSON: {exc}") from None
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return {
            "arcs": [dict(a) for a in self.arcs],
            "functions": [dict(f) for f in self.functions],
            "orders": list(self.orders),
            "trials": self.trials,
            "seed": self.seed,
            "grids": {
                "constant_grid": self.grids.constant_grid,
                "diameter_grid": self.grids.diameter_grid,
            },
            "tolerances": {
                "quadrature_tol": self.tolerances.quadrature_tol,
                "cross_check_rtol": self.tolerances.cross_check_rtol,
                "safety_factor": self.tolerances.safety_factor,
            },
        }


@dataclass(frozen=True)
class TrialRow:
    arc: str
    function: str
    n: int
    trial: int
    abs_dn: float
    product_bound: float
    diam_bound: float
    sharper_bound: float
    ratio: float
    passed: bool
    cross_residual: float = float("nan")
    allowance: float = 0.0
    error: str | None = None

    def csv_line(self) -> str:
        return ",".join(
            [
                self.arc,
                self.function,
                str(self.n),
                str(self.trial),
                _fmt(self.abs_dn),
                _fmt(self.product_bound),
                _fmt(self.diam_bound),
                _fmt(self.sharper_bound),
                _fmt(self.ratio),
                "true" if self.passed else "false",
            ]
        )

    def to_dict(self) -> dict:
        return {
            "arc": self.arc,
            "function": self.function,
            "n": self.n,
            "trial": self.trial,
            "abs_dn": self.abs_dn,
            "product_bound": self.product_bound,
            "diam_bound": self.diam_bound,
            "sharper_bound": self.sharper_bound,
            "ratio": self.ratio,
            "pass": self.passed,
            "cross_residual": self.cross_residual,
            "error": self.error,
        }


@dataclass(frozen=True)
class VerificationReport:
    config: ScenarioConfig
    rows: tuple
    summary: dict

    def csv_text(self) -> str:
        lines = [CSV_HEADER] + [r.csv_line() for r in self.rows]
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "schema": 1,
            "config": self.config.to_dict(),
            "rows": [r.to_dict() for r in self.rows],
            "summary": self.summary,
        }

    def json_text(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"


def _worker_count() -> int:
    env = os.environ.get("ARCINTERP_THREADS")
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


def _sample_params(rng, count: int, closed: bool, min_gap: float = MIN_PARAM_GAP, max_tries: int = 10_000):
    """Uniform parameters with pairwise (wrap-around on curves) gap >= min_gap."""
    for _ in range(max_tries):
        ts = np.sort(rng.random(count))
        gaps = np.diff(ts)
        wrap = (1.0 - ts[-1] + ts[0]) if closed else np.inf
        if (gaps >= min_gap).all() and wrap >= min_gap:
            return [float(t) for t in ts]
    raise RuntimeError("node sampling failed to honor the minimum gap")


def _run_trial(arc, fn, n, trial, seed, indices, constants, grids, tols):
    ai, fi = indices
    rng = np.random.default_rng([seed, ai, fi, n, trial])
    try:
        params = _sample_params(rng, n + 1, arc.closed)
        nodes = NodeSet.from_params(arc, params)
        d_lag = dd_lagrange(fn, nodes)
        d_rec = dd_recursive(fn, nodes).top
        abs_dn = abs(d_lag)
        cross = abs(d_lag - d_rec)
        cross_ok = cross <= tols.cross_check_rtol * (1.0 + abs_dn)
        cert = dd_bound_certificate(
            fn,
            arc,
            nodes,
            grid=grids.constant_grid,
            diameter_grid=grids.diameter_grid,
            constants=constants,
        )
        # The comparison allows for the rounding floor of the weight sum so
        # exactly-zero bounds (e.g. low-degree polynomials) are not flagged
        # on float debris.
        values = [fn.value(t) for t in params]
        allowance = 64.0 * np.finfo(float).eps * lagrange_term_scale(nodes.points, values)
        guarded = tols.safety_factor * cert.product_bound + allowance
        ratio = 0.0 if abs_dn == 0.0 else abs_dn / guarded
        return TrialRow(
            arc=arc.label,
            function=fn.label,
            n=n,
            trial=trial,
            abs_dn=abs_dn,
            product_bound=cert.product_bound,
            diam_bound=cert.diam_bound,
            sharper_bound=cert.sharper_bound,
            ratio=ratio,
            passed=bool(ratio <= 1.0 and cross_ok),
            cross_residual=cross,
            allowance=allowance,
        )
    except ArcInterpError as exc:
        return TrialRow(
            arc=arc.label,
            function=fn.label,
            n=n,
            trial=trial,
            abs_dn=float("nan"),
            product_bound=float("nan"),
            diam_bound=float("nan"),
            sharper_bound=float("nan"),
            ratio=float("nan"),
            passed=False,
            error=f"{type(exc).__name__}: {exc}",
        )


def run_verification_suite(config: ScenarioConfig) -> VerificationReport:
    """Run every (arc, function, order, trial) cell of the scenario.

    Constants are estimated once per (arc, function) pair and shared by all
    trials; the report is sorted by (arc, function, n, trial) so the worker
    pool never influences output bytes.
    """
    arcs = [arc_from_config(spec) for spec in config.arcs]
    k_max = max(config.orders) - 1
    combos = []
    for ai, arc in enumerate(arcs):
        diameter(arc, config.grids.diameter_grid)  # warm the memo before threading
        for fi, fspec in enumerate(config.functions):
            fn = function_from_config(fspec, arc)
            try:
                constants = curve_constants(fn, arc, k_max, grid=config.grids.constant_grid)
                failure = None
            except ArcInterpError as exc:
                constants, failure = None, f"{type(exc).__name__}: {exc}"
            combos.append((ai, fi, arc, fn, constants, failure))

    tasks = []
    for ai, fi, arc, fn, constants, failure in combos:
        for n in config.orders:
            for trial in range(config.trials):
                tasks.append((ai, fi, arc, fn, constants, failure, n, trial))

    def run(task):
        ai, fi, arc, fn, constants, failure, n, trial = task
        if failure is not None:
            return TrialRow(
                arc=arc.label,
                function=fn.label,
                n=n,
                trial=trial,
                abs_dn=float("nan"),
                product_bound=float("nan"),
                diam_bound=float("nan"),
                sharper_bound=float("nan"),
                ratio=float("nan"),
                passed=False,
                error=failure,
            )
        return _run_trial(
            arc, fn, n, trial, config.seed, (ai, fi), constants, config.grids, config.tolerances
        )

    workers = _worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run, tasks))
    else:
        rows = [run(t) for t in tasks]

    idx = sorted(range(len(tasks)), key=lambda i: (tasks[i][0], tasks[i][1], tasks[i][6], tasks[i][7]))
    rows = [rows[i] for i in idx]

    violations = sum(1 for r in rows if not math.isnan(r.ratio) and r.ratio > 1.0)
    raw_violations = sum(
        1
        for r in rows
        if not math.isnan(r.abs_dn) and r.abs_dn > r.product_bound + r.allowance
    )
    failures = sum(1 for r in rows if r.error is not None)
    ratios = [r.ratio for r in rows if not math.isnan(r.ratio)]
    summary = {
        "trials": len(rows),
        "violations": violations,
        "raw_violations": raw_violations,
        "failures": failures,
        "max_ratio": max(ratios) if ratios else float("nan"),
        "constants": [
            {
                "arc": arc.label,
                "function": fn.label,
                "error": failure,
                "estimates": [c.to_dict() for c in constants] if constants else [],
            }
            for ai, fi, arc, fn, constants, failure in combos
        ],
    }
    return VerificationReport(config=config, rows=tuple(rows), summary=summary)


SWEEP_HEADER = (
    "arc,function,n,trials,product_min,product_median,product_max,"
    "sharper_min,sharper_median,sharper_max"
)


@dataclass(frozen=True)
class SweepTable:
    rows: tuple

    def csv_text(self) -> str:
        lines = [SWEEP_HEADER]
        for r in self.rows:
            lines.append(
                ",".join(
                    [r["arc"], r["function"], str(r["n"]), str(r["trials"])]
                    + [
                        _fmt(r[key])
                        for key in (
                            "product_min",
                            "product_median",
                            "product_max",
                            "sharper_min",
                            "sharper_median",
                            "sharper_max",
                        )
                    ]
                )
            )
        return "\n".join(lines) + "\n"


def sweep_tightness(config: ScenarioConfig) -> SweepTable:
    """Aggregate raw-bound tightness ratios |d_n|/bound per (arc, function, n)."""
    report = run_verification_suite(config)
    groups: dict = {}
    for r in report.rows:
        if r.error is not None or math.isnan(r.abs_dn):
            continue
        groups.setdefault((r.arc, r.function, r.n), []).append(r)
    rows = []
    for (arc, fn, n), cells in sorted(groups.items()):
        prod_ratios = [c.abs_dn / c.product_bound if c.product_bound > 0 else 0.0 for c in cells]
        sharp_ratios = [c.abs_dn / c.sharper_bound if c.sharper_bound > 0 else 0.0 for c in cells]
        rows.append(
            {
                "arc": arc,
                "function": fn,
                "n": n,
                "trials": len(cells),
                "product_min": min(prod_ratios),
                "product_median": statistics.median(prod_ratios),
                "product_max": max(prod_ratios),
                "sharper_min": min(sharp_ratios),
                "sharper_median": statistics.median(sharp_ratios),
                "sharper_max": max(sharp_ratios),
            }
        )
    return SweepTable(rows=tuple(rows))
