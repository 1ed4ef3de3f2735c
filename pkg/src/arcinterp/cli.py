"""Command-line surface: differences, interpolants, certificates, suites.

Exit codes: 0 success (and zero violations), 1 violations or selftest
failures, 2 usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .arcs import make_arc
from .bounds import (
    dd_bound_certificate,
    minimize_pivot_product,
    sequence_bound_recursion,
    stable_product,
)
from .configio import arc_from_config, function_from_config
from .divided import NodeSet, d1_confluent, d1_partial, dd_lagrange, dd_recursive
from .errors import ArcInterpError, ConfigError
from .harness import ScenarioConfig, run_verification_suite, sweep_tightness
from .interpolation import newton_build, newton_eval

_ARC_SHORTCUTS = {
    "segment": {"kind": "segment", "a": 0.0, "b": 1.0},
    "circle": {"kind": "circle", "center": 0.0, "radius": 1.0},
    "half-circle": {"kind": "circular_arc", "center": 0.0, "radius": 1.0, "angles": [0.0, math.pi]},
    "ellipse-arc": {
        "kind": "ellipse_arc",
        "center": 0.0,
        "semi_axes": [1.0, 0.5],
        "angles": [0.0, math.pi],
    },
}

_FN_SHORTCUTS = {
    "exp": {"kind": "exp"},
    "sin": {"kind": "sin"},
    "conj": {"kind": "conj"},
    "abs2": {"kind": "abs2"},
    "identity": {"kind": "identity"},
    "z3-plus-conj": {"kind": "poly_plus_conj", "coeffs": [0, 0, 0, 1]},
}


def _resolve_arc(args):
    if getattr(args, "arc_json", None):
        return arc_from_config(json.loads(args.arc_json))
    return arc_from_config(_ARC_SHORTCUTS[args.arc])


def _resolve_function(args, arc):
    if getattr(args, "fn_json", None):
        return function_from_config(json.loads(args.fn_json), arc)
    return function_from_config(_FN_SHORTCUTS[args.fn], arc)


def _resolve_params(args, arc):
    if getattr(args, "nodes_roots_of_unity", None):
        count = args.nodes_roots_of_unity
        if count < 1:
            raise ConfigError("--nodes-roots-of-unity needs a positive count")
        if arc.closed:
            return [j / count for j in range(count)]
        return list(np.linspace(0.0, 1.0, count))
    if getattr(args, "nodes", None):
        return [float(x) for x in args.nodes.split(",")]
    raise ConfigError("pass --nodes or --nodes-roots-of-unity")


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _add_common_arc_args(sub):
    sub.add_argument("--arc", choices=sorted(_ARC_SHORTCUTS), default="segment")
    sub.add_argument("--arc-json", help="full arc spec as a JSON object")
    sub.add_argument("--fn", choices=sorted(_FN_SHORTCUTS), default="exp")
    sub.add_argument("--fn-json", help="full function spec as a JSON object")
    sub.add_argument("--nodes", help="comma-separated node parameters in [0,1]")
    sub.add_argument("--nodes-roots-of-unity", type=int, metavar="K",
                     help="K equally spaced parameters (the K-th roots of unity on a circle)")
    sub.add_argument("--out", help="write output to this path instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arcinterp",
        description="Divided differences, interpolation and certified bounds on arcs",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_dd = subs.add_parser("dd", help="compute a divided difference on an arc")
    _add_common_arc_args(p_dd)

    p_interp = subs.add_parser("interp", help="build an interpolant and evaluate it")
    _add_common_arc_args(p_interp)
    p_interp.add_argument("--eval", dest="eval_points", default="",
                          help="comma-separated evaluation parameters")
    p_interp.add_argument("--ordering", choices=["as-given", "leja"], default=None)

    p_bound = subs.add_parser("bound", help="emit a bound certificate as JSON")
    _add_common_arc_args(p_bound)
    p_bound.add_argument("--grid", type=int, default=64)

    p_verify = subs.add_parser("verify", help="run a verification suite from a config")
    p_verify.add_argument("--config", required=True)
    p_verify.add_argument("--seed", type=int, help="override the config seed")
    p_verify.add_argument("--out")
    p_verify.add_argument("--format", choices=["json", "csv"], default="json")

    p_sweep = subs.add_parser("sweep", help="tightness sweep (CSV of ratio statistics)")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--seed", type=int)
    p_sweep.add_argument("--out")

    p_self = subs.add_parser("selftest", help="run the invariant suites at reduced scale")
    p_self.add_argument("--seed", type=int, default=20260810)

    return parser


def _cmd_dd(args) -> int:
    arc = _resolve_arc(args)
    fn = _resolve_function(args, arc)
    nodes = NodeSet.from_params(arc, _resolve_params(args, arc))
    d_lag = dd_lagrange(fn, nodes)
    d_rec = dd_recursive(fn, nodes).top
    payload = {
        "arc": arc.label,
        "function": fn.label,
        "params": list(nodes.params),
        "points": [[z.real, z.imag] for z in nodes.points],
        "n": nodes.n,
        "dn": [d_lag.real, d_lag.imag],
        "cross_check_residual": abs(d_lag - d_rec),
    }
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


def _cmd_interp(args) -> int:
    arc = _resolve_arc(args)
    fn = _resolve_function(args, arc)
    nodes = NodeSet.from_params(arc, _resolve_params(args, arc))
    interp = newton_build(fn, nodes, ordering=args.ordering)
    payload = interp.to_dict()
    payload["arc"] = arc.label
    payload["function"] = fn.label
    evals = []
    if args.eval_points:
        for tok in args.eval_points.split(","):
            t = float(tok)
            z = arc.point(t)
            pz = newton_eval(interp, z)
            fz = fn.value(t)
            evals.append(
                {
                    "t": t,
                    "z": [z.real, z.imag],
                    "interpolant": [pz.real, pz.imag],
                    "f": [fz.real, fz.imag],
                    "abs_error": abs(fz - pz),
                }
            )
    payload["evaluations"] = evals
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


def _cmd_bound(args) -> int:
    arc = _resolve_arc(args)
    fn = _resolve_function(args, arc)
    nodes = NodeSet.from_params(arc, _resolve_params(args, arc))
    cert = dd_bound_certificate(fn, arc, nodes, grid=args.grid)
    payload = cert.to_dict()
    d = dd_lagrange(fn, nodes)
    payload["abs_dn"] = abs(d)
    payload["satisfied"] = bool(abs(d) <= cert.product_bound)
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


def _load_config(args) -> ScenarioConfig:
    config = ScenarioConfig.from_file(args.config)
    if args.seed is not None:
        data = config.to_dict()
        data["seed"] = args.seed
        config = ScenarioConfig.from_dict(data)
    return config


def _cmd_verify(args) -> int:
    config = _load_config(args)
    report = run_verification_suite(config)
    text = report.csv_text() if args.format == "csv" else report.json_text()
    _emit(text, args.out)
    bad = report.summary["violations"] + report.summary["failures"]
    return 1 if bad else 0


def _cmd_sweep(args) -> int:
    config = _load_config(args)
    table = sweep_tightness(config)
    _emit(table.csv_text(), args.out)
    return 0


def _cmd_selftest(args) -> int:
    from .functions import conj_on_arc, exp_on_arc

    rng = np.random.default_rng(args.seed)
    failures = []

    def check(name, ok):
        print(f"{'PASS' if ok else 'FAIL'} {name}")
        if not ok:
            failures.append(name)

    circle_arc = make_arc("circle", center=0.0, radius=1.0)
    seg = make_arc("segment", a=0.0, b=1.0)

    # Cross-representation agreement on a curve.
    ok = True
    for _ in range(20):
        n = int(rng.integers(2, 7))
        params = np.sort(rng.random(n + 1))
        while np.diff(params).min() < 1e-3:
            params = np.sort(rng.random(n + 1))
        nodes = NodeSet.from_params(circle_arc, params)
        fn = conj_on_arc(circle_arc)
        d1, d2 = dd_lagrange(fn, nodes), dd_recursive(fn, nodes).top
        ok = ok and abs(d1 - d2) <= 1e-9 * (1 + abs(d1))
    check("cross-representation agreement", ok)

    # Permutation invariance of the weight-sum form.
    ok = True
    fn = exp_on_arc(seg)
    for _ in range(5):
        params = np.sort(rng.random(5))
        while np.diff(params).min() < 1e-3:
            params = np.sort(rng.random(5))
        nodes = NodeSet.from_params(seg, params)
        base = dd_lagrange(fn, nodes)
        for _ in range(5):
            perm = rng.permutation(5)
            ok = ok and abs(dd_lagrange(fn, nodes.permuted(perm)) - base) <= 1e-10 * (1 + abs(base))
    check("permutation invariance", ok)

    # Pivot-product minimizer vs brute force.
    from itertools import permutations

    ok = True
    for _ in range(10):
        pts = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        got = minimize_pivot_product(pts).value
        brute = min(
            stable_product(1 + abs(pts[sig[0]] - pts[sig[kk]]) for kk in range(2, len(pts)))
            for sig in permutations(range(len(pts)))
        )
        ok = ok and got == brute
    check("pivot product minimizer", ok)

    # Sequence recursion never exceeds its closed form.
    ok = True
    for _ in range(200):
        n = int(rng.integers(2, 13))
        res = sequence_bound_recursion(float(rng.random() * 5), rng.random(n - 1) * 3, n)
        ok = ok and res["recursion_value"] <= res["closed_form"] * (1 + 1e-12)
    check("sequence recursion bound", ok)

    # Confluent limit of the two-point partial.
    fn = exp_on_arc(seg)
    limits = [
        abs(d1_partial(fn, seg, 0.4 + h, 0.4, 2) - d1_confluent(fn, seg, 0.4, 2))
        for h in (1e-1, 1e-2, 1e-3)
    ]
    check("confluent limit", limits[0] > limits[1] > limits[2] and limits[2] <= 1e-4)

    # Certified bound holds on a quick trial.
    params = [0.05, 0.3, 0.55, 0.8]
    nodes = NodeSet.from_params(circle_arc, params)
    fn = conj_on_arc(circle_arc)
    cert = dd_bound_certificate(fn, circle_arc, nodes, grid=32)
    check("bound certificate", abs(dd_lagrange(fn, nodes)) <= 1.05 * cert.product_bound)

    return 1 if failures else 0


_COMMANDS = {
    "dd": _cmd_dd,
    "interp": _cmd_interp,
    "bound": _cmd_bound,
    "verify": _cmd_verify,
    "sweep": _cmd_sweep,
    "selftest": _cmd_selftest,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return _COMMANDS[args.command](args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ArcInterpError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
