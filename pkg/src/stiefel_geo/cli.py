"""stiefel-geo: sample curves, run verification suites, compare metrics.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import suites
from .geodesics import CurveSpec
from .grassmann import grassmann_curvature
from .linalg import adjoint, algebra_of, matrix_from_json, matrix_to_json
from .metrics import STIEFEL_METRICS, TangentVector, geodesic_curvature, stiefel_norm
from .scalars import Algebra

SEED_ENV = "STIEFEL_GEO_SEED"


class ConfigError(Exception):
    pass


# --- helpers ------------------------------------------------------------

def _seed(args) -> int:
    env = os.environ.get(SEED_ENV)
    if env is not None and env != "":
        try:
            value = int(env)
        except ValueError:
            raise ConfigError(f"{SEED_ENV} must be an unsigned integer, got {env!r}") from None
    else:
        value = args.seed
    if value < 0:
        raise ConfigError("seed must be unsigned")
    return value


def _load_json(args):
    if args.spec and args.inline:
        raise ConfigError("give either --spec or --inline, not both")
    try:
        if args.spec:
            with open(args.spec) as fh:
                return json.load(fh)
        if args.inline:
            return json.loads(args.inline)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read spec: {exc}") from None
    return None


def _curve_spec(args) -> CurveSpec:
    obj = _load_json(args)
    if obj is None:
        raise ConfigError("a curve spec is required (--spec FILE or --inline JSON)")
    try:
        return CurveSpec.from_json(obj)
    except (ValueError, TypeError, KeyError) as exc:
        raise ConfigError(f"invalid curve spec: {exc}") from None


def _times(args) -> np.ndarray:
    if args.samples < 1:
        raise ConfigError("--samples must be at least 1")
    if args.samples == 1:
        return np.array([args.t0])
    return np.linspace(args.t0, args.t1, args.samples)


def flatten_columns(prefix: str, shape, algebra: Algebra) -> list[str]:
    """Row-major column names; complex entries expand to re,im and quaternions to q0..q3."""
    suffix = {Algebra.REAL: [""], Algebra.COMPLEX: ["_re", "_im"],
              Algebra.QUATERNION: ["_q0", "_q1", "_q2", "_q3"]}[algebra]
    return [f"{prefix}[{i},{j}]{s}" for i in range(shape[0]) for j in range(shape[1]) for s in suffix]


def flatten_values(m) -> list[float]:
    alg = algebra_of(m)
    if alg is Algebra.QUATERNION:
        return [float(v) for v in m.components.reshape(-1)]
    arr = np.asarray(m)
    if alg is Algebra.COMPLEX:
        return [float(v) for v in np.stack([arr.real, arr.imag], axis=-1).reshape(-1)]
    return [float(v) for v in arr.reshape(-1)]


def _fmt(v) -> str:
    if v is None:
        return ""
    return repr(float(v) + 0.0)


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) if not isinstance(v, str) else v for v in row])
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# --- commands -----------------------------------------------------------

def cmd_sample(args) -> int:
    spec = _curve_spec(args)
    try:
        curve = spec.build()
    except ValueError as exc:
        raise ConfigError(f"cannot build curve: {exc}") from None
    ts = _times(args)
    records = []
    for t in ts:
        rec = {"t": float(t), "point": curve.point(t), "residual": curve.constraint_residual(t)}
        if args.velocity:
            rec["velocity"] = curve.velocity(t)
        records.append(rec)
    if args.format == "json":
        out = {"spec": spec.to_json(), "samples": [
            {k: (matrix_to_json(v) if k in ("point", "velocity") else v) for k, v in rec.items()}
            for rec in records]}
        _emit(_json(out), args.output)
        return 0
    shape, alg = records[0]["point"].shape, spec.dist.algebra
    header = ["t"] + flatten_columns("x", shape, alg)
    if args.velocity:
        header += flatten_columns("v", shape, alg)
    header.append("residual")
    rows = []
    for rec in records:
        row = [rec["t"]] + flatten_values(rec["point"])
        if args.velocity:
            row += flatten_values(rec["velocity"])
        rows.append(row + [rec["residual"]])
    _emit(_csv(header, rows), args.output)
    return 0


def read_samples_json(obj: dict):
    """Inverse of the JSON sample format: (CurveSpec, [(t, point, velocity or None, residual)])."""
    spec = CurveSpec.from_json(obj["spec"])
    out = []
    for rec in obj["samples"]:
        vel = matrix_from_json(rec["velocity"]) if "velocity" in rec else None
        out.append((float(rec["t"]), matrix_from_json(rec["point"]), vel, float(rec["residual"])))
    return spec, out


def cmd_verify(args) -> int:
    seed = _seed(args)
    names = list(suites.SUITES) if args.suite == "all" else [args.suite]
    if args.trials < 1:
        raise ConfigError("--trials must be at least 1")
    reports = []
    for name in names:
        for check in suites.run_suite(name, seed, args.trials, tol=args.tol):
            reports.append(check.report(seed))
    ok = all(r["pass"] for r in reports)
    if args.format == "csv":
        header = ["check", "trials", "maxResidual", "pass", "seed"]
        rows = [[r["check"], str(r["trials"]), r["maxResidual"], str(r["pass"]).lower(), str(r["seed"])]
                for r in reports]
        _emit(_csv(header, rows), args.output)
    else:
        _emit(_json({"pass": ok, "seed": seed, "checks": reports}), args.output)
    for r in reports:
        if not r["pass"]:
            print(f"FAIL {r['check']}: {r['maxResidual']:.3e}", file=sys.stderr)
    return 0 if ok else 1


def _parse_algebra(value: str) -> Algebra:
    try:
        return Algebra.parse(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def cmd_compare_metrics(args) -> int:
    seed = _seed(args)
    obj = _load_json(args) or {}
    n, k = int(obj.get("n", args.n)), int(obj.get("k", args.k))
    alg = Algebra.parse(obj.get("algebra", args.algebra.value))
    if not 1 <= k <= n:
        raise ConfigError("need 1 <= k <= n")
    rng = np.random.default_rng(np.random.SeedSequence((seed, n, k, list(Algebra).index(alg))))
    tol = 1e-12 if args.tol is None else args.tol
    rows = []
    for trial in range(args.trials):
        g, x, xdot = suites.random_tangent(rng, n, k, alg, a_zero=args.a_zero)
        v = TangentVector(x, xdot)
        vals = [stiefel_norm(v, m, g) for m in STIEFEL_METRICS]
        a_norm = math.sqrt(sum(c * c for c in flatten_values((adjoint(g) @ xdot)[:k, :])))
        rows.append([trial] + vals + [a_norm])
    red_quasi = max(abs(r[1] - r[2]) for r in rows)
    with_a = [r for r in rows if r[5] > 1e-12]
    red_orth = min((abs(r[1] - r[3]) for r in with_a), default=None)
    rel_orth = max((abs(r[1] - r[3]) / r[1] for r in with_a), default=None)
    summary = {"maxReducedMinusQuasi": red_quasi, "minReducedMinusOrthogonal": red_orth,
               "maxRelativeReducedMinusOrthogonal": rel_orth, "trials": args.trials,
               "seed": seed, "n": n, "k": k, "algebra": alg.value, "pass": red_quasi < tol}
    names = [m.value for m in STIEFEL_METRICS]
    if args.format == "json":
        out = {"rows": [dict(zip(["trial"] + names + ["normA"], r)) for r in rows], "summary": summary}
        _emit(_json(out), args.output)
    else:
        text = _csv(["trial"] + names + ["normA"], [[str(r[0])] + r[1:] for r in rows])
        _emit(text, args.output)
        print(json.dumps(summary, sort_keys=True), file=sys.stderr)
    return 0 if summary["pass"] else 1


def cmd_curvature(args) -> int:
    spec = _curve_spec(args)
    try:
        curve = spec.build()
    except ValueError as exc:
        raise ConfigError(f"cannot build curve: {exc}") from None
    if curve.metric_lift() is None:
        raise ConfigError(f"{spec.family} curve has no horizontal lift; curvature is undefined")
    has_grass = curve.grassmann is not None and not curve.on_grassmann
    rows = []
    for t in _times(args):
        kappa = geodesic_curvature(curve, t)
        gk = grassmann_curvature(curve, t) if has_grass else None
        rows.append([float(t), kappa, gk])
    ks = np.array([r[1] for r in rows])
    summary = {"mean": float(ks.mean()), "std": float(ks.std()), "max": float(ks.max()),
               "min": float(ks.min())}
    if args.format == "json":
        out = {"spec": spec.to_json(), "summary": summary,
               "rows": [{"t": r[0], "curvature": r[1], "grassmannCurvature": r[2]} for r in rows]}
        _emit(_json(out), args.output)
    else:
        _emit(_csv(["t", "curvature", "grassmann_curvature"], rows), args.output)
    return 0


# --- parser -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--spec", metavar="FILE", help="JSON spec file")
    src.add_argument("--inline", metavar="JSON", help="JSON spec given inline")
    common.add_argument("--seed", type=int, default=0, help=f"RNG seed (env {SEED_ENV} overrides)")
    common.add_argument("--trials", type=int, default=20)
    common.add_argument("--tol", type=float, default=None, help="override pass thresholds")
    common.add_argument("--samples", type=int, default=11)
    common.add_argument("--t0", type=float, default=0.0)
    common.add_argument("--t1", type=float, default=1.0)
    common.add_argument("--output", metavar="FILE", help="write here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), default=None)

    parser = argparse.ArgumentParser(prog="stiefel-geo", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", parents=[common], help="sample a closed-form curve")
    p.add_argument("--velocity", action="store_true", help="include velocity columns")
    p.set_defaults(func=cmd_sample, default_format="csv")

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("--suite", choices=list(suites.SUITES) + ["all"], default="all")
    p.set_defaults(func=cmd_verify, default_format="json")

    p = sub.add_parser("compare-metrics", parents=[common], help="four Stiefel metrics on shared tangents")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--algebra", type=_parse_algebra, default=Algebra.REAL)
    p.add_argument("--a-zero", action="store_true", help="restrict to tangents with A = 0")
    p.set_defaults(func=cmd_compare_metrics, default_format="csv")

    p = sub.add_parser("curvature", parents=[common], help="geodesic curvature along a curve")
    p.set_defaults(func=cmd_curvature, default_format="csv")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = args.default_format
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
