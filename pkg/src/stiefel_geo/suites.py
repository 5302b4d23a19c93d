"""Seeded verification suites.

Each suite walks the default (n, k, algebra) grid and returns a list of
:class:`Check` records.  Randomness comes from ``SeedSequence((seed, suite,
grid index))`` so that every grid point draws an independent, reproducible
stream regardless of which suites run.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import geodesics as geo
from . import grassmann as gr
from .lie import (
    DistKind,
    Distribution,
    decompose,
    g_basis,
    p_basis,
    p_perp_basis,
    pair,
    proj_g,
    random_carrier_group,
    random_element,
    random_group,
    random_isotropy,
    unpair,
    verify_structure,
)
from .linalg import (
    QMatrix,
    adjoint,
    expm,
    fro_norm,
    i_nk,
    max_abs,
    random_matrix,
    random_skew,
    trace_form,
    unitarity_residual,
    zeros,
)
from .metrics import (
    MetricTag,
    TangentVector,
    ambient_vs_trace_relation,
    geodesic_curvature,
    hamiltonian_ambient,
    lift_tangent,
    quasi_curvature_closed_form,
    sr_curvature_closed_form,
    stiefel_norm,
)
from .scalars import (
    Algebra,
    Quaternion,
    quat_conj,
    quat_mul,
    quat_to_complex_2x2,
    quat_vec_inner,
)

GRID = (
    [(n, k, Algebra.REAL) for n, k in ((3, 1), (4, 2), (5, 2), (5, 3))]
    + [(n, k, Algebra.COMPLEX) for n, k in ((3, 1), (4, 2), (5, 2), (5, 3))]
    + [(2, 1, Algebra.QUATERNION), (3, 1, Algebra.QUATERNION)]
)
STIEFEL_KINDS = (DistKind.REDUCED, DistKind.ORTHOGONAL, DistKind.QUASIGEODESIC)
SUITES = ("structure", "horizontality", "isometry", "curvature", "euler-lagrange",
          "grassmann", "ode-oracle", "quaternion-embed")


@dataclass
class Check:
    """One verification outcome.

    ``mode="max"`` passes when the largest residual is below ``tol``;
    ``mode="min"`` passes when the largest observed value exceeds ``tol``
    (used for "there exists an instance where ..." statements).
    """

    name: str
    tol: float
    mode: str = "max"
    trials: int = 0
    value: float = 0.0

    def add(self, v: float, count: int = 1):
        self.trials += count
        v = float(v)
        if math.isnan(v):
            v = math.inf
        self.value = max(self.value, v)

    @property
    def passed(self) -> bool:
        if self.trials == 0:
            return False
        return self.value < self.tol if self.mode == "max" else self.value > self.tol

    def report(self, seed: int) -> dict:
        return {"check": self.name, "trials": self.trials, "maxResidual": self.value,
                "pass": self.passed, "seed": seed}


class Checks(dict):
    def new(self, name: str, tol: float, mode: str = "max") -> Check:
        c = Check(name, tol, mode)
        self[name] = c
        return c


def rng_for(seed: int, suite: str, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((seed, SUITES.index(suite), index)))


def grid_points(grid=None):
    for idx, (n, k, alg) in enumerate(grid or GRID):
        yield idx, n, k, alg


# --- random data --------------------------------------------------------

def random_sr_data(rng, d: Distribution, scale: float = 1.0):
    pp = random_element(rng, p_basis(d), scale)
    perp = p_perp_basis(d)
    pperp = random_element(rng, perp, scale) if perp else zeros((d.size, d.size), d.algebra)
    return pp, pperp


def random_tangent(rng, n: int, k: int, alg: str, a_zero: bool = False):
    """(g, X, Xdot) with Xdot = g W I_nk for a random W in the reduced p."""
    d = Distribution(DistKind.REDUCED, n, k, alg)
    g = random_group(rng, n, alg)
    basis = p_basis(d)
    if a_zero:
        basis = [b for b in basis if max_abs(b[:k, :k]) == 0]
    w = random_element(rng, basis)
    x = g @ i_nk(n, k, alg)
    return g, x, g @ w @ i_nk(n, k, alg)


def _to_g(x, d: Distribution):
    """Nearest carrier-algebra element to a finite-difference estimate."""
    x = (x - adjoint(x)) * 0.5
    if d.is_pair:
        top, bottom = unpair(x, d.n)
        return pair(proj_g(top), proj_g(bottom))
    return proj_g(x)


def _blocks(rng, n, k, alg, scale=1.0):
    a = random_skew(rng, k, alg) * scale
    b = random_matrix(rng, (k, n - k), alg) * scale
    return a, b


# --- suites -------------------------------------------------------------

def suite_structure(seed: int, trials: int, grid=None) -> list[Check]:
    checks = Checks()
    names = ("p_k_in_p", "k_in_pp", "bracket_generating", "direct_sum")
    for kind in STIEFEL_KINDS + (DistKind.GRASSMANN,):
        for name in names:
            checks.new(f"structure/{kind.value}/{name}", 1e-10 if name != "bracket_generating" else 0.5)
    for _, n, k, alg in grid_points(grid):
        for kind in STIEFEL_KINDS + (DistKind.GRASSMANN,):
            rep = verify_structure(Distribution(kind, n, k, alg))
            for name in names:
                checks[f"structure/{kind.value}/{name}"].add(rep.checks[name]["residual"])
    return list(checks.values())


def suite_horizontality(seed: int, trials: int, grid=None) -> list[Check]:
    checks = Checks()
    exact = checks.new("horizontality/exact-control", 1e-10)
    speed = checks.new("horizontality/constant-speed", 1e-12)
    pairing = checks.new("horizontality/perp-pairing", 1e-10)
    fdvel = checks.new("horizontality/fd-velocity", 1e-5)
    fdk = checks.new("horizontality/fd-k-component", 1e-5)
    fiber = checks.new("horizontality/fiber-invariance", 1e-10)
    ts = np.linspace(0.0, 2.0, 10)
    h = geo.FD_STEP_1
    for idx, n, k, alg in grid_points(grid):
        rng = rng_for(seed, "horizontality", idx)
        for kind in STIEFEL_KINDS:
            d = Distribution(kind, n, k, alg)
            perp = p_perp_basis(d)
            for _ in range(trials):
                pp, pperp = random_sr_data(rng, d, 0.5)
                g0 = random_carrier_group(rng, d)
                u0 = math.sqrt(trace_form(pp, pp))
                for t in ts:
                    u = geo.extremal_control(pp, pperp, t, d)
                    exact.add(max_abs(decompose(u, d).k))
                    speed.add(abs(math.sqrt(max(trace_form(u, u), 0.0)) - u0))
                    pairing.add(max((abs(trace_form(u, b)) for b in perp), default=0.0))
                    g = geo.sr_geodesic(g0, pp, pperp, t, d)
                    gdot = (geo.sr_geodesic(g0, pp, pperp, t + h, d)
                            - geo.sr_geodesic(g0, pp, pperp, t - h, d)) * (1 / (2 * h))
                    fdvel.add(max_abs(gdot - g @ u))
                    fdk.add(max_abs(decompose(_to_g(adjoint(g) @ gdot, d), d).k))
                kel = random_isotropy(rng, d)
                kinv = adjoint(kel)
                c1 = geo.sr_curve(d, g0, pp, pperp)
                c2 = geo.sr_curve(d, g0 @ kel, kinv @ pp @ kel, kinv @ pperp @ kel)
                for t in ts[::3]:
                    fiber.add(max(max_abs(adjoint(c1.lift.at(t)) @ c2.lift.at(t) - kel),
                                  max_abs(c1.point(t) - c2.point(t))))
    return list(checks.values())


def suite_isometry(seed: int, trials: int, grid=None) -> list[Check]:
    checks = Checks()
    rq = checks.new("isometry/reduced=quasigeodesic", 1e-12)
    ro = checks.new("isometry/reduced-vs-orthogonal-relative-gap", 0.1, mode="min")
    pos = checks.new("isometry/positivity", 0.0, mode="min")
    rel = checks.new("isometry/ambient-trace-relation", 1e-12)
    lift = checks.new("isometry/lift-roundtrip", 1e-12)
    sym = checks.new("isometry/symmetry", 1e-12)
    collapse = checks.new("isometry/k1-collapse", 1e-12)
    ham = checks.new("isometry/hamiltonian-normalization", 1e-12)
    pos.value = math.inf  # tracks the smallest norm ratio observed below
    min_ratio = math.inf
    for idx, n, k, alg in grid_points(grid):
        rng = rng_for(seed, "isometry", idx)
        dr = Distribution(DistKind.REDUCED, n, k, alg)
        for _ in range(trials):
            g, x, xdot = random_tangent(rng, n, k, alg)
            v = TangentVector(x, xdot)
            vals = {m: stiefel_norm(v, m, g) for m in
                    (MetricTag.REDUCED, MetricTag.QUASIGEODESIC, MetricTag.ORTHOGONAL, MetricTag.AMBIENT)}
            red = vals[MetricTag.REDUCED]
            rq.add(abs(red ** 2 - vals[MetricTag.QUASIGEODESIC] ** 2))
            ro.add(abs(red ** 2 - vals[MetricTag.ORTHOGONAL] ** 2) / red ** 2)
            min_ratio = min(min_ratio, min(vals.values()) / fro_norm(xdot))
            w = lift_tangent(v, g)
            lift.add(max_abs(g @ w @ i_nk(n, k, alg) - xdot))
            u1 = random_element(rng, p_basis(dr))
            u2 = random_element(rng, p_basis(dr))
            lhs, rhs = ambient_vs_trace_relation(u1, u2, k)
            rel.add(abs(lhs - rhs))
            sym.add(abs(ambient_vs_trace_relation(u2, u1, k)[0] - lhs))
            sym.add(abs(trace_form(u1, u2) - trace_form(u2, u1)))
            a, b = _blocks(rng, n, k, alg)
            lhs, rhs = hamiltonian_ambient(a, b)
            ham.add(abs(lhs - rhs))
        if k == 1:
            for _ in range(trials):
                g, x, xdot = random_tangent(rng, n, k, alg, a_zero=True)
                v = TangentVector(x, xdot)
                collapse.add(abs(stiefel_norm(v, MetricTag.REDUCED, g) ** 2
                                 - stiefel_norm(v, MetricTag.AMBIENT) ** 2))
    pos.value = min_ratio
    pos.trials = rq.trials
    return list(checks.values())


def suite_curvature(seed: int, trials: int, grid=None) -> list[Check]:
    checks = Checks()
    quasi_std = checks.new("curvature/quasi-constancy", 1e-7)
    quasi_cf = checks.new("curvature/quasi-closed-form", 1e-6)
    quasi_deg = checks.new("curvature/quasi-degenerate-zero", 1e-6)
    quasi_pos = checks.new("curvature/quasi-nondegenerate-positive", 1e-3, mode="min")
    sr_std = checks.new("curvature/sr-constancy", 1e-7)
    sr_cf = checks.new("curvature/sr-closed-form", 1e-6)
    geod = checks.new("curvature/riemannian-geodesic-zero", 1e-6)
    ts = np.linspace(0.0, 2.0, 10)
    n_trials = max(1, trials // 5)
    for idx, n, k, alg in grid_points(grid):
        rng = rng_for(seed, "curvature", idx)
        for _ in range(n_trials):
            r, s = random_group(rng, n, alg), random_group(rng, k, alg)
            a, b = _blocks(rng, n, k, alg)
            q = geo.quasi_geodesic_curve(r, s, b, a)
            vals = [geodesic_curvature(q, t) for t in ts]
            quasi_std.add(float(np.std(vals)))
            cf = quasi_curvature_closed_form(a, b)
            quasi_cf.add(max(abs(v - cf) for v in vals))
            quasi_pos.add(cf)
            for qa, qb in ((a * 0.0, b), (a, b * 0.0)):
                if fro_norm(qa) + fro_norm(qb) == 0:
                    continue
                qd = geo.quasi_geodesic_curve(r, s, qb, qa)
                quasi_deg.add(max(quasi_curvature_closed_form(qa, qb), geodesic_curvature(qd, 0.7)))
            for kind in (DistKind.REDUCED, DistKind.ORTHOGONAL, DistKind.GRASSMANN):
                d = Distribution(kind, n, k, alg)
                pp, pk = random_sr_data(rng, d)
                c = geo.sr_curve(d, random_carrier_group(rng, d), pp, pk)
                vals = [geodesic_curvature(c, t) for t in ts]
                sr_std.add(float(np.std(vals)))
                cf = sr_curvature_closed_form(pp, pk)
                sr_cf.add(max(abs(v - cf) for v in vals))
                c0 = geo.sr_curve(d, random_carrier_group(rng, d), pp, pk * 0.0)
                geod.add(max(geodesic_curvature(c0, t) for t in ts[::3]))
            g0 = random_group(rng, n, alg)
            geod.add(max(geodesic_curvature(geo.reduced_geodesic_curve(g0, a, b), t) for t in ts[::3]))
    return list(checks.values())


def suite_euler_lagrange(seed: int, trials: int, grid=None) -> list[Check]:
    checks = Checks()
    amb = checks.new("euler-lagrange/ambient-geodesic", 1e-7)
    red = checks.new("euler-lagrange/reduced-geodesic-differs", 1e-3, mode="min")
    sphere = checks.new("euler-lagrange/sphere", 1e-7)
    ts = np.linspace(0.0, 2.0, 10)
    n_trials = max(1, trials // 5)
    for idx, n, k, alg in grid_points(grid):
        rng = rng_for(seed, "euler-lagrange", idx)
        for _ in range(n_trials):
            g0 = random_group(rng, n, alg)
            a, b = _blocks(rng, n, k, alg)
            c = geo.ambient_curve(g0, a, b, zeros((n - k, n - k), alg)).normalized()
            amb.add(max(geo.euler_lagrange_residual(c, t) for t in ts), len(ts))
            if fro_norm(a) > 0:
                a1 = a * (1.0 / math.sqrt(trace_form(a, a)))
                c = geo.reduced_geodesic_curve(g0, a1, b)
                red.add(max(geo.euler_lagrange_residual(c, t) for t in ts))
            if k == 1:
                bu = b * (1.0 / fro_norm(b))
                c = geo.reduced_geodesic_curve(g0, a * 0.0, bu)
                sphere.add(max(geo.sphere_residual(c, bu, t) for t in ts), len(ts))
    return list(checks.values())


def suite_grassmann(seed: int, trials: int, grid=None) -> list[Check]:
    checks = Checks()
    proj = checks.new("grassmann/quasi-projects-to-geodesic", 1e-10)
    zero = checks.new("grassmann/flat-iff-E=F=0/zero", 1e-6)
    nonzero = checks.new("grassmann/flat-iff-E=F=0/nonzero-min", 1e-6, mode="min")
    const = checks.new("grassmann/curvature-constancy", 1e-7)
    constraint = checks.new("grassmann/constraint-preservation", 1e-9)
    sym_iso = checks.new("grassmann/sigma-isometry", 1e-13)
    sym_rev = checks.new("grassmann/reversal", 1e-10)
    sym_pt = checks.new("grassmann/point-reflection", 1e-10)
    tang = checks.new("grassmann/tangency", 1e-12)
    nontang = checks.new("grassmann/non-tangent-detected", 1e-3, mode="min")
    equiv = checks.new("grassmann/action-equivariance", 1e-10)
    fiber = checks.new("grassmann/fiber-invariance", 1e-12)
    ts = np.linspace(0.0, 2.0, 10)
    n_trials = max(1, trials // 5)
    min_nonzero = math.inf
    for idx, n, k, alg in grid_points(grid):
        rng = rng_for(seed, "grassmann", idx)
        dg = Distribution(DistKind.GRASSMANN, n, k, alg)
        for _ in range(n_trials):
            r, s = random_group(rng, n, alg), random_group(rng, k, alg)
            a, b = _blocks(rng, n, k, alg)
            q = geo.quasi_geodesic_curve(r, s, b, a)
            for t in ts:
                ref = gr.grassmann_geodesic(r, b, t).R
                proj.add(max(max_abs(gr.project_stiefel_curve(q, t).R - ref),
                             max_abs(gr.project_stiefel(q.point(t)).R - ref)))
            zero.add(max(gr.grassmann_curvature(q, t) for t in ts[::3]))
            e, f = random_skew(rng, k, alg), random_skew(rng, n - k, alg)
            c = geo.sr_qg_curve(r, s, a, b, e, f)
            vals = [gr.grassmann_curvature(c, t) for t in ts]
            const.add(float(np.std(vals)))
            min_nonzero = min(min_nonzero, min(vals))
            nonzero.trials += 1
            cc = geo.grassmann_curve(r, a, b, f)
            for t in np.linspace(0.0, 5.0, 11):
                constraint.add(cc.constraint_residual(t))
            pp, pk = random_sr_data(rng, dg)
            rep = gr.geodesic_symmetry_check(r, pp, pk, float(rng.uniform(-2, 2)), k)
            sym_iso.add(rep["checks"]["sigma_isometry"])
            sym_rev.add(rep["checks"]["reversal"])
            sym_pt.add(rep["checks"]["point_reflection"])
            r0 = gr.act(r, gr.base_point(n, k, alg))
            tang.add(gr.anticommutator_residual(r0, gr.tangent_from_block(r, b)))
            x = random_element(rng, g_basis(dg))
            nontang.add(gr.anticommutator_residual(r0, r @ x @ adjoint(r)))
            o = random_group(rng, n, alg)
            qpt = q.point(0.4)
            equiv.add(max_abs(gr.act(o, gr.project_stiefel(qpt)).R - gr.project_stiefel(o @ qpt).R))
            fiber.add(max_abs(gr.project_stiefel(qpt @ s).R - gr.project_stiefel(qpt).R))
    nonzero.value = min_nonzero
    return list(checks.values())


def suite_ode_oracle(seed: int, trials: int, grid=None) -> list[Check]:
    checks = Checks()
    agree = checks.new("ode-oracle/rk4-1000-vs-closed-form", 1e-9)
    order = checks.new("ode-oracle/order-4-ratio-deviation", 1.0)
    still = checks.new("ode-oracle/zero-control-stays", 1e-12)
    for idx, n, k, alg in grid_points(grid):
        rng = rng_for(seed, "ode-oracle", idx)
        g0 = random_group(rng, n, alg)
        at, et = random_skew(rng, k, alg) * 2.0, random_skew(rng, k, alg) * 2.0
        bt, f = random_matrix(rng, (k, n - k), alg) * 2.0, random_skew(rng, n - k, alg) * 2.0
        ref = geo.horizontal_curve_closed_form(g0, at, et, bt, f, 1.0)
        agree.add(max_abs(geo.horizontal_lift_ode(g0, at, et, bt, f, 1.0, 1000) - ref))
        errs = [max_abs(geo.horizontal_lift_ode(g0, at, et, bt, f, 1.0, s) - ref) for s in (200, 400, 800)]
        for e1, e2 in zip(errs, errs[1:]):
            # error ratio on step doubling should be 16 within a factor of 2: |log2(ratio/16)| < 1
            order.add(abs(math.log2((e1 / e2) / 16.0)) if e2 > 0 else math.inf)
        z = zeros((k, k), alg)
        still.add(max_abs(geo.horizontal_lift_ode(g0, z, z, bt * 0.0, f * 0.0, 1.0, 10) - g0))
    return list(checks.values())


def suite_quaternion_embed(seed: int, trials: int, grid=None) -> list[Check]:
    checks = Checks()
    hom = checks.new("quaternion-embed/homomorphism", 1e-13)
    norm = checks.new("quaternion-embed/norm-multiplicative", 1e-13)
    conj = checks.new("quaternion-embed/conj-to-adjoint", 1e-13)
    inner = checks.new("quaternion-embed/inner-product-identities", 1e-13)
    expc = checks.new("quaternion-embed/expm-pullback", 1e-10)
    unit = checks.new("quaternion-embed/expm-unitary", 1e-10)
    det = checks.new("quaternion-embed/su-determinant", 1e-9)
    group = checks.new("quaternion-embed/expm-one-parameter", 1e-10)
    rng = np.random.default_rng(np.random.SeedSequence((seed, SUITES.index("quaternion-embed"), 0)))
    count = max(trials, 1) * 20
    for _ in range(count):
        qa, qb = Quaternion(*rng.standard_normal(4)), Quaternion(*rng.standard_normal(4))
        hom.add(np.abs(quat_to_complex_2x2(quat_mul(qa, qb))
                       - quat_to_complex_2x2(qa) @ quat_to_complex_2x2(qb)).max())
        norm.add(abs(abs(quat_mul(qa, qb)) - abs(qa) * abs(qb)))
        conj.add(np.abs(quat_to_complex_2x2(quat_conj(qa)) - quat_to_complex_2x2(qa).conj().T).max())
    for _ in range(max(trials, 1)):
        v = [Quaternion(*rng.standard_normal(4)) for _ in range(5)]
        w = [Quaternion(*rng.standard_normal(4)) for _ in range(5)]
        al = Quaternion(*rng.standard_normal(4))
        lhs1 = quat_vec_inner([quat_mul(x, al) for x in v], w)
        rhs1 = quat_mul(quat_conj(al), quat_vec_inner(v, w))
        lhs2 = quat_vec_inner(v, [quat_mul(x, al) for x in w])
        rhs2 = quat_mul(quat_vec_inner(v, w), al)
        lhs3, rhs3 = quat_vec_inner(v, w), quat_conj(quat_vec_inner(w, v))
        inner.add(max(abs(lhs1 - rhs1), abs(lhs2 - rhs2), abs(lhs3 - rhs3)))
    sizes = [(n, alg) for alg in (Algebra.REAL, Algebra.COMPLEX) for n in (3, 4, 5)]
    sizes += [(2, Algebra.QUATERNION), (3, Algebra.QUATERNION)]
    for n, alg in sizes:
        for _ in range(max(trials, 1)):
            m = random_skew(rng, n, alg)
            e = expm(m)
            unit.add(unitarity_residual(e))
            s_, t_ = rng.uniform(-2, 2, size=2)
            group.add(max_abs(expm(m, s_ + t_) - expm(m, s_) @ expm(m, t_)))
            if isinstance(m, QMatrix):
                expc.add(np.abs(e.to_complex() - _expm_skew_eig(m.to_complex())).max())
            if alg is Algebra.COMPLEX:
                det.add(abs(np.linalg.det(e) - 1))
    return list(checks.values())


def _expm_skew_eig(m: np.ndarray) -> np.ndarray:
    """exp(M) for skew-Hermitian M from the eigendecomposition of the Hermitian iM."""
    w, v = np.linalg.eigh(1j * m)
    return (v * np.exp(-1j * w)) @ v.conj().T


SUITE_FUNCS = {
    "structure": suite_structure,
    "horizontality": suite_horizontality,
    "isometry": suite_isometry,
    "curvature": suite_curvature,
    "euler-lagrange": suite_euler_lagrange,
    "grassmann": suite_grassmann,
    "ode-oracle": suite_ode_oracle,
    "quaternion-embed": suite_quaternion_embed,
}


def run_suite(name: str, seed: int, trials: int, grid=None, tol: float | None = None) -> list[Check]:
    if name not in SUITE_FUNCS:
        raise KeyError(name)
    checks = SUITE_FUNCS[name](seed, trials, grid)
    if tol is not None:
        for c in checks:
            if c.mode == "max":
                c.tol = tol
    return checks
