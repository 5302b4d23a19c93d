"""Closed-form curves on Stiefel and Grassmann manifolds.

Every curve here is a product of constant matrices and one-parameter
exponentials, X(t) = C_0 exp(t K_1) C_1 exp(t K_2) ...  Keeping that form
around buys two things:

* reparametrization t -> ct is a rescaling of the generators, and
* X(t + h) - X(t) can be expanded factor by factor with expm1, which keeps
  finite-difference stencils free of cancellation (the second difference at
  h = 1e-4 would otherwise sit on a 1e-8 rounding floor).

Curves also carry a horizontal lift g(t) with its control U(t) = g^-1 g'(t)
in closed form; the metric and curvature code consumes those.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .lie import (
    DistKind,
    Distribution,
    check_carrier,
    embed_k,
    pair,
    perp_residual,
    p_residual,
    proj_g,
    unpair,
)
from .linalg import (
    adjoint,
    algebra_of,
    as_algebra,
    block_diag,
    expm,
    expm1,
    eye,
    fro_norm,
    i_nk,
    matrix_from_json,
    matrix_to_json,
    max_abs,
    zeros,
)
from .metrics import MetricTag, grassmann_base, p_norm
from .scalars import Algebra

MEMBERSHIP_TOL = 1e-10
FD_STEP_1 = 1e-6
FD_STEP_2 = 1e-4


# --- lifts --------------------------------------------------------------

@dataclass(frozen=True)
class ExpLift:
    """g(t) = g0 exp(tM) exp(-tN), with control U(t) = exp(tN) (M - N) exp(-tN)."""

    dist: Distribution
    g0: object
    m: object
    nmat: object

    def at(self, t: float):
        return self.g0 @ expm(self.m, t) @ expm(self.nmat, -t)

    def control(self, t: float):
        e = expm(self.nmat, t)
        return e @ (self.m - self.nmat) @ adjoint(e)

    def scaled(self, c: float) -> ExpLift:
        return replace(self, m=self.m * c, nmat=self.nmat * c)


def _embed_algebra(u, n: int):
    k = u.shape[0]
    return block_diag(u, zeros((n - k, n - k), algebra_of(u)))


@dataclass(frozen=True)
class ReducedView:
    """Reduced-distribution lift h = r emb(s)* of a lift on the pair group.

    The control becomes Ad_emb(s) (U_1 - emb(U_2)), which lies in the reduced
    p whenever (U_1, U_2) lies in the quasi-geodesic p.
    """

    base: ExpLift

    @property
    def dist(self) -> Distribution:
        return self.base.dist.with_kind(DistKind.REDUCED)

    def at(self, t: float):
        n = self.base.dist.n
        r, s = unpair(self.base.at(t), n)
        return r @ adjoint(embed_k(s, n))

    def control(self, t: float):
        n = self.base.dist.n
        _, s = unpair(self.base.at(t), n)
        u1, u2 = unpair(self.base.control(t), n)
        e = embed_k(s, n)
        return e @ (u1 - _embed_algebra(u2, n)) @ adjoint(e)

    def scaled(self, c: float) -> ReducedView:
        return ReducedView(self.base.scaled(c))


# --- curves -------------------------------------------------------------

def _prod(mats):
    out = mats[0]
    for m in mats[1:]:
        out = out @ m
    return out


@dataclass(frozen=True)
class Curve:
    """A closed-form curve X(t) = product of constant and exp(tK) factors.

    ``factors`` is a tuple of ("c", M) and ("e", K) entries.  ``grassmann``
    holds (g0, Phi) with 2 X X* - I = g0 exp(t Phi) D exp(-t Phi) g0*.
    """

    family: str
    n: int
    k: int
    algebra: Algebra
    factors: tuple
    metric: MetricTag
    lift: object = None
    grassmann: tuple | None = None
    on_grassmann: bool = False
    blocks: dict = field(default_factory=dict, compare=False)

    def _at(self, t: float) -> list:
        return [m if kind == "c" else expm(m, t) for kind, m in self.factors]

    def point(self, t: float):
        return _prod(self._at(t))

    def increment(self, t: float, h: float):
        """X(t + h) - X(t) without subtracting two O(1) matrices."""
        same = delta = None
        for kind, m in self.factors:
            if kind == "c":
                f, df = m, None
            else:
                f = expm(m, t)
                df = f @ expm1(m, h)
            if same is None:
                same, delta = f, df
                continue
            nd = None if delta is None else delta @ (f if df is None else f + df)
            if df is not None:
                nd = same @ df if nd is None else nd + same @ df
            same, delta = same @ f, nd
        if delta is None:
            return same * 0.0
        return delta

    def velocity(self, t: float, h: float = FD_STEP_1):
        return (self.increment(t, h) + self.increment(t - h, h)) * (1.0 / (2 * h))

    def acceleration(self, t: float, h: float = FD_STEP_2):
        return (self.increment(t, h) - self.increment(t - h, h)) * (1.0 / (h * h))

    def constraint_residual(self, t: float) -> float:
        x = self.point(t)
        if self.on_grassmann:
            return max(max_abs(x @ x - eye(self.n, self.algebra)), max_abs(x - adjoint(x)))
        return max_abs(adjoint(x) @ x - eye(self.k, self.algebra))

    def scaled(self, c: float) -> Curve:
        """The reparametrization t -> c t."""
        factors = tuple((kind, m if kind == "c" else m * c) for kind, m in self.factors)
        lift = None if self.lift is None else self.lift.scaled(c)
        grass = None if self.grassmann is None else (self.grassmann[0], self.grassmann[1] * c)
        return replace(self, factors=factors, lift=lift, grassmann=grass)

    def speed(self) -> float:
        """Constant speed |U| under the curve's metric."""
        if self.lift is None:
            raise ValueError(f"{self.family} curve has no horizontal lift")
        return p_norm(self.lift.control(0.0), self.metric, self.k)

    def normalized(self) -> Curve:
        s = self.speed()
        if s == 0:
            return self
        return self.scaled(1.0 / s)

    def metric_lift(self):
        """The lift whose split carries the curvature computation.

        Quasi-geodesic curves are measured through the reduced view, which is
        an isometry of the two metrics.
        """
        if self.lift is None:
            return None
        if self.metric is MetricTag.QUASIGEODESIC and isinstance(self.lift, ExpLift):
            return ReducedView(self.lift)
        return self.lift


@dataclass(frozen=True)
class CurveSample:
    t: float
    point: object
    velocity: object = None


def sample(curve: Curve, ts, with_velocity: bool = False) -> list[CurveSample]:
    return [CurveSample(float(t), curve.point(t), curve.velocity(t) if with_velocity else None)
            for t in ts]


# --- block helpers ------------------------------------------------------

def _skew_check(*blocks):
    for b in blocks:
        if b is not None and b.shape[0] and max_abs(b + adjoint(b)) > 1e-10:
            raise ValueError("diagonal blocks must be skew-adjoint")


def _coerce(alg, *mats):
    return [None if m is None else as_algebra(m, alg) for m in mats]


def _full(a, b, c):
    """[[A, B], [-B*, C]] without trace checks."""
    k, m = b.shape
    if a.shape != (k, k) or c.shape != (m, m):
        raise ValueError(f"inconsistent block shapes A{a.shape}, B{b.shape}, C{c.shape}")
    _skew_check(a, c)
    out = block_diag(a, c)
    out[:k, k:] = b
    out[k:, :k] = -adjoint(b)
    return out


def _algebra(*mats) -> Algebra:
    algs = {algebra_of(m) for m in mats if m is not None}
    for a in (Algebra.QUATERNION, Algebra.COMPLEX, Algebra.REAL):
        if a in algs:
            return a
    return Algebra.REAL


def _in_g(m) -> bool:
    return algebra_of(m) is not Algebra.COMPLEX or abs(np.trace(m)) <= 1e-12


# --- master sub-Riemannian geodesic -------------------------------------

def _check_sr(d: Distribution, pp, pperp, tol: float = MEMBERSHIP_TOL):
    check_carrier(pp, d)
    check_carrier(pperp, d)
    if p_residual(pp, d) > tol:
        raise ValueError(f"P_p is not in p (residual {p_residual(pp, d):.2e})")
    if perp_residual(pperp, d) > tol:
        raise ValueError(f"P_perp is not in p-perp (residual {perp_residual(pperp, d):.2e})")


def sr_geodesic(g0, pp, pperp, t: float, d: Distribution):
    """g0 exp(t (P_p + P_perp)) exp(-t P_perp)."""
    _check_sr(d, pp, pperp)
    return g0 @ expm(pp + pperp, t) @ expm(pperp, -t)


def extremal_control(pp, pperp, t: float, d: Distribution | None = None):
    """exp(t P_perp) P_p exp(-t P_perp)."""
    if d is not None:
        _check_sr(d, pp, pperp)
    e = expm(pperp, t)
    return e @ pp @ adjoint(e)


def _grassmann_factors(g0, phi, n, k, alg):
    dm = grassmann_base(n, k, alg)
    return (("c", g0), ("e", phi), ("c", dm), ("e", -phi), ("c", adjoint(g0)))


def sr_curve(d: Distribution, g0, pp, pperp, blocks: dict | None = None) -> Curve:
    """Projection of the master geodesic to St_k^n (or Gr_k^n for the Grassmann split)."""
    _check_sr(d, pp, pperp)
    n, k, alg = d.n, d.k, d.algebra
    m = pp + pperp
    lift = ExpLift(d, g0, m, pperp)
    e = i_nk(n, k, alg)
    if d.kind is DistKind.GRASSMANN:
        factors = _grassmann_factors(g0, m, n, k, alg)
        return Curve("sr", n, k, alg, factors, MetricTag.GRASSMANN, lift, (g0, m), True, blocks or {})
    if d.is_pair:
        r, s = unpair(g0, n)
        m1, m2 = unpair(m, n)
        n1, n2 = unpair(pperp, n)
        factors = (("c", r), ("e", m1), ("e", -n1), ("c", e), ("e", n2), ("e", -m2), ("c", adjoint(s)))
        grass = (r, m1)
    else:
        factors = (("c", g0), ("e", m), ("e", -pperp), ("c", e))
        grass = (g0, m)
    return Curve("sr", n, k, alg, factors, MetricTag(d.kind.value), lift, grass, False, blocks or {})


def sr_blocks_to_carrier(d: Distribution, blocks: dict):
    """(P_p, P_perp) from named blocks.

    reduced:       P_p = [[A, B], [-B*, 0]],          P_perp = diag(0, D)
    orthogonal:    P_p = ([[A, B], [-B*, 0]], -A),    P_perp = (diag(C, D), C)
    quasigeodesic: P_p = ([[0, B], [-B*, 0]], A),     P_perp = (diag(E, F), 0)
    grassmann:     P_p = [[0, B], [-B*, 0]],          P_perp = diag(A, C)
    Missing blocks are zero.
    """
    n, k, alg = d.n, d.k, d.algebra

    def get(name, shape):
        v = blocks.get(name)
        return zeros(shape, alg) if v is None else as_algebra(v, alg)

    kk, mm = (k, k), (n - k, n - k)
    b = get("B", (k, n - k))
    z_k, z_m = zeros(kk, alg), zeros(mm, alg)
    if d.kind is DistKind.REDUCED:
        return _full(get("A", kk), b, z_m), block_diag(z_k, get("D", mm))
    if d.kind is DistKind.GRASSMANN:
        return _full(z_k, b, z_m), block_diag(get("A", kk), get("C", mm))
    if d.kind is DistKind.ORTHOGONAL:
        a, c = get("A", kk), get("C", kk)
        return pair(_full(a, b, z_m), -a), pair(block_diag(c, get("D", mm)), c)
    return (pair(_full(z_k, b, z_m), get("A", kk)),
            pair(block_diag(get("E", kk), get("F", mm)), z_k))


# --- Stiefel families ---------------------------------------------------

def reduced_geodesic_curve(g0, a, b) -> Curve:
    """m(t) = g0 exp(t Omega) I_nk with Omega = [[A, B], [-B*, 0]]."""
    alg = _algebra(g0, a, b)
    g0, a, b = _coerce(alg, g0, a, b)
    k, n = a.shape[0], g0.shape[0]
    omega = _full(a, b, zeros((n - k, n - k), alg))
    d = Distribution(DistKind.REDUCED, n, k, alg)
    lift = ExpLift(d, g0, omega, zeros((n, n), alg)) if _in_g(omega) else None
    factors = (("c", g0), ("e", omega), ("c", i_nk(n, k, alg)))
    return Curve("stiefel", n, k, alg, factors, MetricTag.REDUCED, lift, (g0, omega), False,
                 {"A": a, "B": b})


def stiefel_geodesic_reduced(g0, a, b, t: float):
    return reduced_geodesic_curve(g0, a, b).point(t)


def orthogonal_geodesic_curve(r, s, a, b) -> Curve:
    """m(t) = r exp(t Omega) I_nk exp(tA) s*."""
    alg = _algebra(r, s, a, b)
    r, s, a, b = _coerce(alg, r, s, a, b)
    k, n = a.shape[0], r.shape[0]
    omega = _full(a, b, zeros((n - k, n - k), alg))
    d = Distribution(DistKind.ORTHOGONAL, n, k, alg)
    lift = None
    if _in_g(omega) and _in_g(a):
        lift = ExpLift(d, pair(r, s), pair(omega, -a), zeros((n + k, n + k), alg))
    factors = (("c", r), ("e", omega), ("c", i_nk(n, k, alg)), ("e", a), ("c", adjoint(s)))
    return Curve("stiefel", n, k, alg, factors, MetricTag.ORTHOGONAL, lift, (r, omega), False,
                 {"A": a, "B": b})


def stiefel_geodesic_orthogonal(r, s, a, b, t: float):
    return orthogonal_geodesic_curve(r, s, a, b).point(t)


def sr_qg_curve(r, s, a, b, e, f) -> Curve:
    """r exp(t Phi) diag(exp(-tE) exp(-tA), exp(-tF)) I_nk s*, Phi = [[E, B], [-B*, F]]."""
    alg = _algebra(r, s, a, b, e, f)
    r, s, a, b, e, f = _coerce(alg, r, s, a, b, e, f)
    k, n = a.shape[0], r.shape[0]
    _skew_check(a)
    phi = _full(e, b, f)
    ef = block_diag(e, f)
    d = Distribution(DistKind.QUASIGEODESIC, n, k, alg)
    lift = None
    if all(_in_g(x) for x in (a, e, f)) and _in_g(phi):
        lift = ExpLift(d, pair(r, s), pair(phi, a), pair(ef, zeros((k, k), alg)))
    factors = (("c", r), ("e", phi), ("e", -ef), ("e", -_embed_algebra(a, n)),
               ("c", i_nk(n, k, alg)), ("c", adjoint(s)))
    return Curve("sr", n, k, alg, factors, MetricTag.QUASIGEODESIC, lift, (r, phi), False,
                 {"A": a, "B": b, "E": e, "F": f})


def sr_qg_projection(r, s, a, b, e, f, t: float):
    return sr_qg_curve(r, s, a, b, e, f).point(t)


def quasi_geodesic_curve(r, s, b, a) -> Curve:
    """gamma(t) = r exp(t Psi) I_nk exp(-tA) s*, Psi = [[0, B], [-B*, 0]]."""
    alg = _algebra(r, s, a, b)
    r, s, a, b = _coerce(alg, r, s, a, b)
    k, n = a.shape[0], r.shape[0]
    psi = _full(zeros((k, k), alg), b, zeros((n - k, n - k), alg))
    d = Distribution(DistKind.QUASIGEODESIC, n, k, alg)
    lift = None
    if _in_g(a):
        lift = ExpLift(d, pair(r, s), pair(psi, a), zeros((n + k, n + k), alg))
    factors = (("c", r), ("e", psi), ("c", i_nk(n, k, alg)), ("e", -a), ("c", adjoint(s)))
    return Curve("quasi", n, k, alg, factors, MetricTag.QUASIGEODESIC, lift, (r, psi), False,
                 {"A": a, "B": b})


def quasi_geodesic(r, s, b, a, t: float):
    return quasi_geodesic_curve(r, s, b, a).point(t)


def quasi_geodesic_two_sided(r, s, b, a, t: float):
    """The same curve written as exp(tX) m exp(tY), X = r Psi r*, Y = -s A s*."""
    alg = _algebra(r, s, a, b)
    r, s, a, b = _coerce(alg, r, s, a, b)
    k, n = a.shape[0], r.shape[0]
    psi = _full(zeros((k, k), alg), b, zeros((n - k, n - k), alg))
    m = r @ i_nk(n, k, alg) @ adjoint(s)
    return expm(r @ psi @ adjoint(r), t) @ m @ expm(-1.0 * (s @ a @ adjoint(s)), t)


def qg_geodesic_curve(r, s, a, b) -> Curve:
    """Riemannian geodesic of the quasi-geodesic metric: r exp(t Omega~) I_nk s*,
    Omega~ = [[-A, B], [-B*, 0]] (the master geodesic at E = -A, F = 0)."""
    k = a.shape[0]
    n = r.shape[0]
    alg = _algebra(r, s, a, b)
    curve = sr_qg_curve(r, s, a, b, -1.0 * as_algebra(a, alg), zeros((n - k, n - k), alg))
    return replace(curve, family="stiefel")


def ambient_curve(g0, a, b0, c) -> Curve:
    """X(t) = g0 exp(t(P + Q)) I_nk exp(-tA/2), P + Q = [[A, B0], [-B0*, C]], Q = diag(A/2, C)."""
    alg = _algebra(g0, a, b0, c)
    g0, a, b0, c = _coerce(alg, g0, a, b0, c)
    k, n = a.shape[0], g0.shape[0]
    pq = _full(a, b0, c)
    q = block_diag(a * 0.5, c)
    d = Distribution(DistKind.REDUCED, n, k, alg)
    lift = ExpLift(d, g0, pq, q) if _in_g(pq) and _in_g(q) else None
    factors = (("c", g0), ("e", pq), ("c", i_nk(n, k, alg)), ("e", a * -0.5))
    return Curve("ambient", n, k, alg, factors, MetricTag.AMBIENT, lift, (g0, pq), False,
                 {"A": a, "B": b0, "C": c})


def ambient_geodesic(g0, a, b0, c, t: float):
    return ambient_curve(g0, a, b0, c).point(t)


def grassmann_curve(g0, a, b, c) -> Curve:
    """R(t) = g0 exp(t Phi) D exp(-t Phi) g0*, Phi = [[A, B], [-B*, C]]."""
    alg = _algebra(g0, a, b, c)
    g0, a, b, c = _coerce(alg, g0, a, b, c)
    k, n = a.shape[0], g0.shape[0]
    phi = _full(a, b, c)
    # a scalar shift of Phi does not move R(t), so the lift may use proj_g(Phi)
    phi_g = proj_g(phi)
    off = phi_g.copy()
    off[:k, :k] = zeros((k, k), alg)
    off[k:, k:] = zeros((n - k, n - k), alg)
    d = Distribution(DistKind.GRASSMANN, n, k, alg)
    lift = ExpLift(d, g0, phi_g, phi_g - off)
    factors = _grassmann_factors(g0, phi, n, k, alg)
    return Curve("grassmann", n, k, alg, factors, MetricTag.GRASSMANN, lift, (g0, phi), True,
                 {"A": a, "B": b, "C": c})


def stiefel_to_grassmann(curve: Curve) -> Curve:
    """Image of a Stiefel curve under q -> 2 q q* - I, as a Grassmann curve."""
    if curve.on_grassmann:
        return curve
    if curve.grassmann is None:
        raise ValueError(f"{curve.family} curve has no Grassmann generator")
    g0, phi = curve.grassmann
    k = curve.k
    return grassmann_curve(g0, phi[:k, :k], phi[:k, k:], phi[k:, k:])


# --- Euler-Lagrange residual --------------------------------------------

def euler_lagrange_residual(curve, t: float, h: float = FD_STEP_2) -> float:
    """|X'' + X X'* X'|_F by central differences at step h."""
    if h <= 0:
        raise ValueError("step must be positive")
    x = curve.point(t)
    if hasattr(curve, "increment"):
        up, down = curve.increment(t, h), curve.increment(t - h, h)
    else:
        up, down = curve.point(t + h) - x, x - curve.point(t - h)
    xd = (up + down) * (1.0 / (2 * h))
    xdd = (up - down) * (1.0 / (h * h))
    return fro_norm(xdd + x @ adjoint(xd) @ xd)


def sphere_residual(curve: Curve, b, t: float, h: float = FD_STEP_2) -> float:
    """|m'' + |b|^2 m| for k = 1 reduced geodesics."""
    b2 = fro_norm(b) ** 2
    return fro_norm(curve.acceleration(t, h) + curve.point(t) * b2)


# --- ODE oracle ---------------------------------------------------------

def horizontal_control(at, et, bt, f, t: float):
    """[[-A~, e^{tA~} e^{tE~} B~ e^{-tF}], [-(...)*, 0]]."""
    k = at.shape[0]
    top = expm(at, t) @ expm(et, t) @ bt @ expm(f, -t)
    out = block_diag(-1.0 * at, zeros((f.shape[0], f.shape[0]), algebra_of(at)))
    out[:k, k:] = top
    out[k:, :k] = -adjoint(top)
    return out


def horizontal_curve_closed_form(g0, at, et, bt, f, t: float):
    """g0 exp(t Phi) Delta(t), Phi = [[E~, B~], [-B~*, F]], Delta = diag(e^{-tE~} e^{-tA~}, e^{-tF})."""
    phi = _full(et, bt, f)
    delta = block_diag(expm(et, -t) @ expm(at, -t), expm(f, -t))
    return g0 @ expm(phi, t) @ delta


def horizontal_lift_ode(g0, at, et, bt, f, t_end: float, steps: int):
    """Fixed-step RK4 for g' = g V(t); no re-orthonormalization."""
    if steps < 1:
        raise ValueError("steps must be at least 1")
    alg = _algebra(g0, at, et, bt, f)
    g0, at, et, bt, f = _coerce(alg, g0, at, et, bt, f)
    h = t_end / steps
    g = g0
    for i in range(steps):
        t = i * h
        v0 = horizontal_control(at, et, bt, f, t)
        vh = horizontal_control(at, et, bt, f, t + 0.5 * h)
        v1 = horizontal_control(at, et, bt, f, t + h)
        k1 = g @ v0
        k2 = (g + k1 * (0.5 * h)) @ vh
        k3 = (g + k2 * (0.5 * h)) @ vh
        k4 = (g + k3 * h) @ v1
        g = g + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
    return g


# --- curve specifications -----------------------------------------------

FAMILIES = ("sr", "stiefel", "quasi", "ambient", "grassmann")


@dataclass(frozen=True)
class CurveSpec:
    family: str
    dist: Distribution
    blocks: dict = field(default_factory=dict)
    basepoint: dict = field(default_factory=dict)
    normalized: bool = False

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown curve family {self.family!r}")

    def _block(self, name, shape):
        v = self.blocks.get(name)
        alg = self.dist.algebra
        if v is None:
            return zeros(shape, alg)
        v = as_algebra(v, alg)
        if v.shape != shape:
            raise ValueError(f"block {name} has shape {v.shape}, expected {shape}")
        return v

    def _base(self, name, size):
        v = self.basepoint.get(name)
        return eye(size, self.dist.algebra) if v is None else as_algebra(v, self.dist.algebra)

    def build(self) -> Curve:
        d = self.dist
        n, k = d.n, d.k
        kk, mm, km = (k, k), (n - k, n - k), (k, n - k)
        r = self._base("r", n) if "r" in self.basepoint else self._base("g", n)
        s = self._base("s", k)
        fam = self.family
        if fam == "sr":
            pp, pperp = sr_blocks_to_carrier(d, self.blocks)
            g0 = pair(r, s) if d.is_pair else r
            curve = sr_curve(d, g0, pp, pperp, dict(self.blocks))
        elif fam == "stiefel":
            a, b = self._block("A", kk), self._block("B", km)
            if d.kind is DistKind.REDUCED:
                curve = reduced_geodesic_curve(r, a, b)
            elif d.kind is DistKind.ORTHOGONAL:
                curve = orthogonal_geodesic_curve(r, s, a, b)
            elif d.kind is DistKind.QUASIGEODESIC:
                curve = qg_geodesic_curve(r, s, a, b)
            else:
                curve = grassmann_curve(r, zeros(kk, d.algebra), b, zeros(mm, d.algebra))
        elif fam == "quasi":
            curve = quasi_geodesic_curve(r, s, self._block("B", km), self._block("A", kk))
        elif fam == "ambient":
            curve = ambient_curve(r, self._block("A", kk), self._block("B", km), self._block("C", mm))
        else:
            curve = grassmann_curve(r, self._block("A", kk), self._block("B", km), self._block("C", mm))
        if self.normalized:
            curve = curve.normalized()
        return curve

    def to_json(self) -> dict:
        out = {"family": self.family, **self.dist.to_json()}
        out["blocks"] = {name: matrix_to_json(as_algebra(m, self.dist.algebra))
                         for name, m in sorted(self.blocks.items())}
        out["basepoint"] = {name: matrix_to_json(as_algebra(m, self.dist.algebra))
                            for name, m in sorted(self.basepoint.items())}
        out["normalized"] = bool(self.normalized)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> CurveSpec:
        try:
            family = obj["family"]
            dist_name = obj.get("dist", "grassmann" if family == "grassmann" else "reduced")
            d = Distribution(dist_name, int(obj["n"]), int(obj["k"]), obj.get("algebra", "real"))
        except KeyError as exc:
            raise ValueError(f"curve spec is missing {exc.args[0]!r}") from None
        blocks = {name: _coerce_json(m, d.algebra) for name, m in obj.get("blocks", {}).items()}
        base = {name: _coerce_json(m, d.algebra) for name, m in obj.get("basepoint", {}).items()}
        return cls(family, d, blocks, base, bool(obj.get("normalized", False)))


def _coerce_json(obj, algebra: Algebra):
    if isinstance(obj, dict):
        return as_algebra(matrix_from_json(obj), algebra)
    # bare nested lists are accepted for real data
    return as_algebra(np.asarray(obj, dtype=float), algebra)
