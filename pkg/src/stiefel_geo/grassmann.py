"""Grassmann manifolds as orthogonal reflections R = 2 Pi - I.

The reflection is the primary representation: R* = R and R^2 = I are cheap
to check and self-correcting.  The projector Pi = (R + I)/2 is derived on
demand.  Both quotient away orientation, so ``project_stiefel`` is the
unoriented bundle projection q -> q q*.
"""
from __future__ import annotations

from dataclasses import dataclass

from .geodesics import Curve, grassmann_curve, stiefel_to_grassmann
from .lie import DistKind, Distribution, g_basis, k_basis, p_basis
from .linalg import (
    TAU_GRP,
    adjoint,
    algebra_of,
    as_algebra,
    expm,
    eye,
    matrix_from_json,
    matrix_to_json,
    max_abs,
    re_trace,
    trace_form,
    unitarity_residual,
    zeros,
)
from .metrics import geodesic_curvature, grassmann_base
from .scalars import Algebra


@dataclass(frozen=True)
class GrassmannPoint:
    R: object

    def __post_init__(self):
        r = self.R
        n = r.shape[0]
        if r.shape != (n, n):
            raise ValueError("reflection must be square")
        err = max(max_abs(r - adjoint(r)), max_abs(r @ r - eye(n, algebra_of(r))))
        if err > 1e-9:
            raise ValueError(f"matrix is not an orthogonal reflection (residual {err:.2e})")

    @property
    def n(self) -> int:
        return self.R.shape[0]

    @property
    def k(self) -> int:
        return int(round((re_trace(self.R) + self.n) / 2))

    @property
    def projector(self):
        return (self.R + eye(self.n, algebra_of(self.R))) * 0.5

    @classmethod
    def from_projector(cls, pi) -> GrassmannPoint:
        return cls(pi * 2.0 - eye(pi.shape[0], algebra_of(pi)))

    def residual(self) -> float:
        r = self.R
        return max(max_abs(r - adjoint(r)), max_abs(r @ r - eye(self.n, algebra_of(r))))

    def to_json(self) -> dict:
        return {**matrix_to_json(self.R), "k": self.k}

    @classmethod
    def from_json(cls, obj: dict) -> GrassmannPoint:
        pt = cls(matrix_from_json(obj))
        if "k" in obj and int(obj["k"]) != pt.k:
            raise ValueError("k hint does not match the trace of R")
        return pt


def base_point(n: int, k: int, algebra: Algebra = Algebra.REAL) -> GrassmannPoint:
    return GrassmannPoint(grassmann_base(n, k, algebra))


def project_stiefel(q, tol: float = TAU_GRP) -> GrassmannPoint:
    """q -> q q*, returned as the reflection 2 q q* - I."""
    if unitarity_residual(q) > tol:
        raise ValueError("columns are not orthonormal")
    return GrassmannPoint.from_projector(q @ adjoint(q))


def act(o, w: GrassmannPoint, tol: float = TAU_GRP) -> GrassmannPoint:
    """(O, R) -> O R O*."""
    if unitarity_residual(o) > tol:
        raise ValueError("acting element is not unitary")
    return GrassmannPoint(o @ w.R @ adjoint(o))


def tangent_from_block(g0, b):
    """P = g0 [[0, B], [-B*, 0]] g0*, a tangent direction at g0 D g0*."""
    k, m = b.shape
    alg = algebra_of(g0)
    p = zeros((k + m, k + m), alg)
    p[:k, k:] = as_algebra(b, alg)
    p[k:, :k] = -adjoint(as_algebra(b, alg))
    return g0 @ p @ adjoint(g0)


def anticommutator_residual(r0: GrassmannPoint, p) -> float:
    """|R0 P + P R0|; zero exactly for tangent directions."""
    return max_abs(r0.R @ p + p @ r0.R)


def grassmann_geodesic(g0, b, t: float) -> GrassmannPoint:
    """g0 exp(tP) D exp(-tP) g0*, P = [[0, B], [-B*, 0]]."""
    k, m = b.shape
    alg = algebra_of(g0)
    return constant_curvature_curve(g0, zeros((k, k), alg), b, zeros((m, m), alg), t)


def constant_curvature_curve(g0, a, b, c, t: float) -> GrassmannPoint:
    """g0 exp(t Phi) D exp(-t Phi) g0*, Phi = [[A, B], [-B*, C]]."""
    return GrassmannPoint(grassmann_curve(g0, a, b, c).point(t))


def project_stiefel_curve(curve: Curve, t: float) -> GrassmannPoint:
    """Grassmann image at time t of a Stiefel curve from the geodesics module."""
    if curve.on_grassmann:
        return GrassmannPoint(curve.point(t))
    if curve.grassmann is None:
        raise ValueError(f"{curve.family} curve has no Grassmann generator")
    return GrassmannPoint(stiefel_to_grassmann(curve).point(t))


def grassmann_curvature(curve: Curve, t: float) -> float:
    """Geodesic curvature of the Grassmann image of ``curve`` at t."""
    return geodesic_curvature(stiefel_to_grassmann(curve), t)


# --- symmetric-space structure ------------------------------------------

def sigma_star(x, k: int):
    """The involution X -> D X D on g_n (+1 on k, -1 on p)."""
    dm = grassmann_base(x.shape[0], k, algebra_of(x))
    return dm @ x @ dm


def reflect_group(g, h, k: int):
    """F_g(h) = g D g^-1 h D."""
    dm = grassmann_base(g.shape[0], k, algebra_of(g))
    return g @ dm @ adjoint(g) @ h @ dm


def geodesic_reflection(p: GrassmannPoint, w: GrassmannPoint) -> GrassmannPoint:
    """S_p(W) = R_p R_W R_p, the point reflection through p."""
    return GrassmannPoint(p.R @ w.R @ p.R)


def geodesic_symmetry_check(g0, pp, pk, t: float, k: int, tol: float = 1e-10) -> dict:
    """Symmetric-space identities for the Grassmann split at g0.

    sigma_isometry: <sigma* X, sigma* Y> = <X, Y> and sigma*^2 = id on a basis of g
    reversal:       F_g(g e^{t P_p}) = g e^{-t P_p}, and
                    F_g(g e^{t(P_p + P_k)} e^{-t P_k}) = g e^{t(-P_p + P_k)} e^{-t P_k}
    point_reflection: S_p(gamma(t)) = gamma(-t) on the projected geodesic
    """
    n = g0.shape[0]
    alg = algebra_of(g0)
    d = Distribution(DistKind.GRASSMANN, n, k, alg)
    for x in (pp, pk):
        if x.shape != (n, n):
            raise ValueError("P_p and P_k must be n x n")
    if max(max_abs(pp[:k, :k]), max_abs(pp[k:, k:]), max_abs(pk[:k, k:]), max_abs(pk[k:, :k])) > 0:
        raise ValueError("P_p must be block off-diagonal and P_k block diagonal")
    basis = g_basis(d)
    iso = 0.0
    for i, x in enumerate(basis):
        sx = sigma_star(x, k)
        iso = max(iso, max_abs(sigma_star(sx, k) - x))
        for y in basis[i:]:
            iso = max(iso, abs(trace_form(sx, sigma_star(y, k)) - trace_form(x, y)))
    parity = max([max_abs(sigma_star(x, k) + x) for x in p_basis(d)]
                 + [max_abs(sigma_star(x, k) - x) for x in k_basis(d)], default=0.0)

    rev = max_abs(reflect_group(g0, g0 @ expm(pp, t), k) - g0 @ expm(pp, -t))
    g_t = g0 @ expm(pp + pk, t) @ expm(pk, -t)
    rev_sr = max_abs(reflect_group(g0, g_t, k) - g0 @ expm(pk - pp, t) @ expm(pk, -t))

    base = GrassmannPoint(g0 @ grassmann_base(n, k, alg) @ adjoint(g0))
    gamma = grassmann_curve(g0, pp[:k, :k], pp[:k, k:], pp[k:, k:])
    refl = max_abs(geodesic_reflection(base, GrassmannPoint(gamma.point(t))).R - gamma.point(-t))
    fixed = max_abs(reflect_group(g0, g0, k) - g0)

    checks = {
        "sigma_isometry": max(iso, parity),
        "reversal": max(rev, rev_sr, fixed),
        "point_reflection": refl,
    }
    return {"checks": checks, "max_residual": max(checks.values()),
            "pass": all(v <= tol for v in checks.values())}

