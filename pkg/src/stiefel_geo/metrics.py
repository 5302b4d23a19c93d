"""Metrics on Stiefel and Grassmann manifolds, tangent lifting and curvature.

Tangent vectors are lifted to p by solving the pushforward equation

    d/ds pi(g exp(s V)) = Xdot,   V in p,

in the real coordinates of an explicit basis of p.  The pushforward is
injective on p (its kernel is k), so the lift is unique and the same code
serves every distribution.  Curvature reuses the lift of a curve together
with the naturally reductive connection g (W' + 1/2 [U, W]_p).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .linalg import (
    TAU_GRP,
    TAU_SKEW,
    adjoint,
    algebra_of,
    block_diag,
    eye,
    i_nk,
    max_abs,
    re_trace,
    realify,
    trace_form,
    zeros,
)
from .lie import DistKind, Distribution, decompose, p_basis, pair, unpair
from .scalars import Algebra


class MetricTag(enum.Enum):
    REDUCED = "reduced"
    ORTHOGONAL = "orthogonal"
    QUASIGEODESIC = "quasigeodesic"
    AMBIENT = "ambient"
    GRASSMANN = "grassmann"

    @classmethod
    def parse(cls, value) -> MetricTag:
        if isinstance(value, MetricTag):
            return value
        key = str(value).lower().replace("-", "").replace("_", "")
        return cls({"quasi": "quasigeodesic", "qg": "quasigeodesic"}.get(key, key))

    def distribution(self, n: int, k: int, algebra: Algebra) -> Distribution:
        """The splitting of g that carries this metric (ambient lives on the reduced p)."""
        kind = DistKind.REDUCED if self is MetricTag.AMBIENT else DistKind(self.value)
        return Distribution(kind, n, k, algebra)


STIEFEL_METRICS = (MetricTag.REDUCED, MetricTag.QUASIGEODESIC, MetricTag.ORTHOGONAL, MetricTag.AMBIENT)


@dataclass(frozen=True)
class TangentVector:
    at: object
    dir: object

    def __post_init__(self):
        if self.at.shape != self.dir.shape:
            raise ValueError("tangent direction must have the shape of its base point")
        if max_abs(adjoint(self.at) @ self.at - eye(self.at.shape[1], algebra_of(self.at))) > TAU_GRP:
            raise ValueError("base point does not have orthonormal columns")
        if tangency_residual(self.at, self.dir) > TAU_SKEW:
            raise ValueError("direction is not tangent: X*Xdot + Xdot*X != 0")


def tangency_residual(x, xdot) -> float:
    m = adjoint(x) @ xdot
    return max_abs(m + adjoint(m))


# --- inner products on p ------------------------------------------------

def ambient_form(u1, u2, k: int) -> float:
    """(U1, U2)_p = Re Tr((U1 I_nk)* (U2 I_nk)), the flat metric read on p."""
    n = u1.shape[0]
    e = i_nk(n, k, algebra_of(u1))
    return re_trace(adjoint(u1 @ e) @ (u2 @ e))


def ambient_vs_trace_relation(u1, u2, k: int) -> tuple[float, float]:
    """Both sides of (U1, U2)_p = <U1, D U2 + U2 D> with D = diag(I_k, 0)."""
    n = u1.shape[0]
    dm = block_diag(eye(k, algebra_of(u1)), zeros((n - k, n - k), algebra_of(u1)))
    return ambient_form(u1, u2, k), trace_form(u1, dm @ u2 + u2 @ dm)


def p_inner(u1, u2, metric: MetricTag, k: int) -> float:
    metric = MetricTag.parse(metric)
    if metric is MetricTag.AMBIENT:
        return ambient_form(u1, u2, k)
    return trace_form(u1, u2)


def p_norm(u, metric: MetricTag, k: int) -> float:
    return math.sqrt(max(p_inner(u, u, metric, k), 0.0))


def hamiltonian_ambient(a, b) -> tuple[float, float]:
    """The ambient Hamiltonian two ways: 1/2 (U,U)_p with U = [[A/2, B], [-B*, 0]],
    and 1/4 ||A||^2 + 1/2 Tr(BB*) with ||A||^2 the trace-form square."""
    k = a.shape[0]
    u = block_diag(a * 0.5, zeros((b.shape[1], b.shape[1]), algebra_of(a)))
    u[:k, k:] = b
    u[k:, :k] = -adjoint(b)
    lhs = 0.5 * ambient_form(u, u, k)
    rhs = 0.25 * trace_form(a, a) + 0.5 * re_trace(b @ adjoint(b))
    return lhs, rhs


# --- pushforward and lifting --------------------------------------------

def pushforward(g, v, d: Distribution):
    """d/ds pi(g exp(sV)) at s = 0.

    Stiefel: g V I_nk, or r (V1 I_nk - I_nk V2) s* on pairs.
    Grassmann: g [V, D] g* with D = diag(I_k, -I_{n-k}).
    """
    n, k = d.n, d.k
    e = i_nk(n, k, d.algebra)
    if d.kind is DistKind.GRASSMANN:
        dm = grassmann_base(n, k, d.algebra)
        return g @ (v @ dm - dm @ v) @ adjoint(g)
    if d.is_pair:
        r, s = unpair(g, n)
        v1, v2 = unpair(v, n)
        return r @ (v1 @ e - e @ v2) @ adjoint(s)
    return g @ v @ e


def grassmann_base(n: int, k: int, algebra: Algebra):
    """D = diag(I_k, -I_{n-k}), the reflection representing span(e_1..e_k)."""
    return block_diag(eye(k, algebra), -1.0 * eye(n - k, algebra))


def pair_context(g, k: int):
    """Lift context (g, I_k) for pair distributions."""
    return pair(g, eye(k, algebra_of(g)))


def horizontal_lift(y, g, d: Distribution, tol: float = 1e-9):
    """The unique V in p with pushforward(g, V) = y."""
    basis = p_basis(d)
    if not basis:
        if max_abs(y) > tol:
            raise ValueError("nonzero tangent but p is trivial")
        return zeros((d.size, d.size), d.algebra)
    cols = np.stack([realify(pushforward(g, b, d)) for b in basis], axis=1)
    target = realify(y)
    coef, *_ = np.linalg.lstsq(cols, target, rcond=None)
    res = float(np.abs(cols @ coef - target).max(initial=0.0))
    if res > tol * max(1.0, float(np.abs(target).max(initial=0.0))):
        raise ValueError(f"vector is not in the image of p (residual {res:.2e})")
    out = basis[0] * 0.0
    for c, b in zip(coef, basis):
        out = out + b * float(c)
    return out


def lift_tangent(v: TangentVector, g, tol: float = TAU_GRP):
    """Reduced-distribution lift W = [[A, B], [-B*, 0]] with [A; -B*] = g* Xdot.

    Over C the lower block carries the scalar -(Tr A)/(n-k) so W is traceless;
    it does not change W I_nk.
    """
    x, xdot = v.at, v.dir
    n, k = x.shape
    if max_abs(g @ i_nk(n, k, algebra_of(g)) - x) > tol:
        raise ValueError("g I_nk does not match the tangent base point")
    cols = adjoint(g) @ xdot
    a, bstar = cols[:k, :], cols[k:, :]
    alg = algebra_of(cols)
    w = block_diag(a, zeros((n - k, n - k), alg))
    w[:k, k:] = -adjoint(bstar)
    w[k:, :k] = bstar
    if alg is Algebra.COMPLEX:
        tr = np.trace(a)
        if n == k:
            if abs(tr) > 1e-12:
                raise ValueError("k = n over C needs a traceless lift")
        else:
            w[k:, k:] = -tr / (n - k) * np.eye(n - k)
    return w


def stiefel_norm(v: TangentVector, metric: MetricTag, g=None) -> float:
    """Length of a Stiefel tangent vector under one of the four metrics."""
    metric = MetricTag.parse(metric)
    x = v.at
    n, k = x.shape
    if metric is MetricTag.AMBIENT:
        return math.sqrt(max(re_trace(adjoint(v.dir) @ v.dir), 0.0))
    if g is None:
        g = complete_frame(x)
    if metric is MetricTag.REDUCED:
        return p_norm(lift_tangent(v, g), metric, k)
    d = metric.distribution(n, k, algebra_of(x))
    return p_norm(horizontal_lift(v.dir, pair_context(g, k), d), metric, k)


def complete_frame(x):
    """A group element g in SO(n), SU(n) or Sp(n) with g I_nk = x."""
    alg = algebra_of(x)
    n, k = x.shape
    rng = np.random.default_rng(0)
    if alg is Algebra.QUATERNION:
        return _complete_quaternion(x, rng)
    arr = np.asarray(x)
    fill = rng.standard_normal((n, n - k))
    if alg is Algebra.COMPLEX:
        fill = fill + 1j * rng.standard_normal((n, n - k))
    fill = fill - arr @ (arr.conj().T @ fill)
    q = np.concatenate([arr, np.linalg.qr(fill)[0]], axis=1)
    det = np.linalg.det(q)
    if n > k:
        q[:, -1] = q[:, -1] * (abs(det) / det) if alg is Algebra.COMPLEX else q[:, -1] * np.sign(det)
    elif abs(det - 1) > 1e-9:
        raise ValueError("x is not in the connected group")
    return q


def _complete_quaternion(x, rng):
    from .linalg import QMatrix

    n, k = x.shape
    cols = [x[:, j:j + 1] for j in range(k)]
    while len(cols) < n:
        v = QMatrix.from_components(rng.standard_normal((n, 1, 4)))
        for c in cols:
            v = v - c @ (adjoint(c) @ v)
        nv = math.sqrt(re_trace(adjoint(v) @ v))
        if nv > 1e-8:
            cols.append(v * (1.0 / nv))
    out = zeros((n, n), Algebra.QUATERNION)
    for j, c in enumerate(cols):
        out[:, j:j + 1] = c
    return out


# --- covariant derivative and curvature ---------------------------------

FD_STEP_W = 1e-5


def covariant_derivative(curve, w, t: float, h: float = FD_STEP_W):
    """Pushforward of g(W' + 1/2 [U, W]_p) along the curve's metric lift.

    ``w`` maps t to an element of p; W' is a central difference with step h.
    """
    lift = curve.metric_lift()
    if lift is None:
        raise ValueError("curve has no horizontal lift")
    d = lift.dist
    g, u = lift.at(t), lift.control(t)
    wt = w(t)
    wdot = (w(t + h) - w(t - h)) * (1.0 / (2 * h))
    v = wdot + decompose(u @ wt - wt @ u, d).p * 0.5
    return pushforward(g, v, d)


def tangent_norm(y, g, d: Distribution, metric: MetricTag) -> float:
    """Length of the tangent y at pi(g), measured by relifting to p."""
    return p_norm(horizontal_lift(y, g, d), metric, d.k)


def geodesic_curvature(curve, t: float, h: float = FD_STEP_W) -> float:
    """|D/dt dm/dt| on the unit-speed reparametrization of ``curve``."""
    unit = curve.normalized()
    lift = unit.metric_lift()
    acc = covariant_derivative(unit, lift.control, t, h)
    return tangent_norm(acc, lift.at(t), lift.dist, unit.metric)


def quasi_curvature_closed_form(a, b) -> float:
    """Curvature of the unit-speed quasi-geodesic with blocks (A, B):
    |[[0, -AB], [-B*A, 0]]| / (|A|^2 + Tr BB*)."""
    ab = a @ b
    speed2 = trace_form(a, a) + re_trace(b @ adjoint(b))
    if speed2 == 0:
        return 0.0
    return math.sqrt(re_trace(ab @ adjoint(ab))) / speed2


def sr_curvature_closed_form(pp, pk) -> float:
    """|[P_p, P_k]| / |P_p|^2 for a symmetric or reduced split."""
    c = pp @ pk - pk @ pp
    speed2 = trace_form(pp, pp)
    return math.sqrt(max(trace_form(c, c), 0.0)) / speed2
