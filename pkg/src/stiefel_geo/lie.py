"""Lie-algebra layer: g_n, the p + k splittings, p-perp, and group actions.

Pair groups G_n x G_k are carried as block-diagonal (n+k) x (n+k) matrices,
so products, brackets, exponentials and the trace form need no special
casing: the trace form of the carrier is the sum of the two factor forms.

Over C the ambient algebra is su(n) (su(n) x su(k) for pairs).  The block
shapes then leave one central direction unaccounted for,

    Z = diag(i (n-k) I_k, -i k I_{n-k}),

which commutes with every block-diagonal matrix.  Z is placed in p for the
Stiefel distributions (it moves I_{nk}) and in k for the Grassmann split,
so that g = p + k holds exactly in every case.
"""
from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    TAU_GRP,
    QMatrix,
    adjoint,
    algebra_of,
    as_algebra,
    block_diag,
    check_gn,
    commutator,
    expm,
    eye,
    i_nk,
    max_abs,
    realify,
    unitarity_residual,
    zeros,
)
from .scalars import Algebra

STRUCTURE_TOL = 1e-10
RANK_RTOL = 1e-9


class DistKind(enum.Enum):
    REDUCED = "reduced"
    ORTHOGONAL = "orthogonal"
    QUASIGEODESIC = "quasigeodesic"
    GRASSMANN = "grassmann"  # symmetric split of g_n used for the Grassmannian

    @classmethod
    def parse(cls, value) -> DistKind:
        if isinstance(value, DistKind):
            return value
        key = str(value).lower().replace("-", "").replace("_", "")
        aliases = {"qg": "quasigeodesic", "quasi": "quasigeodesic"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise ValueError(f"unknown distribution {value!r}") from None


@dataclass(frozen=True)
class Distribution:
    kind: DistKind
    n: int
    k: int
    algebra: Algebra = Algebra.REAL

    def __post_init__(self):
        object.__setattr__(self, "kind", DistKind.parse(self.kind))
        object.__setattr__(self, "algebra", Algebra.parse(self.algebra))
        if not 1 <= self.k <= self.n:
            raise ValueError(f"need 1 <= k <= n, got n={self.n}, k={self.k}")

    @property
    def is_pair(self) -> bool:
        return self.kind in (DistKind.ORTHOGONAL, DistKind.QUASIGEODESIC)

    @property
    def size(self) -> int:
        """Side length of the carrier matrix."""
        return self.n + self.k if self.is_pair else self.n

    @property
    def dim_g(self) -> int:
        d = dim_gn(self.n, self.algebra)
        return d + dim_gn(self.k, self.algebra) if self.is_pair else d

    def to_json(self) -> dict:
        return {"dist": self.kind.value, "n": self.n, "k": self.k, "algebra": self.algebra.value}

    @classmethod
    def from_json(cls, obj: dict) -> Distribution:
        return cls(obj["dist"], int(obj["n"]), int(obj["k"]), obj.get("algebra", "real"))

    def with_kind(self, kind) -> Distribution:
        return Distribution(kind, self.n, self.k, self.algebra)


def dim_gn(n: int, algebra: Algebra) -> int:
    algebra = Algebra.parse(algebra)
    if algebra is Algebra.REAL:
        return n * (n - 1) // 2
    if algebra is Algebra.COMPLEX:
        return max(n * n - 1, 0)
    return n * (2 * n + 1)


# --- elementary matrices and bases --------------------------------------

_UNITS = {
    Algebra.REAL: [(1, 0, 0, 0)],
    Algebra.COMPLEX: [(1, 0, 0, 0), (0, 1, 0, 0)],
    Algebra.QUATERNION: [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)],
}


def unit_matrix(shape, i: int, j: int, unit, algebra: Algebra):
    """Matrix with the scalar ``unit`` (given as q0..q3) at (i, j)."""
    algebra = Algebra.parse(algebra)
    if algebra is Algebra.QUATERNION:
        comps = np.zeros(tuple(shape) + (4,))
        comps[i, j] = unit
        return QMatrix.from_components(comps)
    m = zeros(shape, algebra)
    m[i, j] = unit[0] + (1j * unit[1] if algebra is Algebra.COMPLEX else 0)
    return m


@functools.lru_cache(maxsize=None)
def _gn_basis_cached(n: int, algebra: Algebra) -> tuple:
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            e = unit_matrix((n, n), i, j, (1, 0, 0, 0), algebra)
            out.append(e - adjoint(e))
    for unit in _UNITS[algebra][1:]:
        for i in range(n):
            for j in range(i, n):
                if i < j:
                    e = unit_matrix((n, n), i, j, unit, algebra)
                    out.append(e - adjoint(e))
                elif algebra is Algebra.QUATERNION:
                    out.append(unit_matrix((n, n), i, i, unit, algebra))
                elif i < n - 1:
                    out.append(unit_matrix((n, n), i, i, unit, algebra)
                               - unit_matrix((n, n), i + 1, i + 1, unit, algebra))
    return tuple(out)


def gn_basis(n: int, algebra: Algebra) -> list:
    """Basis of so(n), su(n) or sp(n) in the fixed generator order."""
    return [m.copy() for m in _gn_basis_cached(n, Algebra.parse(algebra))]


def offdiag_basis(n: int, k: int, algebra: Algebra) -> list:
    """The matrices [[0, B], [-B*, 0]] with B a single scalar unit."""
    out = []
    for a in range(k):
        for b in range(n - k):
            for unit in _UNITS[algebra]:
                e = unit_matrix((n, n), a, k + b, unit, algebra)
                out.append(e - adjoint(e))
    return out


def central_direction(n: int, k: int, algebra: Algebra):
    """Z = diag(i(n-k) I_k, -ik I_{n-k}) over C; None where it does not exist."""
    if Algebra.parse(algebra) is not Algebra.COMPLEX or k in (0, n):
        return None
    return np.diag(np.r_[np.full(k, 1j * (n - k)), np.full(n - k, -1j * k)])


def proj_g(m):
    """Orthogonal projection of a skew-adjoint block onto g (trace removal over C)."""
    if algebra_of(m) is Algebra.COMPLEX and m.shape[0]:
        return m - np.trace(m) / m.shape[0] * np.eye(m.shape[0])
    return m


def pair(r, s):
    return block_diag(r, s)


def unpair(m, n: int):
    return m[:n, :n], m[n:, n:]


def embed_k(s, n: int):
    """Identify s in G_k with diag(s, I_{n-k}) in G_n."""
    k = s.shape[0]
    return block_diag(s, eye(n - k, algebra_of(s)))


def _diag(d: Distribution, top, bottom):
    return block_diag(as_algebra(top, d.algebra), as_algebra(bottom, d.algebra))


def _lift_pair(d: Distribution, x, y=None):
    if not d.is_pair:
        return x
    return pair(x, zeros((d.k, d.k), d.algebra) if y is None else y)


def p_basis(d: Distribution) -> list:
    n, k, alg = d.n, d.k, d.algebra
    gk = gn_basis(k, alg)
    z = central_direction(n, k, alg)
    nk0 = zeros((n - k, n - k), alg)
    off = offdiag_basis(n, k, alg)
    if d.kind is DistKind.GRASSMANN:
        return off
    if d.kind is DistKind.REDUCED:
        out = [_diag(d, a, nk0) for a in gk] + off
    elif d.kind is DistKind.ORTHOGONAL:
        out = [pair(_diag(d, a, nk0), -a) for a in gk] + [_lift_pair(d, b) for b in off]
    else:
        out = [_lift_pair(d, b) for b in off] + [pair(zeros((n, n), alg), a) for a in gk]
    if z is not None:
        out.append(_lift_pair(d, z))
    return out


def k_basis(d: Distribution) -> list:
    n, k, alg = d.n, d.k, d.algebra
    gk, gnk = gn_basis(k, alg), gn_basis(n - k, alg)
    k0, nk0 = zeros((k, k), alg), zeros((n - k, n - k), alg)
    if d.kind is DistKind.REDUCED:
        return [_diag(d, k0, c) for c in gnk]
    if d.kind is DistKind.GRASSMANN:
        out = [_diag(d, c, nk0) for c in gk] + [_diag(d, k0, c) for c in gnk]
        z = central_direction(n, k, alg)
        return out + ([z] if z is not None else [])
    return ([pair(_diag(d, c, nk0), c) for c in gk]
            + [pair(_diag(d, k0, c), k0) for c in gnk])


def p_perp_basis(d: Distribution) -> list:
    """Basis of the trace-form orthogonal complement of p."""
    if d.kind is not DistKind.QUASIGEODESIC:
        return k_basis(d)
    n, k, alg = d.n, d.k, d.algebra
    k0, nk0 = zeros((k, k), alg), zeros((n - k, n - k), alg)
    return ([pair(_diag(d, e, nk0), k0) for e in gn_basis(k, alg)]
            + [pair(_diag(d, k0, f), k0) for f in gn_basis(n - k, alg)])


def g_basis(d: Distribution) -> list:
    n, k, alg = d.n, d.k, d.algebra
    if not d.is_pair:
        return gn_basis(n, alg)
    return ([pair(x, zeros((k, k), alg)) for x in gn_basis(n, alg)]
            + [pair(zeros((n, n), alg), y) for y in gn_basis(k, alg)])


# --- decompositions -----------------------------------------------------

@dataclass(frozen=True)
class Split:
    p: object
    k: object


def check_carrier(x, d: Distribution):
    """Validate that ``x`` lies in the Lie algebra carried for ``d``."""
    if x.shape != (d.size, d.size):
        raise ValueError(f"expected a {d.size}x{d.size} carrier for {d.kind.value}, got {x.shape}")
    if algebra_of(x) is not d.algebra:
        raise ValueError("carrier has the wrong scalar algebra")
    if d.is_pair:
        if max(max_abs(x[:d.n, d.n:]), max_abs(x[d.n:, :d.n])) > 0:
            raise ValueError("pair carrier must be block diagonal")
        for part in unpair(x, d.n):
            check_gn(part)
    else:
        check_gn(x)
    return x


def decompose(x, d: Distribution) -> Split:
    """Split ``x`` into its p and k parts.

    Reduced, orthogonal and Grassmann splits are trace-form orthogonal; the
    quasi-geodesic split is the oblique one along k.
    """
    check_carrier(x, d)
    n, k = d.n, d.k
    if d.kind is DistKind.GRASSMANN:
        kp = block_diag(x[:k, :k], x[k:, k:])
        return Split(x - kp, kp)
    if d.kind is DistKind.REDUCED:
        kp = _diag(d, zeros((k, k), d.algebra), proj_g(x[k:, k:]))
        return Split(x - kp, kp)
    xn, y = unpair(x, n)
    if d.kind is DistKind.ORTHOGONAL:
        c = proj_g((xn[:k, :k] + y) * 0.5)
    else:
        c = proj_g(xn[:k, :k])
    kp = pair(_diag(d, c, proj_g(xn[k:, k:])), c)
    return Split(x - kp, kp)


def project_p(x, d: Distribution):
    return decompose(x, d).p


def project_perp(x, d: Distribution):
    """Trace-form orthogonal projection onto p-perp."""
    if d.kind is not DistKind.QUASIGEODESIC:
        return decompose(x, d).k
    check_carrier(x, d)
    xn, _ = unpair(x, d.n)
    k = d.k
    return pair(_diag(d, proj_g(xn[:k, :k]), proj_g(xn[k:, k:])), zeros((k, k), d.algebra))


def p_residual(x, d: Distribution) -> float:
    return max_abs(decompose(x, d).k)


def perp_residual(x, d: Distribution) -> float:
    return max_abs(x - project_perp(x, d))


def bracket(a, b):
    if a.shape != b.shape or algebra_of(a) is not algebra_of(b):
        raise ValueError("bracket operands must share size and algebra")
    return commutator(a, b)


def p_bracket(a, b, d: Distribution):
    """[a, b] followed by projection onto p."""
    return project_p(bracket(a, b), d)


def random_element(rng: np.random.Generator, basis: list, scale: float = 1.0):
    coef = rng.standard_normal(len(basis)) * scale
    out = basis[0] * 0.0
    for c, b in zip(coef, basis):
        out = out + b * float(c)
    return out


# --- structure verification ---------------------------------------------

def _orth(vectors: list, dim_hint: int | None = None) -> np.ndarray:
    if not vectors:
        return np.zeros((0, 0))
    m = np.stack(vectors, axis=1)
    u, sv, _ = np.linalg.svd(m, full_matrices=False)
    if sv.size == 0 or sv[0] == 0:
        return np.zeros((m.shape[0], 0))
    rank = int(np.sum(sv > RANK_RTOL * sv[0]))
    return u[:, :rank]


def _rank(vectors: list) -> int:
    return _orth(vectors).shape[1]


def _span_residual(q: np.ndarray, v: np.ndarray) -> float:
    if q.shape[1] == 0:
        return float(np.abs(v).max(initial=0.0))
    return float(np.abs(v - q @ (q.T @ v)).max(initial=0.0))


@dataclass
class StructureReport:
    distribution: Distribution
    checks: dict = field(default_factory=dict)
    dims: dict = field(default_factory=dict)

    @property
    def max_residual(self) -> float:
        return max((c["residual"] for c in self.checks.values()), default=0.0)

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.checks.values())


def verify_structure(d: Distribution, tol: float = STRUCTURE_TOL) -> StructureReport:
    """Check [p,k] in p, k in [p,p] and p + [p,p] = g on explicit bases."""
    pb, kb, perp = p_basis(d), k_basis(d), p_perp_basis(d)
    rep = StructureReport(d, dims={"p": len(pb), "k": len(kb), "g": d.dim_g})
    pv = [realify(x) for x in pb]
    qp = _orth(pv)

    res = 0.0
    for a in pb:
        for c in kb:
            res = max(res, _span_residual(qp, realify(bracket(a, c))))
    rep.checks["p_k_in_p"] = {"residual": res, "pass": res < tol}

    brackets = [realify(bracket(pb[i], pb[j])) for i in range(len(pb)) for j in range(i + 1, len(pb))]
    qb = _orth(brackets)
    res = max((_span_residual(qb, realify(c)) for c in kb), default=0.0)
    rep.checks["k_in_pp"] = {"residual": res, "pass": res < tol}

    rank = _rank(pv + brackets)
    rep.dims["span"] = rank
    rep.checks["bracket_generating"] = {"residual": float(d.dim_g - rank), "pass": rank == d.dim_g}

    # p + k is a direct sum of g, and p-perp is orthogonal to p
    rank_pk = _rank(pv + [realify(c) for c in kb])
    ortho = max((abs(float(np.dot(realify(a), realify(b)))) for a in pb for b in perp), default=0.0)
    ok = rank_pk == d.dim_g == len(pb) + len(kb) and len(pb) + len(perp) == d.dim_g
    rep.checks["direct_sum"] = {"residual": ortho, "pass": ok and ortho < 1e-12}
    return rep


# --- group level --------------------------------------------------------

def stiefel_project(g, d: Distribution, tol: float = TAU_GRP):
    """g I_{nk} for G_n, or r I_{nk} s* for a pair carrier."""
    if unitarity_residual(g) > tol:
        raise ValueError("group element is not unitary")
    if d.is_pair:
        r, s = unpair(g, d.n)
        return r @ i_nk(d.n, d.k, d.algebra) @ adjoint(s)
    return g @ i_nk(d.n, d.k, d.algebra)


def random_group(rng: np.random.Generator, n: int, algebra: Algebra, scale: float = 1.5):
    """A random element of SO(n), SU(n) or Sp(n) as exp of a random algebra element."""
    basis = gn_basis(n, algebra)
    if not basis:
        return eye(n, algebra)
    return expm(random_element(rng, basis, scale))


def random_carrier_group(rng: np.random.Generator, d: Distribution, scale: float = 1.5):
    g = random_group(rng, d.n, d.algebra, scale)
    if d.is_pair:
        return pair(g, random_group(rng, d.k, d.algebra, scale))
    return g


def random_isotropy(rng: np.random.Generator, d: Distribution, scale: float = 1.0):
    """A random element of the connected isotropy group K."""
    basis = k_basis(d)
    return expm(random_element(rng, basis, scale)) if basis else eye(d.size, d.algebra)
