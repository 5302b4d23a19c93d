"""Dense matrices over R, C and H.

Real and complex matrices are plain numpy arrays.  Quaternionic matrices are
:class:`QMatrix` instances holding two complex arrays ``x`` and ``y`` with
``Q = x + y j``; the product rule follows from ``j z = conj(z) j``.  Every
helper here accepts either representation, so geometric code can be written
once with ``@``, ``+``, ``-`` and :func:`adjoint`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .scalars import Algebra, Quaternion, decode_scalar, encode_scalar

TAU_SKEW = 1e-10
TAU_GRP = 1e-10
TAU_GEO = 1e-8
TRACE_TOL = 1e-12


class QMatrix:
    """Quaternionic matrix ``x + y j`` with complex blocks ``x``, ``y``."""

    __slots__ = ("x", "y")
    __array_priority__ = 100  # make ndarray @ QMatrix defer to __rmatmul__

    def __init__(self, x, y=None):
        self.x = np.asarray(x, dtype=complex)
        self.y = np.zeros_like(self.x) if y is None else np.asarray(y, dtype=complex)
        if self.x.shape != self.y.shape:
            raise ValueError("quaternion blocks must share a shape")

    @classmethod
    def from_components(cls, comps) -> QMatrix:
        c = np.asarray(comps, dtype=float)
        return cls(c[..., 0] + 1j * c[..., 1], c[..., 2] + 1j * c[..., 3])

    @property
    def components(self) -> np.ndarray:
        return np.stack([self.x.real, self.x.imag, self.y.real, self.y.imag], axis=-1)

    @property
    def shape(self):
        return self.x.shape

    @property
    def ndim(self):
        return self.x.ndim

    def copy(self) -> QMatrix:
        return QMatrix(self.x.copy(), self.y.copy())

    def __getitem__(self, idx) -> QMatrix:
        return QMatrix(self.x[idx], self.y[idx])

    def __setitem__(self, idx, value):
        value = _as_q(value)
        self.x[idx] = value.x
        self.y[idx] = value.y

    def entry(self, i, j) -> Quaternion:
        a, b = self.x[i, j], self.y[i, j]
        return Quaternion(float(a.real), float(a.imag), float(b.real), float(b.imag))

    def __add__(self, other):
        other = _as_q(other)
        return QMatrix(self.x + other.x, self.y + other.y)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_q(other)
        return QMatrix(self.x - other.x, self.y - other.y)

    def __rsub__(self, other):
        return _as_q(other) - self

    def __neg__(self):
        return QMatrix(-self.x, -self.y)

    def __mul__(self, c):
        if isinstance(c, (QMatrix, Quaternion)) or np.iscomplexobj(c):
            raise TypeError("only real scalars multiply a QMatrix with '*'")
        return QMatrix(self.x * c, self.y * c)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1.0 / c)

    def __matmul__(self, other):
        other = _as_q(other)
        # (x1 + y1 j)(x2 + y2 j) = (x1 x2 - y1 conj(y2)) + (x1 y2 + y1 conj(x2)) j
        return QMatrix(self.x @ other.x - self.y @ other.y.conj(),
                       self.x @ other.y + self.y @ other.x.conj())

    def __rmatmul__(self, other):
        return _as_q(other) @ self

    @property
    def H(self) -> QMatrix:
        # conj(b j) = -b j entrywise
        return QMatrix(self.x.conj().T, -self.y.T)

    def to_complex(self) -> np.ndarray:
        """Block embedding [[x, y], [-conj(y), conj(x)]] (an algebra homomorphism)."""
        return np.block([[self.x, self.y], [-self.y.conj(), self.x.conj()]])

    @classmethod
    def from_complex(cls, m: np.ndarray, tol: float | None = 1e-12) -> QMatrix:
        m = np.asarray(m, dtype=complex)
        r, c = m.shape[0] // 2, m.shape[1] // 2
        x, y = m[:r, :c], m[:r, c:]
        if tol is not None:
            scale = max(1.0, float(np.abs(m).max(initial=0.0)))
            err = max(np.abs(m[r:, c:] - x.conj()).max(initial=0.0),
                      np.abs(m[r:, :c] + y.conj()).max(initial=0.0))
            if err > tol * scale:
                raise ValueError(f"complex matrix is not quaternion-structured (err={err:.2e})")
        return cls(x.copy(), y.copy())

    def __repr__(self):
        return f"QMatrix(shape={self.shape})"


def _as_q(m) -> QMatrix:
    if isinstance(m, QMatrix):
        return m
    if isinstance(m, Quaternion):
        a, b = m.split
        return QMatrix(np.array(a), np.array(b))
    arr = np.asarray(m)
    if np.iscomplexobj(arr):
        # complex scalars embed as the x-part
        return QMatrix(arr)
    return QMatrix(arr.astype(complex))


def algebra_of(m) -> Algebra:
    if isinstance(m, QMatrix):
        return Algebra.QUATERNION
    return Algebra.COMPLEX if np.iscomplexobj(m) else Algebra.REAL


def as_algebra(m, algebra: Algebra):
    """Coerce ``m`` into the carrier for ``algebra`` (real data widens losslessly)."""
    algebra = Algebra.parse(algebra)
    if algebra is Algebra.QUATERNION:
        return _as_q(m)
    if isinstance(m, QMatrix):
        raise TypeError("cannot narrow a quaternionic matrix")
    arr = np.asarray(m)
    if algebra is Algebra.REAL:
        if np.iscomplexobj(arr):
            if np.abs(arr.imag).max(initial=0.0) > 0:
                raise TypeError("cannot narrow a complex matrix to real")
            arr = arr.real
        return arr.astype(float)
    return arr.astype(complex)


def zeros(shape, algebra: Algebra):
    algebra = Algebra.parse(algebra)
    if algebra is Algebra.QUATERNION:
        return QMatrix(np.zeros(shape, dtype=complex))
    return np.zeros(shape, dtype=float if algebra is Algebra.REAL else complex)


def eye(n: int, algebra: Algebra):
    return as_algebra(np.eye(n), algebra)


def i_nk(n: int, k: int, algebra: Algebra = Algebra.REAL):
    """The base point I_{nk}: first k columns of the identity."""
    return as_algebra(np.eye(n)[:, :k], algebra)


def adjoint(m):
    if isinstance(m, QMatrix):
        return m.H
    return np.asarray(m).conj().T


def block(rows):
    """Assemble a block matrix from nested lists (quaternionic if any block is)."""
    if any(isinstance(b, QMatrix) for row in rows for b in row):
        qrows = [[_as_q(b) for b in row] for row in rows]
        return QMatrix(np.block([[b.x for b in row] for row in qrows]),
                       np.block([[b.y for b in row] for row in qrows]))
    return np.block([[np.asarray(b) for b in row] for row in rows])


def block_diag(*blocks):
    """Block-diagonal matrix; zero-size blocks are allowed."""
    sizes = [b.shape for b in blocks]
    algebra = _common_algebra(blocks)
    total = (sum(s[0] for s in sizes), sum(s[1] for s in sizes))
    out = zeros(total, algebra)
    r = c = 0
    for b, (h, w) in zip(blocks, sizes):
        out[r:r + h, c:c + w] = as_algebra(b, algebra)
        r, c = r + h, c + w
    return out


def _common_algebra(mats) -> Algebra:
    algs = {algebra_of(m) for m in mats}
    for a in (Algebra.QUATERNION, Algebra.COMPLEX, Algebra.REAL):
        if a in algs:
            return a
    return Algebra.REAL


@dataclass(frozen=True)
class BlockSplit:
    """The four blocks of an n x n matrix split after row/column k."""

    k: int
    A: object
    B: object
    C: object
    D: object

    def assemble(self):
        return block([[self.A, self.B], [self.C, self.D]])


def split_blocks(m, k: int) -> BlockSplit:
    return BlockSplit(k, m[:k, :k], m[:k, k:], m[k:, :k], m[k:, k:])


def re_trace(m) -> float:
    """Real part of the trace."""
    if isinstance(m, QMatrix):
        return float(np.trace(m.x).real)
    return float(np.trace(m).real)


def trace(m):
    """Full trace: a float, complex, or :class:`Quaternion`."""
    if isinstance(m, QMatrix):
        a, b = np.trace(m.x), np.trace(m.y)
        return Quaternion(float(a.real), float(a.imag), float(b.real), float(b.imag))
    return np.trace(m)


def fro_norm(m) -> float:
    """Frobenius norm; quaternion entries use the quaternion modulus."""
    if isinstance(m, QMatrix):
        return float(np.sqrt(np.sum(np.abs(m.x) ** 2) + np.sum(np.abs(m.y) ** 2)))
    return float(np.linalg.norm(np.asarray(m)))


def max_abs(m) -> float:
    if isinstance(m, QMatrix):
        return float(np.abs(m.components).max(initial=0.0))
    return float(np.abs(np.asarray(m)).max(initial=0.0))


def realify(m) -> np.ndarray:
    """Flatten to a real vector (complex -> re, im; quaternion -> q0..q3)."""
    if isinstance(m, QMatrix):
        return m.components.reshape(-1)
    arr = np.asarray(m)
    if np.iscomplexobj(arr):
        return np.stack([arr.real, arr.imag], axis=-1).reshape(-1)
    return arr.astype(float).reshape(-1)


def unrealify(vec, shape, algebra: Algebra):
    algebra = Algebra.parse(algebra)
    v = np.asarray(vec, dtype=float)
    if algebra is Algebra.REAL:
        return v.reshape(shape)
    if algebra is Algebra.COMPLEX:
        v = v.reshape(tuple(shape) + (2,))
        return v[..., 0] + 1j * v[..., 1]
    return QMatrix.from_components(v.reshape(tuple(shape) + (4,)))


def commutator(a, b):
    return a @ b - b @ a


def skew_residual(m) -> float:
    return max_abs(m + adjoint(m))


def is_skew(m, tol: float = TAU_SKEW) -> bool:
    return skew_residual(m) <= tol


def unitarity_residual(m) -> float:
    """max |M* M - I| for an n x k matrix with orthonormal columns."""
    k = m.shape[1]
    return max_abs(adjoint(m) @ m - eye(k, algebra_of(m)))


def trace_form(a, b) -> float:
    """Ad-invariant form -1/2 Re Tr(AB) on skew-adjoint matrices.

    For quaternionic matrices the form is -1/4 Tr(AB + (AB)*); that trace is
    real by construction, so the two expressions agree.
    """
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise ValueError(f"trace_form shape mismatch {a.shape} vs {b.shape}")
    if algebra_of(a) is not algebra_of(b):
        raise ValueError("trace_form operands must share a scalar algebra")
    for m in (a, b):
        if not is_skew(m):
            raise ValueError("trace_form needs skew-adjoint operands")
    ab = a @ b
    if isinstance(ab, QMatrix):
        t = trace(ab + ab.H)
        return -0.25 * t.q0
    return -0.5 * float(np.trace(ab).real)


def form_norm(a) -> float:
    return math.sqrt(max(trace_form(a, a), 0.0))


def check_gn(m, algebra: Algebra | None = None, traceless: bool = True):
    """Validate membership in so(n), su(n) or sp(n); returns ``m`` unchanged."""
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if algebra is not None and algebra_of(m) is not Algebra.parse(algebra):
        raise ValueError("matrix has the wrong scalar algebra")
    if not is_skew(m):
        raise ValueError(f"matrix is not skew-adjoint (residual {skew_residual(m):.2e})")
    if traceless and algebra_of(m) is Algebra.COMPLEX and abs(np.trace(m)) > TRACE_TOL:
        raise ValueError("complex algebra elements must be traceless")
    return m


def assemble_gn(a, b, d):
    """The skew-adjoint matrix [[A, B], [-B*, D]]."""
    for blk in (a, d):
        if blk.shape[0] and not is_skew(blk):
            raise ValueError("diagonal blocks must be skew-adjoint")
    if b.shape != (a.shape[0], d.shape[0]):
        raise ValueError(f"B has shape {b.shape}, expected {(a.shape[0], d.shape[0])}")
    m = block([[a, b], [-adjoint(b), d]])
    if algebra_of(m) is Algebra.COMPLEX and abs(np.trace(m)) > TRACE_TOL:
        raise ValueError("complex blocks must have total trace zero")
    return m


# --- matrix exponential -------------------------------------------------

_PADE13 = (64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
           1187353796428800.0, 129060195264000.0, 10559470521600.0,
           670442572800.0, 33522128640.0, 1323241920.0, 40840800.0,
           960960.0, 16380.0, 182.0, 1.0)
_THETA13 = 5.371920351148152


def _expm_dense(a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    if n == 0:
        return a.copy()
    norm1 = np.abs(a).sum(axis=0).max()
    if norm1 == 0:
        return np.eye(n, dtype=a.dtype)
    s = 0 if norm1 <= _THETA13 else int(math.ceil(math.log2(norm1 / _THETA13)))
    a = a / 2.0**s
    b = _PADE13
    ident = np.eye(n, dtype=a.dtype)
    a2 = a @ a
    a4 = a2 @ a2
    a6 = a2 @ a4
    u = a @ (a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2)
             + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident)
    v = a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident
    r = np.linalg.solve(v - u, v + u)
    for _ in range(s):
        r = r @ r
    return r


def expm(m, t: float = 1.0):
    """exp(t M) by scaling and squaring with a degree-13 Pade approximant.

    Quaternionic input goes through the complex embedding and is pulled back.
    """
    if m.shape[0] != m.shape[1]:
        raise ValueError("expm needs a square matrix")
    if isinstance(m, QMatrix):
        return QMatrix.from_complex(_expm_dense(t * m.to_complex()))
    arr = np.asarray(m)
    if not np.iscomplexobj(arr):
        arr = arr.astype(float)
    return _expm_dense(t * arr)


def expm1(m, t: float = 1.0):
    """exp(t M) - I without cancellation for small ||t M||."""
    if isinstance(m, QMatrix):
        return QMatrix.from_complex(expm1(m.to_complex(), t))
    a = t * np.asarray(m)
    if not np.iscomplexobj(a):
        a = a.astype(float)
    nrm = np.abs(a).sum(axis=0).max(initial=0.0)
    if nrm > 0.1:
        return _expm_dense(a) - np.eye(a.shape[0], dtype=a.dtype)
    term = a.copy()
    out = a.copy()
    for j in range(2, 30):
        term = term @ a / j
        out = out + term
        if np.abs(term).max(initial=0.0) <= 1e-18 * max(np.abs(out).max(initial=0.0), 1e-300):
            break
    return out


# --- random elements ----------------------------------------------------

def random_matrix(rng: np.random.Generator, shape, algebra: Algebra):
    algebra = Algebra.parse(algebra)
    if algebra is Algebra.REAL:
        return rng.standard_normal(shape)
    if algebra is Algebra.COMPLEX:
        return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)
    return QMatrix.from_components(rng.standard_normal(tuple(shape) + (4,)) / 2.0)


def random_skew(rng: np.random.Generator, n: int, algebra: Algebra, traceless: bool | None = None):
    """Random element of so(n), su(n) or sp(n).

    Complex matrices are made traceless unless ``traceless=False`` (then u(n)).
    """
    algebra = Algebra.parse(algebra)
    m = random_matrix(rng, (n, n), algebra)
    s = (m - adjoint(m)) * 0.5
    if algebra is Algebra.COMPLEX and traceless is not False and n > 0:
        s = s - np.trace(s) / n * np.eye(n)
    return s


# --- JSON ---------------------------------------------------------------

def matrix_to_json(m) -> dict:
    algebra = algebra_of(m)
    rows, cols = m.shape
    if algebra is Algebra.QUATERNION:
        data = [[encode_scalar(m.components[i, j], algebra) for j in range(cols)] for i in range(rows)]
    else:
        data = [[encode_scalar(m[i, j], algebra) for j in range(cols)] for i in range(rows)]
    return {"algebra": algebra.value, "rows": rows, "cols": cols, "data": data}


def matrix_from_json(obj: dict):
    algebra = Algebra.parse(obj["algebra"])
    rows, cols = int(obj["rows"]), int(obj["cols"])
    data = obj["data"]
    if len(data) != rows or any(len(r) != cols for r in data):
        raise ValueError("matrix data does not match rows/cols")
    if algebra is Algebra.QUATERNION:
        comps = np.zeros((rows, cols, 4))
        for i, row in enumerate(data):
            for j, v in enumerate(row):
                comps[i, j] = decode_scalar(v, algebra).as_array()
        return QMatrix.from_components(comps)
    dtype = float if algebra is Algebra.REAL else complex
    out = np.zeros((rows, cols), dtype=dtype)
    for i, row in enumerate(data):
        for j, v in enumerate(row):
            out[i, j] = decode_scalar(v, algebra)
    return out
