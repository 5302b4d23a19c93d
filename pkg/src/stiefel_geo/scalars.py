"""Base scalar algebras: real numbers, complex numbers and quaternions.

Quaternions act on vectors from the right.  The complex 2x2 embedding

    q0 + q1 i + q2 j + q3 k  ->  [[q0 + q1 i,  q2 + q3 i],
                                  [-q2 + q3 i, q0 - q1 i]]

is used whenever a quaternionic computation is delegated to complex
linear algebra.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

TAU_ALG = 1e-13


class Algebra(enum.Enum):
    REAL = "real"
    COMPLEX = "complex"
    QUATERNION = "quaternion"

    @property
    def real_dim(self) -> int:
        return {"real": 1, "complex": 2, "quaternion": 4}[self.value]

    @classmethod
    def parse(cls, value: "Algebra | str") -> "Algebra":
        if isinstance(value, Algebra):
            return value
        try:
            return cls(value.lower())
        except ValueError:
            raise ValueError(f"unknown scalar algebra {value!r}") from None


@dataclass(frozen=True)
class Quaternion:
    q0: float = 0.0
    q1: float = 0.0
    q2: float = 0.0
    q3: float = 0.0

    def __iter__(self):
        return iter((self.q0, self.q1, self.q2, self.q3))

    def __add__(self, other: Quaternion) -> Quaternion:
        return Quaternion(*(a + b for a, b in zip(self, other)))

    def __sub__(self, other: Quaternion) -> Quaternion:
        return Quaternion(*(a - b for a, b in zip(self, other)))

    def __neg__(self) -> Quaternion:
        return Quaternion(-self.q0, -self.q1, -self.q2, -self.q3)

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return quat_mul(self, other)
        return Quaternion(*(a * other for a in self))

    __rmul__ = __mul__  # real scalars commute with everything

    def conj(self) -> Quaternion:
        return quat_conj(self)

    def __abs__(self) -> float:
        return float(np.sqrt(self.q0**2 + self.q1**2 + self.q2**2 + self.q3**2))

    def as_array(self) -> np.ndarray:
        return np.array([self.q0, self.q1, self.q2, self.q3], dtype=float)

    @property
    def split(self) -> tuple[complex, complex]:
        """The pair (alpha, beta) with q = alpha + beta j."""
        return complex(self.q0, self.q1), complex(self.q2, self.q3)


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def quat_mul(a: Quaternion, b: Quaternion) -> Quaternion:
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return Quaternion(
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    )


def quat_conj(q: Quaternion) -> Quaternion:
    return Quaternion(q.q0, -q.q1, -q.q2, -q.q3)


def quat_to_complex_2x2(q: Quaternion) -> np.ndarray:
    alpha, beta = q.split
    return np.array([[alpha, beta], [-beta.conjugate(), alpha.conjugate()]])


def complex_2x2_to_quat(m: np.ndarray, tol: float = 1e-12) -> Quaternion:
    """Inverse of :func:`quat_to_complex_2x2`; rejects matrices outside the image."""
    m = np.asarray(m, dtype=complex)
    if abs(m[1, 1] - m[0, 0].conjugate()) > tol or abs(m[1, 0] + m[0, 1].conjugate()) > tol:
        raise ValueError("matrix is not the image of a quaternion")
    return Quaternion(m[0, 0].real, m[0, 0].imag, m[0, 1].real, m[0, 1].imag)


def quat_vec_inner(v, w) -> Quaternion:
    """Quaternionic Hermitian product (v, w) = sum conj(v_l) w_l."""
    total = Quaternion()
    for a, b in zip(v, w):
        total = total + quat_mul(quat_conj(a), b)
    return total


def encode_scalar(x, algebra: Algebra):
    """JSON encoding: bare number, [re, im] or [q0, q1, q2, q3]."""
    if algebra is Algebra.REAL:
        return float(np.real(x))
    if algebra is Algebra.COMPLEX:
        x = complex(x)
        return [x.real, x.imag]
    return [float(c) for c in x]


def decode_scalar(obj, algebra: Algebra):
    if algebra is Algebra.REAL:
        if isinstance(obj, (list, tuple)):
            raise ValueError("real scalar must be a bare number")
        return float(obj)
    if algebra is Algebra.COMPLEX:
        if isinstance(obj, (int, float)):
            return complex(obj)
        re, im = obj
        return complex(re, im)
    if isinstance(obj, (int, float)):
        return Quaternion(float(obj))
    if len(obj) != 4:
        raise ValueError("quaternion must have four components")
    return Quaternion(*map(float, obj))
