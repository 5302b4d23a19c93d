import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from stiefel_geo.linalg import (
    QMatrix,
    adjoint,
    assemble_gn,
    block,
    check_gn,
    expm,
    expm1,
    eye,
    fro_norm,
    i_nk,
    matrix_from_json,
    matrix_to_json,
    max_abs,
    random_matrix,
    random_skew,
    re_trace,
    realify,
    split_blocks,
    trace,
    trace_form,
    unitarity_residual,
    unrealify,
    zeros,
)
from stiefel_geo.scalars import Algebra, Quaternion

ALGS = list(Algebra)


def taylor_oracle(m: np.ndarray, terms: int = 30) -> np.ndarray:
    out = np.eye(m.shape[0], dtype=m.dtype)
    term = out.copy()
    for j in range(1, terms):
        term = term @ m / j
        out = out + term
    return out


def scalar_matrix(m: QMatrix) -> list:
    comps = m.components
    return [[Quaternion(*comps[i, j]) for j in range(m.shape[1])] for i in range(m.shape[0])]


def test_quaternion_product_matches_entrywise_arithmetic():
    rng = np.random.default_rng(1)
    a, b = random_matrix(rng, (3, 2), Algebra.QUATERNION), random_matrix(rng, (2, 4), Algebra.QUATERNION)
    sa, sb = scalar_matrix(a), scalar_matrix(b)
    sc = scalar_matrix(a @ b)
    for i in range(3):
        for j in range(4):
            ref = Quaternion()
            for l in range(2):
                ref = ref + sa[i][l] * sb[l][j]
            assert np.allclose(sc[i][j].as_array(), ref.as_array(), atol=1e-13)
    sh = scalar_matrix(adjoint(a))
    for i in range(3):
        for j in range(2):
            assert sh[j][i] == sa[i][j].conj()


def test_adjoint_examples():
    for alg in ALGS:
        assert max_abs(adjoint(eye(3, alg)) - eye(3, alg)) == 0
    q = QMatrix.from_components([[[0, 1, 0, 0]]])
    assert np.array_equal(adjoint(q).components, [[[0, -1, 0, 0]]])


@pytest.mark.parametrize("alg", ALGS)
def test_adjoint_laws(alg):
    rng = np.random.default_rng(3)
    m, n = random_matrix(rng, (3, 2), alg), random_matrix(rng, (2, 3), alg)
    assert max_abs(adjoint(adjoint(m)) - m) == 0
    assert max_abs(adjoint(m @ n) - adjoint(n) @ adjoint(m)) < 1e-14


def test_complex_embedding_roundtrip():
    rng = np.random.default_rng(4)
    a, b = random_matrix(rng, (3, 3), Algebra.QUATERNION), random_matrix(rng, (3, 3), Algebra.QUATERNION)
    assert np.abs((a @ b).to_complex() - a.to_complex() @ b.to_complex()).max() < 1e-13
    assert np.abs(adjoint(a).to_complex() - a.to_complex().conj().T).max() == 0
    assert max_abs(QMatrix.from_complex(a.to_complex()) - a) == 0
    with pytest.raises(ValueError):
        QMatrix.from_complex(np.arange(4.0).reshape(2, 2))


def test_trace_form_examples():
    a = np.zeros((3, 3))
    a[0, 1], a[1, 0] = 1.0, -1.0
    assert trace_form(a, a) == 1.0
    assert trace_form(a, np.zeros((3, 3))) == 0.0
    with pytest.raises(ValueError):
        trace_form(a, np.eye(3))
    with pytest.raises(ValueError):
        trace_form(a, np.zeros((2, 2)))


@pytest.mark.parametrize("alg", ALGS)
def test_trace_form_properties(alg):
    rng = np.random.default_rng(7)
    for _ in range(20):
        a, b, c = (random_skew(rng, 4, alg) for _ in range(3))
        assert abs(trace_form(a, b) - trace_form(b, a)) < 1e-13
        bc = b @ c - c @ b
        ca = c @ a - a @ c
        assert abs(trace_form(a, bc) - trace_form(b, ca)) < 1e-12
        assert trace_form(a, a) > 0
        # equals 1/2 Re Tr(A* B)
        assert abs(trace_form(a, b) - 0.5 * re_trace(adjoint(a) @ b)) < 1e-13


def test_quaternion_trace_form_is_real():
    rng = np.random.default_rng(8)
    worst = 0.0
    for _ in range(50):
        a, b = random_skew(rng, 3, Algebra.QUATERNION), random_skew(rng, 3, Algebra.QUATERNION)
        ab = a @ b
        t = trace(ab + ab.H)
        worst = max(worst, abs(t.q1), abs(t.q2), abs(t.q3))
    assert worst < 1e-13


def test_expm_examples():
    for alg in ALGS:
        assert max_abs(expm(zeros((3, 3), alg)) - eye(3, alg)) == 0
    j = np.array([[0.0, 1.0], [-1.0, 0.0]])
    for t in (0.3, 1.0, 2.5, 10.0):
        ref = np.array([[math.cos(t), math.sin(t)], [-math.sin(t), math.cos(t)]])
        assert np.abs(expm(j, t) - ref).max() < 1e-13


@pytest.mark.parametrize("alg", [Algebra.REAL, Algebra.COMPLEX])
def test_expm_vs_taylor_and_scipy(alg):
    rng = np.random.default_rng(9)
    for _ in range(30):
        m = random_matrix(rng, (4, 4), alg)
        m = m / np.abs(m).sum(axis=0).max()
        assert np.abs(expm(m) - taylor_oracle(m)).max() < 1e-12
        big = random_matrix(rng, (5, 5), alg) * 4
        assert np.abs(expm(big) - scipy.linalg.expm(big)).max() < 1e-10 * np.abs(scipy.linalg.expm(big)).max()


@pytest.mark.parametrize("alg,n", [(Algebra.REAL, 3), (Algebra.REAL, 4), (Algebra.REAL, 5),
                                   (Algebra.COMPLEX, 3), (Algebra.COMPLEX, 4), (Algebra.COMPLEX, 5),
                                   (Algebra.QUATERNION, 2), (Algebra.QUATERNION, 3)])
def test_expm_group_properties(alg, n):
    rng = np.random.default_rng(10 + n)
    for _ in range(200):
        m = random_skew(rng, n, alg) * 2
        e = expm(m)
        assert fro_norm(adjoint(e) @ e - eye(n, alg)) <= 1e-10
        if alg is Algebra.COMPLEX:
            assert abs(np.linalg.det(e) - 1) <= 1e-9
    for _ in range(20):
        m = random_skew(rng, n, alg)
        s, t = rng.uniform(-2, 2, 2)
        assert max_abs(expm(m, s + t) - expm(m, s) @ expm(m, t)) < 1e-10


def test_quaternion_expm_is_pullback():
    rng = np.random.default_rng(12)
    for _ in range(50):
        m = random_skew(rng, 3, Algebra.QUATERNION) * 3
        assert np.abs(expm(m).to_complex() - scipy.linalg.expm(m.to_complex())).max() < 1e-10


@pytest.mark.parametrize("alg", ALGS)
def test_expm1_small_arguments(alg):
    rng = np.random.default_rng(13)
    m = random_skew(rng, 3, alg)
    for h in (1e-2, 1e-6, 1e-10):
        direct = expm(m, h) - eye(3, alg)
        small = expm1(m, h)
        assert max_abs(small - m * h) < 2 * h * h * fro_norm(m) ** 2
        assert max_abs(small - direct) < 1e-15 + 1e-3 * h
    assert max_abs(expm1(m, 1.0) - (expm(m) - eye(3, alg))) < 1e-14


def test_assemble_examples():
    z1, z2 = np.zeros((1, 1)), np.zeros((2, 2))
    assert np.array_equal(assemble_gn(z1, np.zeros((1, 2)), z2), np.zeros((3, 3)))
    assert np.array_equal(assemble_gn(z1, np.array([[1.0, 0.0]]), z2),
                          np.array([[0, 1, 0], [-1, 0, 0], [0, 0, 0]]))
    with pytest.raises(ValueError):
        assemble_gn(np.ones((1, 1)), np.zeros((1, 2)), z2)
    with pytest.raises(ValueError):
        assemble_gn(np.array([[1j]]), np.zeros((1, 1), complex), np.array([[1j]]))


@pytest.mark.parametrize("alg", ALGS)
def test_assemble_split_roundtrip(alg):
    rng = np.random.default_rng(14)
    for k in (1, 2, 3):
        a = random_skew(rng, k, alg, traceless=False)
        d = random_skew(rng, 4 - k, alg, traceless=False)
        if alg is Algebra.COMPLEX and 4 - k:
            d = d - (np.trace(a) + np.trace(d)) / (4 - k) * np.eye(4 - k)
        b = random_matrix(rng, (k, 4 - k), alg)
        m = assemble_gn(a, b, d)
        parts = split_blocks(m, k)
        assert max_abs(parts.A - a) == 0 and max_abs(parts.B - b) == 0 and max_abs(parts.D - d) == 0
        assert max_abs(parts.C + adjoint(b)) == 0
        assert max_abs(block([[parts.A, parts.B], [parts.C, parts.D]]) - m) == 0
        check_gn(m)


def test_check_gn_rejects_trace():
    with pytest.raises(ValueError):
        check_gn(np.diag([1j, 1j]))
    with pytest.raises(ValueError):
        check_gn(np.eye(2))
    check_gn(np.diag([1j, -1j]))


@pytest.mark.parametrize("alg", ALGS)
def test_realify_roundtrip(alg):
    rng = np.random.default_rng(15)
    m = random_matrix(rng, (3, 2), alg)
    v = realify(m)
    assert v.shape == (6 * alg.real_dim,)
    assert max_abs(unrealify(v, (3, 2), alg) - m) == 0


@pytest.mark.parametrize("alg", ALGS)
def test_json_roundtrip(alg):
    rng = np.random.default_rng(16)
    m = random_matrix(rng, (2, 3), alg)
    obj = matrix_to_json(m)
    assert obj["rows"] == 2 and obj["cols"] == 3 and obj["algebra"] == alg.value
    assert max_abs(matrix_from_json(obj) - m) == 0
    with pytest.raises(ValueError):
        matrix_from_json({**obj, "rows": 3})


def test_i_nk_and_unitarity():
    assert np.array_equal(i_nk(4, 2), np.eye(4)[:, :2])
    assert unitarity_residual(i_nk(3, 1, Algebra.QUATERNION)) == 0


@given(st.integers(0, 2**32 - 1), st.sampled_from(ALGS), st.integers(1, 4))
@settings(max_examples=40, deadline=None)
def test_random_skew_in_algebra(seed, alg, n):
    m = random_skew(np.random.default_rng(seed), n, alg)
    check_gn(m)
    assert max_abs(expm(m) @ adjoint(expm(m)) - eye(n, alg)) < 1e-12
