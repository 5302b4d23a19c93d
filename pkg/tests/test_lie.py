import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stiefel_geo.lie import (
    DistKind,
    Distribution,
    bracket,
    central_direction,
    decompose,
    dim_gn,
    embed_k,
    g_basis,
    gn_basis,
    k_basis,
    p_basis,
    p_perp_basis,
    pair,
    project_perp,
    random_carrier_group,
    random_element,
    random_group,
    random_isotropy,
    stiefel_project,
    verify_structure,
)
from stiefel_geo.linalg import (
    adjoint,
    eye,
    i_nk,
    max_abs,
    random_matrix,
    random_skew,
    realify,
    trace_form,
    zeros,
)
from stiefel_geo.scalars import Algebra

R, C, H = Algebra.REAL, Algebra.COMPLEX, Algebra.QUATERNION
KINDS = [DistKind.REDUCED, DistKind.ORTHOGONAL, DistKind.QUASIGEODESIC]
GRID = [(3, 1, R), (4, 2, R), (5, 2, R), (5, 3, R), (3, 1, C), (4, 2, C), (5, 2, C), (5, 3, C),
        (2, 1, H), (3, 1, H)]


def gen(n, i, j):
    a = np.zeros((n, n))
    a[i - 1, j - 1], a[j - 1, i - 1] = 1.0, -1.0
    return a


def random_carrier_element(rng, d):
    return random_element(rng, g_basis(d))


def test_bracket_examples():
    a = gen(3, 1, 2)
    assert max_abs(bracket(a, a)) == 0
    assert np.array_equal(bracket(gen(3, 1, 2), gen(3, 1, 3)), -gen(3, 2, 3))


def test_generator_commutator_identity():
    # [A_ij, A_fl] = d_jf A_il + d_il A_jf - d_jl A_if - d_if A_jl, by direct multiplication
    n = 4
    d = lambda a, b: float(a == b)  # noqa: E731

    def A(i, j):
        return gen(n, i, j) if i != j else np.zeros((n, n))

    for i, j, f, l in itertools.product(range(1, n + 1), repeat=4):
        if i == j or f == l:
            continue
        rhs = d(j, f) * A(i, l) + d(i, l) * A(j, f) - d(j, l) * A(i, f) - d(i, f) * A(j, l)
        assert np.array_equal(bracket(A(i, j), A(f, l)), rhs)


def test_jacobi_and_skewness():
    rng = np.random.default_rng(0)
    for alg in Algebra:
        a, b, c = (random_skew(rng, 4, alg) for _ in range(3))
        jac = bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b))
        assert max_abs(jac) < 1e-12
        assert max_abs(bracket(a, b) + bracket(b, a)) == 0
        ab = bracket(a, b)
        assert max_abs(ab + adjoint(ab)) < 1e-14


@pytest.mark.parametrize("alg", list(Algebra))
def test_basis_dimensions(alg):
    for n in range(1, 6):
        basis = gn_basis(n, alg)
        assert len(basis) == dim_gn(n, alg)
        if basis:
            vecs = np.stack([realify(b) for b in basis])
            assert np.linalg.matrix_rank(vecs) == len(basis)
    assert [dim_gn(n, R) for n in (2, 3, 4)] == [1, 3, 6]
    assert [dim_gn(n, C) for n in (2, 3)] == [3, 8]
    assert [dim_gn(n, H) for n in (1, 2)] == [3, 10]


def test_basis_order_real_generators_first():
    basis = gn_basis(3, C)
    assert all(np.isrealobj(b) or np.abs(b.imag).max() == 0 for b in basis[:3])
    assert all(np.abs(b.real).max() == 0 for b in basis[3:])


@pytest.mark.parametrize("n,k,alg", GRID)
@pytest.mark.parametrize("kind", KINDS)
def test_dimensions_add_up(n, k, alg, kind):
    d = Distribution(kind, n, k, alg)
    assert len(p_basis(d)) + len(k_basis(d)) == d.dim_g
    assert len(p_basis(d)) + len(p_perp_basis(d)) == d.dim_g
    for a in p_basis(d):
        for b in p_perp_basis(d):
            assert abs(trace_form(a, b)) < 1e-12


@pytest.mark.parametrize("n,k,alg", [(4, 2, R), (5, 2, C), (3, 1, H)])
def test_reduced_decompose_blocks(n, k, alg):
    rng = np.random.default_rng(1)
    d = Distribution(DistKind.REDUCED, n, k, alg)
    x = random_carrier_element(rng, d)
    s = decompose(x, d)
    assert max_abs(s.p + s.k - x) < 1e-15
    if alg is not C:
        assert max_abs(s.p[:k, :k] - x[:k, :k]) == 0
        assert max_abs(s.k[k:, k:] - x[k:, k:]) == 0
    low = s.p[k:, k:]
    if alg is C:  # only the central direction survives in the lower block
        assert max_abs(low - low[0, 0] * np.eye(n - k)) < 1e-15
    else:
        assert max_abs(low) == 0
    assert max_abs(s.k[:k, :]) == 0


@pytest.mark.parametrize("alg", [R, H])
def test_quasigeodesic_decompose_literal(alg):
    rng = np.random.default_rng(2)
    n, k = 4, 2
    d = Distribution(DistKind.QUASIGEODESIC, n, k, alg)
    a1, a3 = random_skew(rng, k, alg), random_skew(rng, n - k, alg)
    a2, b = random_matrix(rng, (k, n - k), alg), random_skew(rng, k, alg)
    top = zeros((n, n), alg)
    top[:k, :k], top[k:, k:], top[:k, k:], top[k:, :k] = a1, a3, a2, -adjoint(a2)
    s = decompose(pair(top, b), d)
    p_top = zeros((n, n), alg)
    p_top[:k, k:], p_top[k:, :k] = a2, -adjoint(a2)
    k_top = zeros((n, n), alg)
    k_top[:k, :k], k_top[k:, k:] = a1, a3
    assert max_abs(s.p - pair(p_top, b - a1)) < 1e-15
    assert max_abs(s.k - pair(k_top, a1)) < 1e-15


def test_complex_quasigeodesic_decompose_traceless_blocks():
    rng = np.random.default_rng(3)
    n, k = 5, 2
    d = Distribution(DistKind.QUASIGEODESIC, n, k, C)
    a1, a3 = random_skew(rng, k, C), random_skew(rng, n - k, C)
    top = zeros((n, n), C)
    top[:k, :k], top[k:, k:] = a1, a3
    b = random_skew(rng, k, C)
    s = decompose(pair(top, b), d)
    assert max_abs(s.k - pair(top, a1)) < 1e-15
    assert max_abs(s.p - pair(zeros((n, n), C), b - a1)) < 1e-15


@pytest.mark.parametrize("kind", KINDS + [DistKind.GRASSMANN])
def test_decompose_idempotent(kind):
    rng = np.random.default_rng(4)
    d = Distribution(kind, 4, 2, C)
    pp = random_element(rng, p_basis(d))
    s = decompose(pp, d)
    assert max_abs(s.p - pp) < 1e-15 and max_abs(s.k) < 1e-15


def test_p_perp_examples():
    red = p_perp_basis(Distribution(DistKind.REDUCED, 3, 1, R))
    assert len(red) == 1 and np.array_equal(red[0], gen(3, 2, 3))
    qg = p_perp_basis(Distribution(DistKind.QUASIGEODESIC, 3, 1, R))
    assert len(qg) == 1 and np.array_equal(qg[0], pair(gen(3, 2, 3), np.zeros((1, 1))))


@pytest.mark.parametrize("kind", [DistKind.REDUCED, DistKind.ORTHOGONAL])
@pytest.mark.parametrize("alg", list(Algebra))
def test_split_is_orthogonal(kind, alg):
    rng = np.random.default_rng(5)
    d = Distribution(kind, 4 if alg is not H else 3, 2 if alg is not H else 1, alg)
    worst = 0.0
    for _ in range(500):
        s = decompose(random_carrier_element(rng, d), d)
        worst = max(worst, abs(trace_form(s.p, s.k)))
    assert worst < 1e-12


def test_quasigeodesic_split_is_oblique():
    rng = np.random.default_rng(6)
    d = Distribution(DistKind.QUASIGEODESIC, 4, 2, R)
    vals = [abs(trace_form(*vars(decompose(random_carrier_element(rng, d), d)).values())) for _ in range(20)]
    assert max(vals) > 1e-3


def test_project_perp_quasigeodesic():
    rng = np.random.default_rng(7)
    d = Distribution(DistKind.QUASIGEODESIC, 5, 2, C)
    x = random_carrier_element(rng, d)
    pp = project_perp(x, d)
    for b in p_basis(d):
        assert abs(trace_form(x - pp, b) - trace_form(x, b)) < 1e-12
        assert abs(trace_form(pp, b)) < 1e-12


@pytest.mark.parametrize("n,k,alg", GRID)
@pytest.mark.parametrize("kind", KINDS + [DistKind.GRASSMANN])
def test_ad_k_invariance(n, k, alg, kind):
    rng = np.random.default_rng(8)
    d = Distribution(kind, n, k, alg)
    for _ in range(5):
        h = random_isotropy(rng, d)
        p = random_element(rng, p_basis(d))
        assert max_abs(decompose(h @ p @ adjoint(h), d).k) < 1e-10


def test_structure_examples():
    assert verify_structure(Distribution(DistKind.REDUCED, 4, 2, R)).passed
    assert verify_structure(Distribution(DistKind.ORTHOGONAL, 3, 1, C)).passed
    for alg in Algebra:
        rep = verify_structure(Distribution(DistKind.REDUCED, 3, 3, alg))
        assert rep.passed and rep.dims["k"] == 0 and rep.dims["span"] == rep.dims["g"]


def test_structure_real_k2_pairs_are_not_closed():
    # so(2) is abelian: brackets of p never reach the second factor of k
    for kind in (DistKind.ORTHOGONAL, DistKind.QUASIGEODESIC):
        rep = verify_structure(Distribution(kind, 4, 2, R))
        assert not rep.checks["k_in_pp"]["pass"]
        assert rep.checks["p_k_in_p"]["pass"] and rep.checks["bracket_generating"]["pass"]


def test_central_direction():
    z = central_direction(5, 2, C)
    assert abs(np.trace(z)) == 0 and max_abs(z + adjoint(z)) == 0
    assert central_direction(5, 2, R) is None and central_direction(3, 3, C) is None


def test_stiefel_project_examples():
    d = Distribution(DistKind.REDUCED, 4, 2, R)
    assert np.array_equal(stiefel_project(eye(4, R), d), i_nk(4, 2))
    rng = np.random.default_rng(9)
    s = random_group(rng, 2, C)
    dp = Distribution(DistKind.ORTHOGONAL, 4, 2, C)
    assert max_abs(stiefel_project(pair(eye(4, C), s), dp) - i_nk(4, 2, C) @ adjoint(s)) < 1e-15
    g = random_group(rng, 5, R)
    assert np.array_equal(stiefel_project(g, Distribution(DistKind.REDUCED, 5, 2, R)), g[:, :2])
    with pytest.raises(ValueError):
        stiefel_project(2 * eye(4, R), d)


def test_embed_k():
    rng = np.random.default_rng(10)
    s = random_group(rng, 2, H)
    e = embed_k(s, 3)
    assert max_abs(e[:2, :2] - s) == 0 and max_abs(e[2:, 2:] - eye(1, H)) == 0


def test_distribution_json():
    d = Distribution("qg", 5, 2, "complex")
    assert d.kind is DistKind.QUASIGEODESIC
    assert Distribution.from_json(d.to_json()) == d
    with pytest.raises(ValueError):
        Distribution("reduced", 2, 3)
    with pytest.raises(ValueError):
        Distribution("diagonal", 3, 1)


@given(st.integers(0, 2**32 - 1), st.sampled_from(GRID), st.sampled_from(KINDS))
@settings(max_examples=30, deadline=None)
def test_random_group_elements_are_unitary(seed, point, kind):
    n, k, alg = point
    d = Distribution(kind, n, k, alg)
    g = random_carrier_group(np.random.default_rng(seed), d)
    assert max_abs(adjoint(g) @ g - eye(d.size, alg)) < 1e-12
    m = stiefel_project(g, d)
    assert max_abs(adjoint(m) @ m - eye(k, alg)) < 1e-12


@pytest.mark.parametrize("alg", list(Algebra))
def test_degenerate_k_equals_n(alg):
    n = 2 if alg is Algebra.QUATERNION else 3
    for kind in (DistKind.REDUCED, DistKind.ORTHOGONAL):
        assert verify_structure(Distribution(kind, n, n, alg)).passed
    # the quasi-geodesic p = {(0, B)} is a subalgebra when k = n, so brackets never leave it
    rep = verify_structure(Distribution(DistKind.QUASIGEODESIC, n, n, alg))
    assert rep.checks["p_k_in_p"]["pass"]
    assert not rep.checks["bracket_generating"]["pass"]
    assert rep.dims["span"] == rep.dims["p"] == rep.dims["g"] // 2
