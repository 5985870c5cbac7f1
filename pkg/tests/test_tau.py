from fractions import Fraction as F

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from outlierfree.errors import SingularMatrixError, SizeError
from outlierfree.exact_splines import SymbolCoeffs, alpha_coeffs
from outlierfree.tau import (HankelVariant, StructuredMatrix, TauAlgebra, build_hankel,
                             build_toeplitz, structured_matvec, structured_solve, tau_apply,
                             tau_apply_transpose, tau_eigensystem, tau_matrix,
                             tau_transform_column)

PAIRS = [
    (HankelVariant.H2, -1, TauAlgebra.SINE),
    (HankelVariant.H1, 1, TauAlgebra.COSINE),
    (HankelVariant.H21, 1, TauAlgebra.MIXED),
    (HankelVariant.H1, -1, TauAlgebra.SHIFTED_SINE),
]


def test_toeplitz_examples():
    m = build_toeplitz(alpha_coeffs(1, 0), 3)
    np.testing.assert_allclose(m, [[2 / 3, 1 / 6, 0], [1 / 6, 2 / 3, 1 / 6], [0, 1 / 6, 2 / 3]])
    k = build_toeplitz(alpha_coeffs(1, 1), 3, exact=True)
    assert (k == np.array([[2, -1, 0], [-1, 2, -1], [0, -1, 2]], dtype=object)).all()
    assert build_toeplitz(alpha_coeffs(2, 0), 6)[0, 5] == 0


def test_hankel_examples():
    assert not build_hankel(alpha_coeffs(1, 0), 4, "H2").any()
    h = build_hankel(alpha_coeffs(1, 0), 4, HankelVariant.H1, exact=True)
    expected = np.zeros((4, 4), dtype=object)
    expected[0, 0] = expected[3, 3] = F(1, 6)
    assert (h == expected).all()
    h = build_hankel(alpha_coeffs(2, 0), 5, HankelVariant.H21, exact=True)
    assert h[0, 0] == F(-1, 120)
    assert h[4, 4] == F(13, 60)
    assert h[3, 4] == h[4, 3] == F(1, 120)
    assert sum(x != 0 for x in h.ravel()) == 4


def test_hankel_is_constant_on_antidiagonals():
    a = alpha_coeffs(4, 0)
    for v in HankelVariant:
        h = build_hankel(a, 9, v)
        top = h[:4, :4]
        for s in range(4):
            vals = {top[i, s - i] for i in range(s + 1)}
            assert len(vals) == 1


def test_size_error():
    with pytest.raises(SizeError):
        build_toeplitz(alpha_coeffs(3, 0), 3)
    with pytest.raises(SizeError):
        build_hankel(alpha_coeffs(3, 0), 3, "H1")
    with pytest.raises(SizeError):
        tau_apply(TauAlgebra.SINE, 4, np.ones(5))


def test_eigensystem_examples():
    e = tau_eigensystem(alpha_coeffs(1, 1), 3, TauAlgebra.SINE)
    np.testing.assert_allclose(e.eigenvalues, [2 - np.sqrt(2), 2, 2 + np.sqrt(2)], atol=1e-14)
    e = tau_eigensystem(alpha_coeffs(3, 1), 6, TauAlgebra.COSINE)
    assert e.eigenvalues[0] == 0.0
    e = tau_eigensystem(alpha_coeffs(1, 0), 2, TauAlgebra.MIXED)
    j = np.arange(1, 3)
    np.testing.assert_allclose(e.eigenvalues, 2 / 3 + np.cos((2 * j - 1) * np.pi / 5) / 3, atol=1e-15)


def test_transform_column_examples():
    np.testing.assert_allclose(tau_transform_column(TauAlgebra.SINE, 3, 2),
                               [np.sqrt(2) / 2, 0, -np.sqrt(2) / 2], atol=1e-15)
    np.testing.assert_allclose(tau_transform_column(TauAlgebra.COSINE, 7, 1), np.full(7, 1 / np.sqrt(7)))
    np.testing.assert_allclose(tau_transform_column(TauAlgebra.SHIFTED_SINE, 2, 2),
                               [1 / np.sqrt(2), -1 / np.sqrt(2)], atol=1e-15)
    with pytest.raises(IndexError):
        tau_transform_column(TauAlgebra.SINE, 3, 4)


@pytest.mark.parametrize("alg", list(TauAlgebra))
@pytest.mark.parametrize("n", [1, 2, 3, 8, 33, 128])
def test_fast_transforms_match_dense(alg, n):
    rng = np.random.default_rng(n)
    v = rng.standard_normal(n)
    q = tau_matrix(alg, n)
    np.testing.assert_allclose(tau_apply(alg, n, v), q @ v, atol=1e-12)
    np.testing.assert_allclose(tau_apply_transpose(alg, n, v), q.T @ v, atol=1e-12)
    block = rng.standard_normal((n, 3))
    np.testing.assert_allclose(tau_apply(alg, n, block), q @ block, atol=1e-12)
    np.testing.assert_allclose(tau_apply(alg, n, tau_apply_transpose(alg, n, v)), v, atol=1e-12)
    assert np.linalg.norm(tau_apply(alg, n, v)) == pytest.approx(np.linalg.norm(v), rel=1e-12)


@pytest.mark.parametrize("alg", list(TauAlgebra))
def test_unit_vectors_give_columns(alg):
    n = 6
    for j in range(1, n + 1):
        e = np.zeros(n)
        e[j - 1] = 1
        np.testing.assert_allclose(tau_apply(alg, n, e), tau_transform_column(alg, n, j), atol=1e-14)


@pytest.mark.parametrize("variant,sign,alg", PAIRS)
@pytest.mark.parametrize("p", range(1, 7))
@pytest.mark.parametrize("r", [0, 1])
def test_eigen_residual_spline_coeffs(variant, sign, alg, p, r):
    for n in (p + 1, 16, 64):
        m = StructuredMatrix(alpha_coeffs(p, r), n, variant, sign)
        assert m.algebra is alg
        a = m.dense()
        e = m.eigensystem()
        u = tau_matrix(alg, n)
        res = np.linalg.norm(a @ u - u * e.eigenvalues, axis=0).max()
        assert res <= 1e-10 * np.linalg.norm(a)


@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_eigen_residual_random_rational(data):
    p = data.draw(st.integers(1, 6))
    coeffs = data.draw(st.lists(st.fractions(-3, 3, max_denominator=50), min_size=p + 1,
                                max_size=p + 1))
    n = data.draw(st.integers(p + 1, 40))
    variant, sign, alg = data.draw(st.sampled_from(PAIRS))
    m = StructuredMatrix(SymbolCoeffs.from_values(coeffs), n, variant, sign)
    a = m.dense()
    u = tau_matrix(alg, n)
    lam = m.eigensystem().eigenvalues
    res = np.linalg.norm(a @ u - u * lam, axis=0).max()
    assert res <= 1e-10 * max(np.linalg.norm(a), 1e-300)


def test_centrosymmetry_of_variants():
    a = alpha_coeffs(4, 0)
    for v in (HankelVariant.H1, HankelVariant.H2):
        h = build_hankel(a, 9, v, exact=True)
        assert (h[::-1, ::-1] == h).all()
    h = build_hankel(a, 9, HankelVariant.H21, exact=True)
    assert (h[::-1, ::-1] != h).any()


@pytest.mark.parametrize("alg", [TauAlgebra.SINE, TauAlgebra.SHIFTED_SINE])
def test_algebra_closure(alg):
    # Q diag(d) Q^T must equal T(c) - H(c) for coefficients c read off its first column
    n = 9
    rng = np.random.default_rng(3)
    q = tau_matrix(alg, n)
    a = q @ np.diag(rng.standard_normal(n)) @ q.T
    col = a[:, 0]
    c = np.zeros(n + 2)
    if alg is TauAlgebra.SINE:
        # a_{k1} = c_{k-1} - c_{k+1}
        for k in range(n, 0, -1):
            c[k - 1] = col[k - 1] + c[k + 1]
        variant = HankelVariant.H2
    else:
        # a_{k1} = c_{k-1} - c_k
        for k in range(n, 0, -1):
            c[k - 1] = col[k - 1] + c[k]
        variant = HankelVariant.H1
    rebuilt = StructuredMatrix(SymbolCoeffs.from_values(list(c[:n])), n, variant, -1).dense()
    np.testing.assert_allclose(rebuilt, a, atol=1e-12)


def test_structured_matvec():
    rng = np.random.default_rng(0)
    for variant, sign, _ in PAIRS:
        for p in (1, 3, 5):
            for n in (p + 1, p + 2, 30):
                m = StructuredMatrix(alpha_coeffs(p, 1), n, variant, sign, scale=F(7, 2))
                v = rng.standard_normal(n)
                np.testing.assert_allclose(structured_matvec(m, v), m.dense() @ v, atol=1e-12)


def test_structured_solve_round_trip():
    rng = np.random.default_rng(1)
    for variant, sign, _ in PAIRS:
        for p in (1, 2, 4):
            m = StructuredMatrix(alpha_coeffs(p, 0), 40, variant, sign, scale=F(1, 41))
            b = rng.standard_normal(40)
            x = structured_solve(m, b)
            assert np.linalg.norm(m.matvec(x) - b) <= 1e-10 * np.linalg.norm(b)


def test_mass_solve_against_dense_lu():
    m = StructuredMatrix(alpha_coeffs(1, 0), 12, HankelVariant.H2, -1, scale=F(1, 13))
    b = np.arange(1.0, 13.0)
    np.testing.assert_allclose(m.solve(b), scipy.linalg.lu_solve(scipy.linalg.lu_factor(m.dense()), b),
                               rtol=1e-12, atol=1e-12)


def test_neumann_stiffness_is_singular_at_first_index():
    m = StructuredMatrix(alpha_coeffs(3, 1), 10, HankelVariant.H1, 1)
    with pytest.raises(SingularMatrixError) as info:
        m.solve(np.ones(10))
    assert info.value.index == 1


def test_no_algebra_for_other_combinations():
    m = StructuredMatrix(alpha_coeffs(2, 0), 5, HankelVariant.H2, 1)
    assert m.algebra is None
    with pytest.raises(ValueError):
        m.eigensystem()
