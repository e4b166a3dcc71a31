import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from collindiag import (
    ConvergenceError,
    DataError,
    RankDeficiencyError,
    crossprod,
    det_spd,
    invert_spd,
    ols,
    scale,
    sym_eigen,
)
from collindiag import _backend
from collindiag import numerics
from oracles import char_poly_eigs, normal_eq_r2


def _sym(rng, k, scale_=1.0):
    a = rng.standard_normal((k, k)) * scale_
    return (a + a.T) / 2


def test_crossprod_examples(theil_x):
    u = scale(theil_x, "unit_length")
    c = crossprod(u)
    assert np.allclose(np.diag(c), 1.0, atol=1e-15)
    assert np.array_equal(c, c.T)
    assert crossprod(np.ones((17, 1))).tolist() == [[17.0]]


def test_crossprod_dummy_offdiagonal(slm):
    c = crossprod(scale(slm("twentys"), "unit_length"))
    assert c[0, 1] == pytest.approx(math.sqrt(7 / 17), abs=1e-15)


def test_identity_eigen():
    e = sym_eigen(np.eye(3))
    assert e.values.tolist() == [1.0, 1.0, 1.0]
    assert np.array_equal(e.vectors, np.eye(3))


def test_dummy_matrix_eigen():
    r = math.sqrt(7 / 17)
    e = sym_eigen([[1.0, r], [r, 1.0]])
    assert e.values == pytest.approx([1 + r, 1 - r], abs=1e-14)
    assert e.values[0] == pytest.approx(1.64169, abs=5e-6)
    assert e.values[1] == pytest.approx(0.35831, abs=5e-6)


def test_theil_crossprod_condition(theil_x):
    e = sym_eigen(crossprod(scale(theil_x, "unit_length")))
    assert math.sqrt(e.ratio) == pytest.approx(53.3967, abs=5e-3)


def test_eigen_rejects_asymmetric():
    with pytest.raises(DataError, match="symmetric"):
        sym_eigen([[1.0, 2.0], [2.0 + 1e-12, 1.0]])


def test_eigen_sweep_cap(monkeypatch):
    monkeypatch.setattr(numerics, "JACOBI_MAX_SWEEPS", 0)
    with pytest.raises(ConvergenceError):
        sym_eigen([[1.0, 0.5], [0.5, 1.0]])


@pytest.mark.parametrize("k", [1, 2, 3, 5, 8, 20])
def test_eigen_invariants(k):
    rng = np.random.default_rng(k)
    for _ in range(20):
        s = _sym(rng, k, 10.0)
        e = sym_eigen(s)
        norm = np.linalg.norm(s)
        for i in range(k):
            v = e.vectors[:, i]
            assert np.linalg.norm(s @ v - e.values[i] * v) <= 1e-9 * norm
            assert v[np.argmax(np.abs(v))] > 0
        assert np.allclose(e.vectors.T @ e.vectors, np.eye(k), atol=1e-9)
        assert np.all(np.diff(e.values) <= 0)
        assert e.values.sum() == pytest.approx(np.trace(s), rel=1e-9, abs=1e-12)
        assert e.values == pytest.approx(np.linalg.eigvalsh(s)[::-1], abs=1e-12 * max(norm, 1))


@pytest.mark.skipif(_backend.jacobi_ext is None, reason="compiled kernel not built")
def test_backends_agree_bitwise():
    rng = np.random.default_rng(7)
    for k in (2, 3, 4, 6, 11):
        for _ in range(25):
            s = _sym(rng, k)
            a = sym_eigen(s, kernel=_backend.jacobi_py)
            b = sym_eigen(s, kernel=_backend.jacobi_ext)
            assert np.array_equal(a.values, b.values)
            assert np.array_equal(a.vectors, b.vectors)
            assert a.sweeps == b.sweeps


def test_degenerate_ordering_is_deterministic():
    s = np.diag([2.0, 5.0, 2.0])
    e = sym_eigen(s)
    assert e.values.tolist() == [5.0, 2.0, 2.0]
    assert e.vectors[:, 0].tolist() == [0.0, 1.0, 0.0]
    assert e.vectors[:, 1].tolist() == [1.0, 0.0, 0.0]


def test_invert_examples():
    assert np.array_equal(invert_spd(np.eye(3)), np.eye(3))
    assert np.allclose(invert_spd(np.diag([2.0, 4.0])), np.diag([0.5, 0.25]), atol=1e-15)
    a = 0.3
    expect = np.array([[1, -a], [-a, 1]]) / (1 - a * a)
    assert np.allclose(invert_spd([[1, a], [a, 1]]), expect, atol=1e-14)


def test_invert_singular():
    with pytest.raises(RankDeficiencyError):
        invert_spd([[1.0, 1.0], [1.0, 1.0]])


@pytest.mark.parametrize("k", [2, 4, 7])
def test_invert_identity_product(k):
    rng = np.random.default_rng(100 + k)
    for _ in range(10):
        b = rng.standard_normal((k + 5, k))
        s = crossprod(b)
        inv = invert_spd(s)
        assert np.array_equal(inv, inv.T)
        assert np.allclose(s @ inv, np.eye(k), rtol=0, atol=1e-8)


def test_det_examples(theil):
    from oracles import corr_matrix, cofactor_det

    ds, _ = theil
    r = corr_matrix([ds.column(c) for c in ("income", "relprice", "twentys")])
    assert det_spd(r) == pytest.approx(0.1650, abs=5e-4)
    assert det_spd(r) == pytest.approx(cofactor_det(r), rel=1e-12)
    assert det_spd(np.eye(4)) == 1.0
    assert det_spd([[1.0, 1.0], [1.0, 1.0]]) == pytest.approx(0.0, abs=1e-15)


@settings(max_examples=150, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 6), st.integers(1, 6)),
              elements=st.floats(-50, 50, allow_nan=False)))
def test_trace_and_det_match_eigenvalues(a):
    k = min(a.shape)
    s = a[:k, :k]
    s = (s + s.T) / 2
    e = sym_eigen(s)
    scale_ = max(1.0, np.abs(s).max())
    assert e.values.sum() == pytest.approx(np.trace(s), rel=1e-9, abs=1e-9 * scale_)
    assert det_spd(s) == pytest.approx(float(np.prod(e.values)), rel=1e-9, abs=1e-300)


# ---------------------------------------------------------------- ols


def test_ols_theil_r_squared(theil_x, theil_y):
    fit = ols(theil_x, theil_y)
    assert fit.r_squared == pytest.approx(0.9529, abs=5e-4)
    assert fit.r_squared == pytest.approx(normal_eq_r2(theil_x.values, theil_y), rel=1e-10)


def test_ols_residual_orthogonality(theil_x, theil_y):
    fit = ols(theil_x, theil_y)
    g = theil_x.values.T @ fit.residuals
    scale_ = np.linalg.norm(theil_x.values, axis=0) * np.linalg.norm(theil_y)
    assert np.all(np.abs(g) <= 1e-8 * scale_)


def test_ols_exact_fit(theil_x):
    y = theil_x.column("income").copy()
    fit = ols(theil_x, y)
    assert fit.r_squared == 1.0
    assert np.allclose(fit.residuals, 0.0, atol=1e-10)
    assert fit.coefficients == pytest.approx([0, 1, 0, 0], abs=1e-10)


def test_ols_orthogonal_response():
    from collindiag import DesignMatrix

    x = DesignMatrix(("intercept", "x"), ("intercept", "quantitative"),
                     np.column_stack([np.ones(4), [1.0, -1.0, 1.0, -1.0]]))
    y = np.array([3.0, 4.0, 4.0, 3.0])  # centered y is orthogonal to x
    assert ols(x, y).r_squared == pytest.approx(0.0, abs=1e-15)


def test_ols_errors():
    from collindiag import DesignMatrix

    x = DesignMatrix(("a", "b"), ("quantitative", "quantitative"),
                     np.column_stack([[1.0, 2, 3, 4], [2.0, 4, 6, 8]]))
    with pytest.raises(RankDeficiencyError):
        ols(x, np.arange(4.0))
    with pytest.raises(DataError, match="more observations"):
        ols(x.values[:2], np.arange(2.0))


def test_rss_never_increases_with_columns():
    rng = np.random.default_rng(3)
    for _ in range(50):
        n, k = 12, 5
        X = np.column_stack([np.ones(n), rng.standard_normal((n, k - 1))])
        y = rng.standard_normal(n)
        prev = math.inf
        for j in range(1, k + 1):
            fit = ols(X[:, :j], y)
            rss = float(fit.residuals @ fit.residuals)
            beta = np.linalg.solve(X[:, :j].T @ X[:, :j], X[:, :j].T @ y)
            e = y - X[:, :j] @ beta
            assert rss == pytest.approx(float(e @ e), rel=1e-9)
            assert rss <= prev * (1 + 1e-12)
            prev = rss


# ---------------------------------------------------------------- closed-form roots


@pytest.mark.parametrize("k", [2, 3])
def test_jacobi_matches_characteristic_roots(k):
    rng = np.random.default_rng(2024 + k)
    for _ in range(500):
        s = _sym(rng, k, rng.uniform(0.1, 10))
        got = sym_eigen(s).values
        want = char_poly_eigs(s)
        assert got == pytest.approx(want, rel=0, abs=1e-9)
