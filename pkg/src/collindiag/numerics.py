"""Small dense symmetric linear algebra.

Everything the measures need goes through :func:`sym_eigen`, a cyclic
Jacobi solver, so singularity is judged the same way everywhere: a
cross-product whose smallest eigenvalue is at most ``RANK_RTOL`` times its
largest is treated as rank deficient.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import ConvergenceError, DataError, RankDeficiencyError

JACOBI_RTOL = 1e-14
JACOBI_MAX_SWEEPS = 100
RANK_RTOL = 1e-12


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenpairs of a symmetric matrix, eigenvalues descending.

    ``vectors[:, i]`` pairs with ``values[i]``; each eigenvector's
    largest-magnitude component is positive.
    """

    values: np.ndarray
    vectors: np.ndarray
    sweeps: int = 0

    @property
    def ratio(self) -> float:
        """lambda_max / lambda_min (inf when lambda_min <= 0)."""
        lo = self.values[-1]
        return float(self.values[0] / lo) if lo > 0 else float("inf")


@dataclass(frozen=True)
class OlsFit:
    coefficients: np.ndarray
    residuals: np.ndarray
    r_squared: float


def as_symmetric(s) -> np.ndarray:
    """Validate ``s`` as a square, exactly symmetric, finite float matrix."""
    a = np.array(s, dtype=float, order="C")
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise DataError(f"expected a nonempty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DataError("matrix has non-finite entries")
    if not np.array_equal(a, a.T):
        raise DataError("matrix is not exactly symmetric")
    return a


def crossprod(x) -> np.ndarray:
    """X^T X, upper triangle computed and mirrored so the result is exactly symmetric."""
    v = x.values if hasattr(x, "values") else np.asarray(x, dtype=float)
    if v.ndim == 1:
        v = v[:, None]
    k = v.shape[1]
    out = np.empty((k, k))
    for i in range(k):
        for j in range(i, k):
            out[i, j] = out[j, i] = float(np.dot(v[:, i], v[:, j]))
    return out


def _sign_fix(vectors: np.ndarray) -> np.ndarray:
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def sym_eigen(s, *, kernel=None) -> EigenDecomposition:
    """Full eigendecomposition by cyclic Jacobi rotations.

    Stops when the off-diagonal Frobenius norm falls to ``1e-14 * ||S||_F``;
    raises :class:`ConvergenceError` after 100 sweeps. ``kernel`` selects a
    specific backend (the default is picked in ``_backend``).
    """
    a = as_symmetric(s)
    k = a.shape[0]
    v = np.eye(k)
    sweeps = (kernel or _backend.jacobi)(a, v, JACOBI_RTOL, JACOBI_MAX_SWEEPS)
    if sweeps < 0:
        raise ConvergenceError(
            f"Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps"
        )
    values = np.diag(a).copy()
    vectors = _sign_fix(v)
    # descending eigenvalue; exact ties broken by first component, descending
    order = sorted(range(k), key=lambda i: (-values[i], -vectors[0, i]))
    return EigenDecomposition(values[order], vectors[:, order], sweeps)


def is_rank_deficient(eig: EigenDecomposition) -> bool:
    hi = eig.values[0]
    return hi <= 0 or eig.values[-1] <= RANK_RTOL * hi


def invert_spd(s, names=()) -> np.ndarray:
    """Inverse of a symmetric positive definite matrix via its eigenpairs.

    Raises :class:`RankDeficiencyError` when the smallest eigenvalue is at
    most ``1e-12`` times the largest.
    """
    eig = sym_eigen(s)
    if is_rank_deficient(eig):
        raise RankDeficiencyError(
            "matrix is singular or nearly so "
            f"(eigenvalue ratio {eig.values[-1] / eig.values[0]:.3g})"
            if eig.values[0] > 0
            else "matrix is singular (largest eigenvalue <= 0)",
            names,
        )
    w = eig.vectors / eig.values
    inv = w @ eig.vectors.T
    return np.triu(inv) + np.triu(inv, 1).T


def det_spd(s) -> float:
    """Determinant as the product of the Jacobi eigenvalues."""
    return float(np.prod(sym_eigen(s).values))


def ols(x, y) -> OlsFit:
    """Least squares via the normal equations.

    Columns are equilibrated to unit length before the solve; the rank
    check is therefore the unit-length condition-number test used by the
    measures. R^2 is centered when the design has an intercept and
    uncentered otherwise.
    """
    v = x.values if hasattr(x, "values") else np.asarray(x, dtype=float)
    if v.ndim == 1:
        v = v[:, None]
    y = np.asarray(y, dtype=float)
    n, k = v.shape
    if y.shape != (n,):
        raise DataError(f"y has shape {y.shape}, expected ({n},)")
    if n <= k:
        raise DataError(f"need more observations than columns (n={n}, k={k})")
    names = tuple(getattr(x, "names", ()))
    norms = np.sqrt(np.einsum("ij,ij->j", v, v))
    if np.any(norms == 0):
        raise RankDeficiencyError("design has a zero column", names)
    u = v / norms
    xtx_inv = invert_spd(crossprod(u), names)
    coef = (xtx_inv @ (u.T @ y)) / norms
    resid = y - v @ coef
    ssr = float(resid @ resid)
    has_intercept = getattr(x, "has_intercept", False)
    if has_intercept:
        yc = y - y.mean()
        sst = float(yc @ yc)
    else:
        sst = float(y @ y)
    if sst == 0.0:
        r2 = 1.0 if ssr == 0.0 else 0.0
    else:
        r2 = min(1.0, max(0.0, 1.0 - ssr / sst))
    return OlsFit(coef, resid, r2)
