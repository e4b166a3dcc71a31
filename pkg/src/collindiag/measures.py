"""Collinearity measures with role-aware applicability.

VIF and simple correlations are defined only for quantitative regressors;
dummy columns are withheld unless ``include_dummies`` asks for the legacy
behaviour other packages exhibit. The Stewart index, condition number and
variance decomposition work on the non-centered unit-length design and
therefore see the intercept, which is what exposes non-essential
collinearity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dataset import ColumnRole, DesignMatrix, ScalingMode, scale
from .errors import DataError, NotApplicableError, RankDeficiencyError
from .thresholds import ThresholdConfig
from .numerics import (
    crossprod,
    det_spd,
    invert_spd,
    is_rank_deficient,
    ols,
    sym_eigen,
)

DEFAULT_CORR_THRESHOLD = ThresholdConfig().corr


@dataclass(frozen=True)
class CorrelationReport:
    names: tuple[str, ...]
    matrix: np.ndarray
    determinant: float
    threshold: float
    flagged_pairs: tuple[tuple[str, str, float], ...] = ()


@dataclass(frozen=True)
class VifEntry:
    name: str
    role: ColumnRole
    r_squared: float | None = None
    vif: float | None = None
    status: str = "ok"  # "ok" or "not applicable"
    reason: str = ""

    @property
    def applicable(self) -> bool:
        return self.vif is not None


@dataclass(frozen=True)
class VifTable:
    entries: tuple[VifEntry, ...]

    def __getitem__(self, name: str) -> VifEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def values(self) -> dict[str, float]:
        return {e.name: e.vif for e in self.entries if e.applicable}


@dataclass(frozen=True)
class StewartTable:
    names: tuple[str, ...]
    values: np.ndarray

    def __getitem__(self, name: str) -> float:
        return float(self.values[self.names.index(name)])


@dataclass(frozen=True)
class BelsleyTable:
    """Condition indexes (ascending) and variance-decomposition proportions.

    ``vdp[i, j]`` is the share of var(b_j) tied to the i-th condition index.
    """

    names: tuple[str, ...]
    condition_indexes: np.ndarray
    vdp: np.ndarray
    eigenvalues: np.ndarray


@dataclass(frozen=True)
class SlmReport:
    """Diagnostics for a model with an intercept and one regressor."""

    regressor: str
    role: ColumnRole
    cn_with_intercept: float
    stewart: tuple[float, float]
    cv: float | None = None
    proportion_ones: float | None = None
    closed_form_cn: float | None = None
    problematic: bool = False
    evidence: tuple[tuple[str, float, float], ...] = field(default=())

    @property
    def variability(self) -> float:
        return self.cv if self.cv is not None else self.proportion_ones


def _eligible(x: DesignMatrix, include_dummies: bool) -> list[str]:
    ok = {ColumnRole.QUANTITATIVE}
    if include_dummies:
        ok.add(ColumnRole.DUMMY)
    return [nm for nm, r in zip(x.names, x.roles) if r in ok]


def correlation_report(
    x: DesignMatrix,
    threshold: float = DEFAULT_CORR_THRESHOLD,
    include_dummies: bool = False,
) -> CorrelationReport:
    """Pearson correlations among the non-intercept regressors.

    Pairs with ``|r| >= threshold`` are flagged. Dummies are left out unless
    ``include_dummies`` is set.
    """
    names = _eligible(x, include_dummies)
    if len(names) < 2:
        raise NotApplicableError(
            f"correlation matrix needs at least two eligible columns, got {names}"
        )
    z = scale(x.subset(names), ScalingMode.CENTERED_UNIT_LENGTH)
    r = crossprod(z)
    np.clip(r, -1.0, 1.0, out=r)
    np.fill_diagonal(r, 1.0)
    det = min(1.0, max(0.0, det_spd(r)))
    flagged = []
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            if abs(r[i, j]) >= threshold:
                flagged.append((names[i], names[j], float(abs(r[i, j]))))
    z_names = tuple(z.names)
    r.flags.writeable = False
    return CorrelationReport(z_names, r, det, threshold, tuple(flagged))


def _auxiliary_r2(x: DesignMatrix, j: int) -> float:
    others = [i for i in range(x.k) if i != j]
    if others == [0]:
        # only the intercept remains: the fitted value is the mean, R^2 = 0
        return 0.0
    aux = DesignMatrix(
        tuple(x.names[i] for i in others),
        tuple(x.roles[i] for i in others),
        x.values[:, others],
    )
    try:
        return ols(aux, x.values[:, j]).r_squared
    except RankDeficiencyError as exc:
        raise RankDeficiencyError(
            f"auxiliary regression for {x.names[j]!r} is rank deficient: {exc}",
            x.names[1:],
        ) from None


def vif_table(x: DesignMatrix, include_dummies: bool = False) -> VifTable:
    """Variance inflation factors from auxiliary regressions.

    Column j is regressed on every other non-intercept column (dummies
    included as predictors) plus the intercept, and VIF_j = 1/(1 - R^2_j).
    Dummy columns get no value unless ``include_dummies`` is set.
    """
    if not x.has_intercept:
        raise NotApplicableError("VIF requires a model with an intercept")
    if x.k < 2:
        raise NotApplicableError("VIF requires at least one regressor besides the intercept")
    if ColumnRole.QUANTITATIVE not in x.roles and not include_dummies:
        raise NotApplicableError("VIF is defined only for quantitative regressors; none present")

    # fail early, naming every column, if the centered regressors are collinear
    if x.k > 2:
        z = scale(x.drop_intercept(), ScalingMode.CENTERED_UNIT_LENGTH)
        if is_rank_deficient(sym_eigen(crossprod(z))):
            raise RankDeficiencyError(
                "regressors are exactly collinear; VIF is infinite", x.names[1:]
            )

    entries = []
    for j in range(1, x.k):
        name, role = x.names[j], x.roles[j]
        if role is ColumnRole.DUMMY and not include_dummies:
            entries.append(
                VifEntry(
                    name,
                    role,
                    status="not applicable",
                    reason="dummy regressor: the auxiliary regression would "
                    "have a dichotomous response",
                )
            )
            continue
        r2 = _auxiliary_r2(x, j)
        vif = math.inf if r2 >= 1.0 else 1.0 / (1.0 - r2)
        entries.append(VifEntry(name, role, r2, vif))
    return VifTable(tuple(entries))


def stewart_table(x: DesignMatrix) -> StewartTable:
    """Stewart's uncentered VIF: diagonal of the inverse unit-length cross-product.

    Every column is included, the intercept and dummies too.
    """
    u = scale(x, ScalingMode.UNIT_LENGTH)
    inv = invert_spd(crossprod(u), x.names)
    vals = np.diag(inv).copy()
    vals.flags.writeable = False
    return StewartTable(x.names, vals)


def _unit_eigen(x: DesignMatrix):
    u = scale(x, ScalingMode.UNIT_LENGTH)
    eig = sym_eigen(crossprod(u))
    if is_rank_deficient(eig):
        raise RankDeficiencyError(
            "design is rank deficient (condition number is infinite) "
            f"for columns {list(x.names)}",
            x.names,
        )
    return eig


def condition_number(
    x: DesignMatrix,
    with_intercept: bool = True,
    scaling: ScalingMode | str = ScalingMode.UNIT_LENGTH,
) -> float:
    """sqrt(lambda_max / lambda_min) of the unit-length cross-product.

    With ``with_intercept=False`` the intercept column is dropped first.
    ``scaling="raw"`` uses X^T X as is; that variant depends on the units
    of each column and exists to show exactly that.
    """
    if not with_intercept:
        x = x.drop_intercept()
    eig = _unit_eigen(x)
    if ScalingMode(scaling) is not ScalingMode.UNIT_LENGTH:
        # rank is judged on the equilibrated matrix; raw ratios mostly reflect units
        eig = sym_eigen(crossprod(scale(x, scaling)))
    return math.sqrt(eig.ratio)


def _decompose(x: DesignMatrix) -> BelsleyTable:
    eig = _unit_eigen(x)
    lam = eig.values
    # eigenvalues are descending, so indexes come out ascending
    idx = np.sqrt(lam[0] / lam)
    idx[0] = 1.0
    phi = eig.vectors.T ** 2 / lam[:, None]  # phi[i, j] = v_ji^2 / lambda_i
    vdp = phi / phi.sum(axis=0)
    for a in (idx, vdp, lam):
        a.flags.writeable = False
    return BelsleyTable(x.names, idx, vdp, lam.copy())


def belsley(x: DesignMatrix) -> BelsleyTable:
    """Belsley-Kuh-Welsch condition indexes and variance-decomposition proportions."""
    if not x.has_intercept:
        raise DataError("belsley() expects a design with an intercept")
    return _decompose(x)


def coefficient_of_variation(column) -> float:
    """Sample standard deviation (divisor n-1) over the absolute mean."""
    c = np.asarray(column, dtype=float)
    if c.ndim != 1 or c.size < 2:
        raise DataError("coefficient of variation needs a vector of length >= 2")
    if np.all(c == c[0]):
        raise DataError("coefficient of variation of a constant column is undefined here")
    mean = float(c.mean())
    if abs(mean) <= 1e-12 * float(np.max(np.abs(c))):
        raise NotApplicableError("column mean is zero; the CV criterion does not apply")
    return float(c.std(ddof=1)) / abs(mean)


def dummy_cn(p: float) -> float:
    """Condition number of the unit-length [intercept, dummy] design with share ``p`` of ones."""
    if not 0.0 < p < 1.0:
        raise DataError(f"proportion of ones must lie in (0, 1), got {p}")
    r = math.sqrt(p)
    return math.sqrt((1.0 + r) / (1.0 - r))


def slm_diagnostics(x: DesignMatrix, thresholds=None) -> SlmReport:
    """Condition number, Stewart pair and variability for intercept + one regressor.

    A quantitative regressor is judged by its CV, a dummy by its share of
    ones; either way a condition number at or above the problematic cutoff
    also counts.
    """
    t = thresholds or ThresholdConfig()
    if not (x.has_intercept and x.k == 2):
        raise DataError("slm_diagnostics expects exactly an intercept and one regressor")
    name, role = x.names[1], x.roles[1]
    col = x.values[:, 1]

    cn = condition_number(x, with_intercept=True)
    st = stewart_table(x).values
    evidence = [("condition_number", cn, t.cn_problematic)]
    problematic = cn >= t.cn_problematic

    cv = p = closed = None
    if role is ColumnRole.DUMMY:
        p = float(np.mean(col))
        closed = dummy_cn(p)
        evidence.append(("proportion_of_ones", p, t.dummy_proportion))
        problematic = problematic or p >= t.dummy_proportion
    else:
        try:
            cv = coefficient_of_variation(col)
        except NotApplicableError:
            cv = None
        else:
            evidence.append(("coefficient_of_variation", cv, t.cv))
            problematic = problematic or cv < t.cv

    return SlmReport(
        name,
        role,
        cn,
        (float(st[0]), float(st[1])),
        cv=cv,
        proportion_ones=p,
        closed_form_cn=closed,
        problematic=bool(problematic),
        evidence=tuple(evidence),
    )
