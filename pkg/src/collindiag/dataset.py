"""Tabular input, column roles and design-matrix construction."""
from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import DataError

INTERCEPT_NAME = "intercept"


class ColumnRole(str, enum.Enum):
    """How a regressor participates in the diagnostics."""

    INTERCEPT = "intercept"
    QUANTITATIVE = "quantitative"
    DUMMY = "dummy"


class ScalingMode(str, enum.Enum):
    RAW = "raw"
    UNIT_LENGTH = "unit_length"
    CENTERED_UNIT_LENGTH = "centered_unit_length"


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, order="C")
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Dataset:
    """Named numeric columns, one row per observation."""

    names: tuple[str, ...]
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise DataError("dataset values must be a 2-D array")
        if values.shape[0] == 0:
            raise DataError("no observations")
        if values.shape[1] != len(self.names):
            raise DataError(
                f"{len(self.names)} column names for {values.shape[1]} columns"
            )
        if any(not name for name in self.names):
            raise DataError("column names must be nonempty")
        if len(set(self.names)) != len(self.names):
            raise DataError(f"duplicate column names in {list(self.names)}")
        if not np.all(np.isfinite(values)):
            raise DataError("dataset contains non-finite values")
        object.__setattr__(self, "values", _readonly(values))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1]

    def column(self, name: str) -> np.ndarray:
        try:
            return self.values[:, self.names.index(name)]
        except ValueError:
            raise DataError(f"unknown column {name!r}") from None

    def select(self, names: Sequence[str]) -> "Dataset":
        """Subset of columns, in the order given."""
        missing = [nm for nm in names if nm not in self.names]
        if missing:
            raise DataError(f"unknown column(s): {', '.join(missing)}")
        idx = [self.names.index(nm) for nm in names]
        return Dataset(tuple(names), self.values[:, idx])


@dataclass(frozen=True)
class DesignMatrix:
    """Regressor matrix X with a role per column.

    An intercept, if present, is always column 0.
    """

    names: tuple[str, ...]
    roles: tuple[ColumnRole, ...]
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "roles", tuple(ColumnRole(r) for r in self.roles))
        values = np.asarray(self.values, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        if values.ndim != 2 or values.shape[1] < 1:
            raise DataError("design matrix needs at least one column")
        if not (len(self.names) == len(self.roles) == values.shape[1]):
            raise DataError("names, roles and columns disagree in length")
        if len(set(self.names)) != len(self.names):
            raise DataError(f"duplicate column names in {list(self.names)}")
        n_int = self.roles.count(ColumnRole.INTERCEPT)
        if n_int > 1:
            raise DataError("more than one intercept column")
        if n_int == 1 and self.roles[0] is not ColumnRole.INTERCEPT:
            raise DataError("the intercept must be the first column")
        object.__setattr__(self, "values", _readonly(values))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def k(self) -> int:
        return self.values.shape[1]

    @property
    def has_intercept(self) -> bool:
        return bool(self.roles) and self.roles[0] is ColumnRole.INTERCEPT

    def column(self, name: str) -> np.ndarray:
        try:
            return self.values[:, self.names.index(name)]
        except ValueError:
            raise DataError(f"unknown column {name!r}") from None

    def role_of(self, name: str) -> ColumnRole:
        return self.roles[self.names.index(name)]

    def subset(self, names: Sequence[str]) -> "DesignMatrix":
        """Columns ``names`` in design order (the intercept stays first)."""
        wanted = set(names)
        unknown = wanted.difference(self.names)
        if unknown:
            raise DataError(f"unknown column(s): {', '.join(sorted(unknown))}")
        idx = [i for i, nm in enumerate(self.names) if nm in wanted]
        return DesignMatrix(
            tuple(self.names[i] for i in idx),
            tuple(self.roles[i] for i in idx),
            self.values[:, idx],
        )

    def drop_intercept(self) -> "DesignMatrix":
        if not self.has_intercept:
            return self
        if self.k == 1:
            raise DataError("design has no columns besides the intercept")
        return self.subset(self.names[1:])

    def with_values(self, values: np.ndarray) -> "DesignMatrix":
        return DesignMatrix(self.names, self.roles, values)


def load_csv(path, dependent: str) -> tuple[Dataset, np.ndarray]:
    """Read a comma-separated file with a header row.

    Returns the regressor candidates (every column except ``dependent``)
    and the dependent vector, rows in file order.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    # csv yields [] for blank lines; a trailing newline is fine, an empty file is not
    rows = [r for r in rows if r]
    if not rows:
        raise DataError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    body = rows[1:]
    if not body:
        raise DataError(f"{path}: no observations")
    if dependent not in header:
        raise DataError(
            f"{path}: dependent column {dependent!r} not in header {header}"
        )

    data = np.empty((len(body), len(header)))
    for i, row in enumerate(body, start=1):
        if len(row) != len(header):
            raise DataError(
                f"{path}: row {i} (line {i + 1}) has {len(row)} fields, "
                f"expected {len(header)}"
            )
        for j, cell in enumerate(row):
            try:
                value = float(cell)
            except ValueError:
                value = math.nan
            if not math.isfinite(value):
                raise DataError(
                    f"{path}: row {i} (line {i + 1}), column {header[j]!r}: "
                    f"cannot parse {cell!r} as a finite decimal number"
                )
            data[i - 1, j] = value

    dep = header.index(dependent)
    keep = [j for j in range(len(header)) if j != dep]
    ds = Dataset(tuple(header[j] for j in keep), data[:, keep])
    y = data[:, dep].copy()
    y.flags.writeable = False
    return ds, y


def bundled_path(name: str = "theil.csv") -> Path:
    """Filesystem path of a dataset shipped with the package."""
    return Path(str(resources.files("collindiag") / "data" / name))


def load_theil() -> tuple[Dataset, np.ndarray]:
    """Henri Theil's textile consumption data, dependent ``consume``."""
    return load_csv(bundled_path("theil.csv"), "consume")


def _infer_one(name: str, col: np.ndarray) -> ColumnRole:
    if np.all(col == 1.0):
        return ColumnRole.INTERCEPT
    if np.all(col == col[0]):
        raise DataError(
            f"column {name!r} is constant ({col[0]!r}); it has zero variance "
            "and cannot be used as a regressor"
        )
    if np.all((col == 0.0) | (col == 1.0)):
        return ColumnRole.DUMMY
    return ColumnRole.QUANTITATIVE


def infer_roles(
    d: Dataset, overrides: Mapping[str, ColumnRole | str] | None = None
) -> list[ColumnRole]:
    """Role per column: all ones -> intercept, {0,1} -> dummy, else quantitative.

    ``overrides`` maps column names to explicit roles and wins over
    inference. Overriding a non-binary column to ``dummy`` is an error.
    """
    overrides = dict(overrides or {})
    unknown = set(overrides).difference(d.names)
    if unknown:
        raise DataError(f"role override for unknown column(s): {sorted(unknown)}")

    roles = []
    for j, name in enumerate(d.names):
        col = d.values[:, j]
        role = _infer_one(name, col)
        if name in overrides:
            wanted = ColumnRole(overrides[name])
            if wanted is ColumnRole.DUMMY and role is not ColumnRole.DUMMY:
                raise DataError(
                    f"column {name!r} cannot be a dummy: values must be 0/1 "
                    "with both present"
                )
            if wanted is ColumnRole.INTERCEPT and role is not ColumnRole.INTERCEPT:
                raise DataError(f"column {name!r} is not all ones")
            if role is ColumnRole.INTERCEPT and wanted is not ColumnRole.INTERCEPT:
                raise DataError(
                    f"column {name!r} is constant (all ones); only the "
                    "intercept role fits"
                )
            role = wanted
        roles.append(role)
    return roles


def build_design(
    d: Dataset,
    include_intercept: bool = True,
    roles: Sequence[ColumnRole | str] | Mapping[str, ColumnRole | str] | None = None,
) -> DesignMatrix:
    """Assemble X from ``d``, optionally prepending an ``intercept`` column.

    ``roles`` is either a full per-column list or a mapping of overrides
    fed to :func:`infer_roles`; ``None`` infers every role.
    """
    if roles is None or isinstance(roles, Mapping):
        roles = infer_roles(d, roles)
    else:
        roles = [ColumnRole(r) for r in roles]
        if len(roles) != d.m:
            raise DataError(f"{len(roles)} roles for {d.m} columns")
        inferred = infer_roles(d)
        for name, got, inf in zip(d.names, roles, inferred):
            if got is ColumnRole.DUMMY and inf is not ColumnRole.DUMMY:
                raise DataError(f"column {name!r} is not a 0/1 dummy")
            if (got is ColumnRole.INTERCEPT) != (inf is ColumnRole.INTERCEPT):
                raise DataError(f"role {got.value} inconsistent with column {name!r}")

    names = list(d.names)
    values = [d.values[:, j] for j in range(d.m)]
    if ColumnRole.INTERCEPT in roles:
        j = roles.index(ColumnRole.INTERCEPT)
        if include_intercept:
            raise DataError(
                f"column {names[j]!r} is all ones and an intercept was also "
                "requested; drop one of them"
            )
        # a user-supplied ones column becomes the (first) intercept
        names.insert(0, names.pop(j))
        values.insert(0, values.pop(j))
        roles = list(roles)
        roles.insert(0, roles.pop(j))
    elif include_intercept:
        if INTERCEPT_NAME in names:
            raise DataError(f"a non-intercept column is already named {INTERCEPT_NAME!r}")
        names.insert(0, INTERCEPT_NAME)
        values.insert(0, np.ones(d.n))
        roles = [ColumnRole.INTERCEPT, *roles]

    if not values:
        raise DataError("design matrix needs at least one column")
    return DesignMatrix(tuple(names), tuple(roles), np.column_stack(values))


def scale(x: DesignMatrix, mode: ScalingMode | str) -> DesignMatrix:
    """Rescale every column of ``x``.

    ``UNIT_LENGTH`` divides each column by its Euclidean norm;
    ``CENTERED_UNIT_LENGTH`` subtracts the mean first and is refused for
    the intercept (it would become the zero column).
    """
    mode = ScalingMode(mode)
    v = x.values
    if mode is ScalingMode.RAW:
        return x
    raw_norms = np.sqrt(np.einsum("ij,ij->j", v, v))
    if mode is ScalingMode.CENTERED_UNIT_LENGTH:
        if x.has_intercept:
            raise DataError("cannot center the intercept column; drop it first")
        v = v - v.mean(axis=0)
    norms = np.sqrt(np.einsum("ij,ij->j", v, v))
    # centering a constant column leaves only rounding noise
    zero = [nm for nm, nv, rv in zip(x.names, norms, raw_norms) if nv <= 1e-13 * rv]
    if zero:
        raise DataError(f"column(s) with zero norm after {mode.value} scaling: {zero}")
    return x.with_values(v / norms)
