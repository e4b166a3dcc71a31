import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from collindiag import (
    ColumnRole,
    Dataset,
    DataError,
    ScalingMode,
    build_design,
    crossprod,
    infer_roles,
    load_csv,
    scale,
)
from oracles import corr_matrix

THEIL_INCOME = [96.7, 98.1, 100.0, 104.9, 104.9, 109.5, 110.8, 112.3, 109.3,
                105.3, 101.7, 95.4, 96.4, 97.6, 102.4, 101.6, 103.8]


def test_load_bundled_theil(theil):
    ds, y = theil
    assert ds.names == ("year", "income", "relprice", "twentys")
    assert ds.n == 17
    assert list(ds.column("income")) == THEIL_INCOME
    assert y[0] == 99.2 and y[-1] == 165.5
    assert ds.column("twentys").sum() == 7


def _write(tmp_path, text, name="d.csv"):
    p = tmp_path / name
    p.write_bytes(text.encode())
    return p


def test_header_only_file(tmp_path):
    with pytest.raises(DataError, match="no observations"):
        load_csv(_write(tmp_path, "a,b\n"), "a")


def test_non_numeric_cell_names_row(tmp_path):
    p = _write(tmp_path, "y,x\n1,2\n2,3\n3,abc\n4,5\n")
    with pytest.raises(DataError, match=r"row 3\b.*'x'.*'abc'"):
        load_csv(p, "y")


@pytest.mark.parametrize(
    "text, match",
    [
        ("y,x\n1,2\n3\n", "row 2.*1 fields"),
        ("y,x\n1,nan\n", "finite"),
        ("y,x\n1,2\n", "dependent column 'z'"),
    ],
)
def test_load_errors(tmp_path, text, match):
    dep = "z" if "'z'" in match else "y"
    with pytest.raises(DataError, match=match):
        load_csv(_write(tmp_path, text), dep)


def test_missing_file(tmp_path):
    with pytest.raises(DataError, match="no such file"):
        load_csv(tmp_path / "nope.csv", "y")


def test_crlf_and_row_order(tmp_path):
    ds, y = load_csv(_write(tmp_path, "y,x\r\n1,5\r\n2,6\r\n3,8\r\n"), "y")
    assert list(y) == [1, 2, 3]
    assert list(ds.column("x")) == [5, 6, 8]


def test_dataset_rejects_duplicates():
    with pytest.raises(DataError, match="duplicate"):
        Dataset(("a", "a"), np.ones((3, 2)))


def test_infer_roles(theil):
    ds, _ = theil
    roles = dict(zip(ds.names, infer_roles(ds)))
    assert roles["twentys"] is ColumnRole.DUMMY
    assert roles["income"] is ColumnRole.QUANTITATIVE
    ones = Dataset(("c",), np.ones((4, 1)))
    assert infer_roles(ones) == [ColumnRole.INTERCEPT]


def test_infer_roles_rejects_constant():
    with pytest.raises(DataError, match="constant"):
        infer_roles(Dataset(("c",), np.full((4, 1), 5.0)))


def test_role_overrides(theil):
    ds, _ = theil
    roles = infer_roles(ds, {"twentys": "quantitative"})
    assert roles[ds.names.index("twentys")] is ColumnRole.QUANTITATIVE
    with pytest.raises(DataError, match="cannot be a dummy"):
        infer_roles(ds, {"income": ColumnRole.DUMMY})


def test_build_design_shapes(theil):
    ds, _ = theil
    full = build_design(ds.select(["income", "relprice", "twentys"]))
    assert full.names == ("intercept", "income", "relprice", "twentys")
    assert full.k == 4 and full.has_intercept
    assert np.all(full.column("intercept") == 1)
    s = build_design(ds.select(["income"]))
    assert s.k == 2
    bare = build_design(ds.select(["income"]), include_intercept=False)
    assert bare.k == 1 and not bare.has_intercept


def test_duplicate_intercept():
    ds = Dataset(("one", "x"), np.column_stack([np.ones(4), [1.0, 2, 3, 5]]))
    with pytest.raises(DataError, match="all ones"):
        build_design(ds, include_intercept=True)
    x = build_design(ds, include_intercept=False)
    assert x.has_intercept and x.names[0] == "one"


def test_scale_examples(theil_x):
    u = scale(theil_x, ScalingMode.UNIT_LENGTH)
    assert np.allclose(u.column("intercept"), 1 / np.sqrt(17), rtol=0, atol=1e-15)
    dummy = u.column("twentys")
    assert set(np.round(dummy, 15)) == {0.0, round(1 / np.sqrt(7), 15)}
    assert np.allclose(np.linalg.norm(u.values, axis=0), 1.0, atol=1e-15)
    assert u.roles == theil_x.roles


def test_centering_intercept_is_an_error(theil_x):
    with pytest.raises(DataError, match="intercept"):
        scale(theil_x, ScalingMode.CENTERED_UNIT_LENGTH)


def test_centering_constant_column_is_an_error():
    from collindiag import DesignMatrix

    x = DesignMatrix(("c", "x"), ("quantitative", "quantitative"),
                     np.column_stack([np.full(5, 0.3), np.arange(5.0)]))
    with pytest.raises(DataError, match="zero norm"):
        scale(x, ScalingMode.CENTERED_UNIT_LENGTH)


def test_roles_survive_design(theil):
    ds, _ = theil
    sub = ds.select(["income", "relprice", "twentys"])
    x = build_design(sub)
    assert list(x.roles[1:]) == infer_roles(sub)


finite_cols = arrays(
    np.float64,
    st.tuples(st.integers(3, 12), st.integers(1, 4)),
    elements=st.floats(-1e3, 1e3, allow_nan=False, width=64),
)


def _design(values):
    from collindiag import DesignMatrix

    k = values.shape[1]
    return DesignMatrix(tuple(f"c{i}" for i in range(k)), ("quantitative",) * k, values)


@settings(max_examples=200, deadline=None)
@given(finite_cols)
def test_unit_length_idempotent(values):
    spread = values.max(axis=0) - values.min(axis=0)
    if np.any(np.linalg.norm(values, axis=0) < 1e-6) or np.any(spread < 1e-6):
        return
    once = scale(_design(values), "unit_length")
    twice = scale(once, "unit_length")
    assert np.allclose(once.values, twice.values, rtol=0, atol=1e-15)


@settings(max_examples=200, deadline=None)
@given(finite_cols)
def test_centered_unit_length_moments(values):
    if np.any(values.std(axis=0) < 1e-3):
        return
    z = scale(_design(values), "centered_unit_length").values
    assert np.all(np.abs(z.mean(axis=0)) < 1e-12)
    assert np.all(np.abs(np.linalg.norm(z, axis=0) - 1) < 1e-12)


@settings(max_examples=100, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(4, 15), st.integers(2, 4)),
              elements=st.floats(-100, 100, allow_nan=False)))
def test_centered_crossprod_is_correlation(values):
    if np.any(values.std(axis=0) < 1e-2):
        return
    z = scale(_design(values), "centered_unit_length")
    expected = corr_matrix([values[:, j] for j in range(values.shape[1])])
    assert np.allclose(crossprod(z), expected, rtol=0, atol=1e-10)
