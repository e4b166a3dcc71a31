import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from collindiag import build_design, load_theil  # noqa: E402


@pytest.fixture(scope="session")
def theil():
    return load_theil()


@pytest.fixture(scope="session")
def theil_x(theil):
    ds, _ = theil
    return build_design(ds.select(["income", "relprice", "twentys"]))


@pytest.fixture(scope="session")
def theil_y(theil):
    return theil[1]


@pytest.fixture(scope="session")
def slm(theil):
    ds, _ = theil

    def make(name):
        return build_design(ds.select([name]))

    return make


def random_design(rng, n=30, p=5, intercept=True):
    """Correlated quantitative regressors with random means and scales."""
    z = rng.standard_normal((n, p))
    mix = np.eye(p) + 0.6 * rng.standard_normal((p, p))
    cols = z @ mix * rng.uniform(0.5, 5.0, p) + rng.uniform(-20, 20, p)
    from collindiag import Dataset

    ds = Dataset(tuple(f"x{i}" for i in range(p)), cols)
    return build_design(ds, include_intercept=intercept, roles=["quantitative"] * p)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion label")


_criteria = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    label = report.user_properties and dict(report.user_properties).get("criterion")
    if label:
        _criteria[label] = report.outcome


def pytest_runtest_setup(item):
    m = item.get_closest_marker("criterion")
    if m:
        item.user_properties.append(("criterion", m.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_criteria, key=lambda s: int(s.split(":")[0].split()[-1])):
        mark = "PASS" if _criteria[label] == "passed" else "FAIL"
        terminalreporter.write_line(f"[{mark}] {label}")
