import numpy as np
import pytest

from ypflow.polynomial import Polynomial

# descending coefficient lists of the reference polynomials
EX4 = [1, -8, -18, 56, 0]  # critical points -2, 1, 7
EX5 = [1, 0, -0.3726, 0.0574, 0.0306, -0.0084, 0]
EX10 = [1, 0.2114, -2.6841, -0.1110, 1.2406]
SYM = [1, -4, -2, 12, 0]  # critical points -1, 1, 3 with equal minima
POS6 = [1, 0.6987, -1.0908, -0.4216, 0.2177, 0.1071, 0]
CEX6 = [1, -0.8529, -0.4243, -0.2248, 0.0916, -0.0074, 0]


def poly(desc) -> Polynomial:
    return Polynomial.from_descending([float(c) for c in desc])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def ex4():
    return poly(EX4)


@pytest.fixture
def ex5():
    return poly(EX5)


@pytest.fixture
def ex10():
    return poly(EX10)


@pytest.fixture
def sym():
    return poly(SYM)


# -- one PASS/FAIL line per acceptance criterion --------------------------------

_ACCEPTANCE: dict[str, str] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    label = f"criterion {mark.args[0]}: {mark.args[1]}"
    if rep.when == "call" or rep.failed:
        if rep.failed or label not in _ACCEPTANCE:
            _ACCEPTANCE[label] = "FAIL" if rep.failed else "PASS"


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, verdict in _ACCEPTANCE.items():
        terminalreporter.write_line(f"{verdict}  {label}")
