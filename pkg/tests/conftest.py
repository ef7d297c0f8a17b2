import numpy as np
import pytest

from sparse_sensors.io import digits_subset
from sparse_sensors.utils import SeededRng, shuffled_complement


@pytest.fixture(scope="session")
def digits_split():
    """Seed-0 70/30 split of the bundled digits, drawn the way the CLI does."""
    X, y = digits_subset()
    order = shuffled_complement(len(y), [], SeededRng(0))
    n_train = int(round(0.7 * len(y)))
    train, test = np.sort(order[:n_train]), np.sort(order[n_train:])
    return X[train], y[train], X[test], y[test]


# One PASS/FAIL line per acceptance criterion in the terminal summary ==========

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when not in ("setup", "call"):
        return
    number, title = marker.args
    if report.failed or (report.when == "call" and number not in _criteria):
        _criteria[number] = (title, "PASS" if report.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, status = _criteria[number]
        terminalreporter.write_line(f"{status}  criterion {number}: {title}")
