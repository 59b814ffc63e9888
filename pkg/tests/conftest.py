import numpy as np
import pytest

from nmgauss.spectral import BathSpec

CRITERIA = {
    1: "coefficient closed form vs quadrature",
    2: "independent propagator vs ODE oracle",
    3: "common propagator vs ODE oracle",
    4: "marker values of the initial twin beam",
    5: "x=10 ordering of marker deaths",
    6: "x=0.2 oscillations and simultaneous deaths",
    7: "discord loss slower for larger N",
    8: "common reservoir creates discord only",
    9: "common reservoir discord curves converge",
    10: "discord stays positive, det C < 0",
    11: "intensity formula vs Wick moments",
    12: "invariant property suite",
}

_results = {}
_notes = {}
_durations = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call":
        _durations.setdefault(mark.args[0], []).append(rep.duration)
    ok = rep.passed or (rep.skipped and rep.when != "call")
    if rep.when == "call" or not rep.passed:
        _results.setdefault(mark.args[0], []).append((item.name, ok and not rep.skipped))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num, text in CRITERIA.items():
        runs = _results.get(num)
        if runs is None:
            tr.write_line(f"criterion {num:2d}: NOT RUN  {text}")
            continue
        status = "PASS" if all(ok for _, ok in runs) else "FAIL"
        failed = [name for name, ok in runs if not ok]
        extra = f"  (failing: {', '.join(failed)})" if failed else ""
        tr.write_line(f"criterion {num:2d}: {status}  {text}{extra}")
        for line in _notes.get(num, []):
            tr.write_line(f"    {line}")


@pytest.fixture
def note(request):
    """Record a measured value for the acceptance summary of this test's criterion."""
    mark = request.node.get_closest_marker("criterion")

    def add(text):
        if mark is not None:
            _notes.setdefault(mark.args[0], []).append(text)

    return add


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def bath10():
    return BathSpec(10.0, 0.1, 100.0)


@pytest.fixture(scope="session")
def bath02():
    return BathSpec(0.2, 0.1, 100.0)


@pytest.fixture
def criterion_durations():
    """Call durations (s) of the criterion tests that already ran, by criterion."""
    return _durations
