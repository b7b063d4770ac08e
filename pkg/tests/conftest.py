import pytest

from orthohyper.geometry import build_mep_for
from orthohyper.hypergraph import mep
from orthohyper.states import enumerate_states

_CRITERIA: dict[int, tuple[str, bool, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    number, title = mark.args
    reason = ""
    if rep.failed:
        reason = str(call.excinfo.value).splitlines()[0] if call.excinfo else ""
    _CRITERIA[number] = (title, rep.passed, reason)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, ok, reason = _CRITERIA[n]
        line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {title}"
        if reason:
            line += f"  -- {reason}"
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def mep_h():
    return mep()


@pytest.fixture(scope="session")
def mep_t(mep_h):
    return enumerate_states(mep_h)


@pytest.fixture(scope="session")
def mep_for():
    return build_mep_for()
