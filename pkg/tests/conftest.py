import numpy as np
import pytest

_CRITERIA: list[tuple[str, str, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion reported as PASS/FAIL")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        status = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
        detail = ""
        if rep.failed and call.excinfo is not None:
            detail = str(call.excinfo.value).splitlines()[0][:160] if str(call.excinfo.value) else ""
        _CRITERIA.append((mark.args[0], status, detail))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for label, status, detail in _CRITERIA:
        tr.write_line(f"{status} {label}" + (f"  ({detail})" if detail else ""))
    n_fail = sum(s == "FAIL" for _, s, _ in _CRITERIA)
    tr.write_line(f"{len(_CRITERIA) - n_fail}/{len(_CRITERIA)} criteria passed")


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
