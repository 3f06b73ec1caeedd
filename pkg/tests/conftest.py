import os

import pytest

CRITERIA = {
    1: "golden norms for N=7 and N=6",
    2: "principal minors nonzero for square-free N <= 21",
    3: "zero principal minors for N = 4, 8, 9",
    4: "q-Chebotarev facts for F_2, F_3, F_5, F_7",
    5: "certification by the char-p lift agrees with exhaustive checks",
    6: "prime threshold chain",
    7: "block determinant formula and CRT Kronecker equivalence",
    8: "property suites",
    9: "Gamma_p values and threshold consistency",
}

_outcomes: dict[int, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k): acceptance criterion number k")


def pytest_collection_modifyitems(config, items):
    if os.environ.get("FOURIER_MINORS_STRETCH"):
        return
    skip = pytest.mark.skip(reason="stretch check; set FOURIER_MINORS_STRETCH=1 to run")
    for item in items:
        if "stretch" in item.keywords:
            item.add_marker(skip)


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for mark in getattr(report, "criteria", ()):
        _outcomes.setdefault(mark, []).append(report.outcome)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    rep.criteria = [m.args[0] for m in item.iter_markers("criterion")]


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for k, title in CRITERIA.items():
        results = _outcomes.get(k)
        if not results:
            status = "NOT RUN"
        elif all(r == "passed" for r in results):
            status = "PASS"
        else:
            status = "FAIL"
        terminalreporter.write_line(f"[criterion {k}] {status}: {title}")
    terminalreporter.write_line(
        "[criterion 10] INFO: open-ended verification for large N is out of desk scale; "
        "the property suites above stand in for it"
    )
