"""Shared pytest configuration and the acceptance-gate report.

Tests marked ``@pytest.mark.criterion("<id>")`` make up the acceptance
gate.  After the run one line per criterion is printed in the form

    [ACCEPTANCE] <id>: PASSED
    [ACCEPTANCE] <id>: FAILED

so the gate can be read off the terminal without scanning the full test
listing.  A criterion that errors during setup, fails, or is skipped is
reported FAILED; only a clean pass reports PASSED.
"""

from __future__ import annotations

import pytest

_RESULTS: dict[str, bool] = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "criterion(ident): acceptance-gate test; ident labels the "
        "[ACCEPTANCE] summary line printed after the run",
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    ident = str(marker.args[0])
    if report.when == "call":
        _RESULTS[ident] = report.passed
    elif report.failed or report.skipped:
        # setup/teardown error or a skip: the criterion was not demonstrated
        _RESULTS.setdefault(ident, False)


def _sort_key(ident: str):
    digits = "".join(ch for ch in ident if ch.isdigit())
    suffix = "".join(ch for ch in ident if not ch.isdigit())
    return (int(digits) if digits else 0, suffix)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    terminalreporter.ensure_newline()
    terminalreporter.section("acceptance gate")
    for ident in sorted(_RESULTS, key=_sort_key):
        status = "PASSED" if _RESULTS[ident] else "FAILED"
        terminalreporter.write_line(f"[ACCEPTANCE] {ident}: {status}")
