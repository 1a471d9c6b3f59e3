from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"

_acceptance = {}


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def paper_md():
    return FIXTURES / "paper.md"


@pytest.fixture
def deck_json():
    return FIXTURES / "deck.json"


@pytest.fixture
def latex_main():
    return FIXTURES / "latex_project" / "main.tex"


def pytest_runtest_logreport(report):
    marker = getattr(report, "acceptance", None)
    if marker is None:
        return
    number, title = marker
    ok = report.passed if report.when == "call" else not report.failed
    prev = _acceptance.get(number, (title, True))
    _acceptance[number] = (title, prev[1] and ok)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("acceptance")
    if m is not None:
        rep.acceptance = tuple(m.args)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        title, ok = _acceptance[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}")
