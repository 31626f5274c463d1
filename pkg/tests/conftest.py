import pytest

_CRITERIA = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(number, text)`` then assert."""
    entry = {"test": request.node.nodeid, "lines": []}
    _CRITERIA.append(entry)

    def note(number, text):
        entry["lines"].append((number, text))

    yield note


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        for entry in _CRITERIA:
            if entry["test"] == item.nodeid:
                entry["passed"] = rep.passed


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for entry in sorted(_CRITERIA, key=lambda e: e["lines"][0][0] if e["lines"] else 99):
        status = "PASS" if entry.get("passed") else "FAIL"
        for number, text in entry["lines"]:
            terminalreporter.write_line(f"[{status}] {number:>2}. {text}")
