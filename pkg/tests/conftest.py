import pytest

# criterion number -> (description, [outcomes])
_CRITERIA: dict[int, tuple[str, list[str]]] = {}


def criterion(number: int, description: str):
    """Tag an acceptance test so the session summary reports it by number."""
    def wrap(fn):
        fn._criterion = (number, description)
        return fn
    return wrap


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    tag = getattr(getattr(item, "function", None), "_criterion", None)
    if tag is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        number, description = tag
        _CRITERIA.setdefault(number, (description, []))[1].append(rep.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        description, outcomes = _CRITERIA[number]
        verdict = "PASS" if outcomes and all(o == "passed" for o in outcomes) else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {verdict}  {description}")
