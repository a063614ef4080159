"""Collects acceptance results and prints one verdict line per criterion."""

from collections import defaultdict

import pytest

_results: dict[int, list[tuple[str, bool, str]]] = defaultdict(list)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    number, part = mark.args
    if rep.passed:
        detail = f"{rep.duration:.2f}s"
    else:
        lines = str(rep.longrepr).strip().splitlines()
        errors = [ln for ln in lines if ln.startswith("E ")]
        detail = (errors[0] if errors else lines[-1])[2:].strip() if lines else "failed"
    _results[number].append((part, rep.passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        parts = _results[number]
        verdict = "PASS" if all(ok for _, ok, _ in parts) else "FAIL"
        body = "; ".join(f"{part}: {'ok' if ok else 'FAILED'} ({detail})" for part, ok, detail in parts)
        terminalreporter.write_line(f"criterion {number:2d}: {verdict}  {body}")
