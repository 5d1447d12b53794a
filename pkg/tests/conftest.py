from __future__ import annotations

import pytest

# Filled by tests/test_acceptance.py: criterion number -> (passed, description, detail)
ACCEPTANCE_RESULTS: dict[int, tuple[bool, str, str]] = {}


@pytest.fixture
def record_criterion():
    def record(number: int, description: str, passed: bool, detail: str = "") -> None:
        ACCEPTANCE_RESULTS[number] = (passed, description, detail)
        status = "PASS" if passed else "FAIL"
        print(f"CRITERION {number:2d}: {status}  {description}" + (f"  ({detail})" if detail else ""))

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        passed, description, detail = ACCEPTANCE_RESULTS[number]
        status = "PASS" if passed else "FAIL"
        line = f"CRITERION {number:2d}: {status}  {description}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
