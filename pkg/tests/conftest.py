from __future__ import annotations

import contextlib

import pytest

_CRITERIA: dict[int, tuple[str, str]] = {}


@contextlib.contextmanager
def _record(number: int, text: str):
    try:
        yield
    except BaseException:
        _CRITERIA[number] = ("FAIL", text)
        print(f"[acceptance {number}] FAIL  {text}")
        raise
    _CRITERIA[number] = ("PASS", text)
    print(f"[acceptance {number}] PASS  {text}")


@pytest.fixture
def criterion():
    """``with criterion(n, "text"):`` records a PASS/FAIL line for the summary."""
    return _record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        status, text = _CRITERIA[number]
        terminalreporter.write_line(f"{number:>2}. {status}  {text}")
