"""Collects per-criterion outcomes from the acceptance suite and prints them at the end."""

from collections import defaultdict

import pytest

_OUTCOMES: dict[int, list[tuple[str, bool, str]]] = defaultdict(list)
_TITLES: dict[int, str] = {}


class CriterionLog:
    def __init__(self, number: int, title: str) -> None:
        self.number = number
        _TITLES[number] = title

    def record(self, part: str, ok: bool, detail: str = "") -> bool:
        _OUTCOMES[self.number].append((part, bool(ok), detail))
        return bool(ok)


@pytest.fixture
def criterion():
    return CriterionLog


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_OUTCOMES):
        parts = _OUTCOMES[number]
        failed = [p for p in parts if not p[1]]
        status = "PASS" if not failed else "FAIL"
        line = f"{status} criterion {number:2d}: {_TITLES[number]}"
        if failed:
            line += " | failing: " + "; ".join(f"{name} ({detail})" if detail else name for name, _, detail in failed)
        else:
            line += " | " + "; ".join(d for _, _, d in parts if d)
        terminalreporter.write_line(line.rstrip(" |"))
