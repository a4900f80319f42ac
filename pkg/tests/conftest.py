from functools import lru_cache

import pytest

from pgquadric.field import field_of_order
from pgquadric.quadrics import point_set, standard_parabolic
from pgquadric.space import ProjectiveSpace

ACCEPTANCE_LINES: list[str] = []


@lru_cache(maxsize=None)
def space(N: int, q: int) -> ProjectiveSpace:
    return ProjectiveSpace(N, field_of_order(q))


@lru_cache(maxsize=None)
def parabolic(n: int, q: int):
    """(space, form, quadric mask) for the standard Q(2n, q)."""
    S = space(2 * n, q)
    form = standard_parabolic(n, S.field)
    return S, form, point_set(form, S)


@pytest.fixture
def record_acceptance():
    def record(number: int, passed: bool, text: str) -> None:
        ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] criterion {number:2d}: {text}")
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
