import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

FIXTURES = Path(__file__).parent / "fixtures"

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")


def _load_table(name):
    raw = json.loads((FIXTURES / name).read_text())
    return {int(m): np.array([float(x) for x in c]) for m, c in raw["coefficients"].items()}


@pytest.fixture(scope="session")
def ls_reference():
    return _load_table("ls_reference.json")


@pytest.fixture(scope="session")
def regularized_reference():
    return _load_table("regularized_reference.json")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_matrix(rng, n, hermitian=False):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    if hermitian:
        a = 0.5 * (a + a.conj().T)
    return a


def random_contraction(rng, n):
    a = random_matrix(rng, n)
    return a / np.linalg.norm(a, 2)


ACCEPTANCE = {}


@pytest.fixture
def verdict():
    """Record a criterion's outcome for the summary, then assert it."""

    def record(number, title, checks):
        ok = all(passed for _, passed in checks)
        detail = "; ".join(f"{'ok' if passed else 'FAIL'} {text}" for text, passed in checks)
        ACCEPTANCE[number] = (title, ok, detail)
        print(f"[{'PASS' if ok else 'FAIL'}] {number:2d} {title}: {detail}")
        assert ok, detail

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number:2d} {title}: {detail}")
