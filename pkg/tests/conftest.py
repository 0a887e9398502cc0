import numpy as np
import pytest

from shortcut_hull.fixtures import FLASK, NOTCH, SQ, STAIRCASE
from shortcut_hull.geometry import normalize_input
from shortcut_hull.shortcuts import generate_all_shortcuts
from shortcut_hull.variants import chain_of


def instance(raw, through_vertices=True):
    P = normalize_input(raw)
    chain = chain_of(P)
    C = generate_all_shortcuts(P, chain, through_vertices=through_vertices)
    return P, chain, C


def chord(chain, i, j):
    """Chain chord of the P-index pair ``(i, j)``."""
    return chain.position(j), chain.position(i)


@pytest.fixture
def sq():
    return instance(SQ)


@pytest.fixture
def notch():
    return instance(NOTCH)


@pytest.fixture
def notch_base():
    # no segments running straight through polygon vertices
    return instance(NOTCH, through_vertices=False)


@pytest.fixture
def flask():
    return instance(FLASK)


@pytest.fixture
def staircase():
    return instance(STAIRCASE)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


# acceptance results, printed once at the end of the run
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        status, title, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num} [{status}] {title}: {detail}")
