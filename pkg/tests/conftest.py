from pathlib import Path

import hypothesis.strategies as st
import numpy as np
import pytest

from brgames.game import Game, matching_pennies, prisoners_dilemma, pure_coordination, three_player_example

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def fig1():
    return three_player_example()


@pytest.fixture
def pd():
    return prisoners_dilemma()


@pytest.fixture
def pennies():
    return matching_pennies()


@pytest.fixture
def coordination():
    return pure_coordination()


@st.composite
def games(draw, ns=(2, 3), ms=(2, 3)):
    """Non-degenerate games: each player's payoffs are a permutation of distinct integers."""
    n = draw(st.sampled_from(ns))
    m = draw(st.sampled_from(ms))
    size = m**n
    rows = [draw(st.permutations(range(size))) for _ in range(n)]
    return Game(n, m, np.array(rows, dtype=float))


_acceptance = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
