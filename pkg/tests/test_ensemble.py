import itertools
import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from brgames.closed_form import p1, p2_k
from brgames.ensemble import (
    EnsembleEstimate,
    SampleConfig,
    enumerate_all_configurations,
    random_game,
    reference_values,
    sample_ensemble,
    wilson_interval,
)
from brgames.game import Game, best_response_map, enumerate_psne
from brgames.graph import GameType, SizeGuardError, classify, classify_graph, functional_graph_from_choices


def scalar_census(n, m):
    """Census through the per-graph cycle walk instead of the batched classifier."""
    counts = Counter()
    for choices in itertools.product(range(m), repeat=n * m ** (n - 1)):
        c = classify_graph(functional_graph_from_choices(choices, n, m))
        counts[(c.convergent, c.psne_count)] += 1
    return counts


def test_random_game_deterministic():
    a = random_game(3, 3, seed=42, trial=5)
    assert a == random_game(3, 3, seed=42, trial=5)
    assert not np.array_equal(a.payoffs, random_game(3, 3, seed=42, trial=6).payoffs)
    assert not np.array_equal(a.payoffs, random_game(3, 3, seed=43, trial=5).payoffs)


def test_random_game_normal_moments():
    draws = np.concatenate([random_game(2, 5, seed=1, trial=t).payoffs.ravel() for t in range(2000)])
    assert draws.size == 100_000
    assert abs(draws.mean()) < 0.02
    assert abs(draws.var() - 1) < 0.05


def test_random_game_uniform_mode():
    g = random_game(2, 3, seed=1, trial=0, distribution="uniform")
    assert np.all((g.payoffs > 0) & (g.payoffs < 1))
    with pytest.raises(ValueError):
        random_game(2, 3, seed=1, trial=0, distribution="cauchy")


def test_wilson_examples():
    assert wilson_interval(0, 100, 1.96)[0] == 0
    assert wilson_interval(100, 100, 1.96)[1] == 1
    lo, hi = wilson_interval(50, 100, 1.96)
    # centre (p + z^2/2N)/(1 + z^2/N) = 0.5; half-width z*sqrt(pq/N + z^2/4N^2)/(1 + z^2/N)
    half = 1.96 * math.sqrt(0.25 / 100 + 1.96**2 / 40000) / (1 + 1.96**2 / 100)
    assert lo == pytest.approx(0.5 - half, abs=1e-12) and hi == pytest.approx(0.5 + half, abs=1e-12)
    assert round(lo, 3) == 0.404 and round(hi, 3) == 0.596


@pytest.mark.parametrize("args", [(1, 0, 1.96), (5, 4, 1.96), (1, 4, 0.0), (-1, 4, 1.0)])
def test_wilson_rejects_bad_arguments(args):
    with pytest.raises(ValueError):
        wilson_interval(*args)


def test_wilson_inside_unit_interval():
    for s in range(0, 21):
        lo, hi = wilson_interval(s, 20, 3.0)
        assert 0 <= lo <= s / 20 <= hi <= 1


def test_sample_rejects_zero_trials():
    with pytest.raises(ValueError):
        sample_ensemble(2, 2, 0, seed=1)


def test_sample_counts_add_up():
    est = sample_ensemble(3, 2, 5000, seed=3)
    assert sum(est.counts.values()) == 5000
    assert all(0 <= lo <= hi <= 1 for lo, hi in est.intervals.values())
    assert est.successes("A") + est.successes("B") + est.successes("C") == 5000
    # zero-PSNE games never converge
    assert all(t is GameType.C for (t, k) in est.counts if k == 0)


def test_sample_matches_per_game_classification():
    est = sample_ensemble(3, 3, 300, seed=21)
    direct = Counter()
    for t in range(300):
        c = classify(random_game(3, 3, seed=21, trial=t))
        direct[(c.game_type, c.psne_count)] += 1
    assert dict(est.counts) == dict(direct)


def test_parallel_equals_serial():
    serial = sample_ensemble(2, 3, 20_000, seed=99, workers=1)
    parallel = sample_ensemble(2, 3, 20_000, seed=99, workers=4)
    assert serial == parallel


def test_degenerate_draws_are_redrawn(monkeypatch):
    from brgames import ensemble

    real = ensemble._payoff_array

    def tied_first_attempt(n, m, seed, trial, distribution, attempt=0):
        if trial == 1 and attempt == 0:
            return np.zeros((n, m**n))
        return real(n, m, seed, trial, distribution, attempt)

    monkeypatch.setattr(ensemble, "_payoff_array", tied_first_attempt)
    est = sample_ensemble(2, 2, 10, seed=0)
    assert est.redraws == 1 and sum(est.counts.values()) == 10


def test_sample_config_runs():
    est = SampleConfig(2, 2, trials=100, seed=5).run()
    assert isinstance(est, EnsembleEstimate) and est.trials == 100


def test_progress_hook():
    seen = []
    sample_ensemble(2, 2, 10_000, seed=1, progress=lambda done, total: seen.append((done, total)))
    assert seen[-1] == (10_000, 10_000)
    seen.clear()
    enumerate_all_configurations(2, 3, progress=lambda d, t: seen.append((d, t)))
    assert seen[-1] == (729, 729)


def test_census_three_two():
    census = enumerate_all_configurations(3, 2)
    assert census.total == 4096
    assert census.convergent_counts() == [1984, 828, 56, 2]
    assert census.non_convergent() == 4096 - 2870 == 1226


def test_census_two_two():
    census = enumerate_all_configurations(2, 2)
    assert census.convergent_counts() == [12, 2]
    assert census.non_convergent() == 2
    assert census.total == 16


@pytest.mark.parametrize("n,m", [(2, 2), (2, 3), (3, 2)])
def test_census_matches_scalar_path(n, m):
    assert enumerate_all_configurations(n, m).counts == dict(scalar_census(n, m))


@pytest.mark.parametrize("n,m", [(2, 2), (2, 3), (2, 4), (3, 2)])
def test_census_identities(n, m):
    census = enumerate_all_configurations(n, m)
    assert sum(census.counts.values()) == census.total == m ** (n * m ** (n - 1))
    assert census.frequency(True, 1) == p1(n, m)
    if n == 2:
        for k in range(1, m + 1):
            assert census.frequency(True, k) == p2_k(m, k)
    assert census.counts.get((True, 0), 0) == 0


def test_unique_psne_but_not_convergent_exists(fig1):
    census = enumerate_all_configurations(3, 2)
    assert census.counts[(True, 1)] + census.counts[(False, 1)] > 1984
    c = classify(fig1)
    assert c.psne_count == 1 and not c.convergent


def test_enumeration_cap():
    with pytest.raises(SizeGuardError, match="7625597484987"):
        enumerate_all_configurations(3, 3)
    with pytest.raises(SizeGuardError):
        enumerate_all_configurations(2, 3, cap=100)


def test_reference_values():
    ref = reference_values(2, 2)
    assert ref["k=1"] == Fraction(3, 4) and ref["k=2"] == Fraction(1, 8) and ref["C"] == Fraction(1, 8)
    ref = reference_values(3, 2)
    assert ref["k=4"] == Fraction(2, 4096) and ref["C"] == Fraction(1226, 4096)
    assert set(reference_values(3, 3)) == {"A", "k=1"}


@pytest.mark.slow
def test_two_two_estimate_converges():
    est = sample_ensemble(2, 2, 1_000_000, seed=11)
    assert abs(est.frequency("A") - 0.75) < 0.005
    assert abs(est.frequency("C") - 0.125) < 0.005
