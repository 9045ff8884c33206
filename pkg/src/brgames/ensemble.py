"""Random-game ensembles: Monte Carlo estimates and exhaustive censuses.

Random payoffs come from a Philox counter-based generator keyed by
``(seed, trial)``, so each trial is a pure function of its index and chunks
can be evaluated in any order or on any number of workers.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Optional

import numpy as np
from scipy.special import ndtri

from . import closed_form
from .game import Game
from .graph import GameType, SizeGuardError, build_full_graph, classify_batch, node_count, type_of

log = logging.getLogger(__name__)

DEFAULT_ENUM_CAP = 1 << 26
CHUNK_SIZE = 4096
_ENUM_BATCH = 1 << 15
_TWO_M53 = 2.0**-53

Progress = Callable[[int, int], None]


def _uniforms(seed: int, trial: int, count: int, attempt: int = 0) -> np.ndarray:
    """Open-interval uniforms for draw ``attempt`` of ``trial``; consecutive attempts use consecutive stream blocks."""
    bitgen = np.random.Philox(key=[seed & 0xFFFFFFFFFFFFFFFF, trial])
    raw = bitgen.random_raw(count * (attempt + 1))[count * attempt:]
    return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * _TWO_M53


def _payoff_array(n: int, m: int, seed: int, trial: int, distribution: str, attempt: int = 0) -> np.ndarray:
    u = _uniforms(seed, trial, n * m**n, attempt)
    if distribution == "normal":
        u = ndtri(u)
    elif distribution != "uniform":
        raise ValueError(f"unknown distribution {distribution!r}")
    return u.reshape(n, m**n)


def random_game(n: int, m: int, seed: int, trial: int, distribution: str = "normal") -> Game:
    """i.i.d. standard-normal (or uniform) payoffs, determined by ``(seed, trial)``."""
    return Game(n, m, _payoff_array(n, m, seed, trial, distribution))


def _best_responses(payoffs: np.ndarray, n: int, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Batched best-response tables, shape ``(batch, n * m**(n-1))``, and a per-row degeneracy flag."""
    batch = payoffs.shape[0]
    tables = []
    degenerate = np.zeros(batch, dtype=bool)
    for i in range(n):
        u = payoffs[:, i].reshape((batch,) + (m,) * n)
        u = np.moveaxis(u, i + 1, -1).reshape(batch, -1, m)
        top = u.max(axis=2, keepdims=True)
        degenerate |= (np.count_nonzero(u == top, axis=2) > 1).any(axis=1)
        tables.append(u.argmax(axis=2))
    return np.concatenate(tables, axis=1), degenerate


def _classify_trials(n: int, m: int, seed: int, start: int, stop: int,
                     distribution: str) -> tuple[Counter, int]:
    full = build_full_graph(n, m)
    trials = range(start, stop)
    payoffs = np.stack([_payoff_array(n, m, seed, t, distribution) for t in trials])
    table, degenerate = _best_responses(payoffs, n, m)
    redraws = 0
    for row in np.flatnonzero(degenerate):
        attempt = 0
        while True:
            attempt += 1
            redraws += 1
            p = _payoff_array(n, m, seed, start + int(row), distribution, attempt)
            t, bad = _best_responses(p[None], n, m)
            if not bad[0]:
                table[row] = t[0]
                break
    succ = full.adjacency[np.arange(full.node_count)[None, :], table]
    psne, convergent = classify_batch(succ, n)
    counts = Counter(zip(convergent.tolist(), psne.tolist()))
    return Counter({(type_of(k, c), k): v for (c, k), v in counts.items()}), redraws


def wilson_interval(successes: int, trials: int, z: float) -> tuple[float, float]:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 <= successes <= trials:
        raise ValueError(f"successes must lie in [0, {trials}], got {successes}")
    if z <= 0:
        raise ValueError("z must be positive")
    p = successes / trials
    z2 = z * z
    denom = 1 + z2 / trials
    centre = (p + z2 / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z2 / (4 * trials * trials)) / denom
    lo = 0.0 if successes == 0 else max(0.0, centre - half)
    hi = 1.0 if successes == trials else min(1.0, centre + half)
    return lo, hi


@dataclass(frozen=True)
class EnsembleEstimate:
    """Monte Carlo counts keyed by ``(game_type, psne_count)`` plus Wilson intervals.

    Interval labels: ``"A"``, ``"B"``, ``"C"`` and ``"k=<j>"`` for convergent
    games with exactly ``j`` PSNEs.
    """

    n: int
    m: int
    trials: int
    seed: int
    z: float
    counts: Mapping[tuple[GameType, int], int]
    redraws: int = 0
    intervals: Mapping[str, tuple[float, float]] = field(default_factory=dict)

    def successes(self, label: str) -> int:
        if label in ("A", "B", "C"):
            return sum(v for (t, _), v in self.counts.items() if t.value == label)
        k = int(label.removeprefix("k="))
        return sum(v for (t, j), v in self.counts.items() if t is not GameType.C and j == k)

    def frequency(self, label: str) -> float:
        return self.successes(label) / self.trials

    def labels(self) -> list[str]:
        ks = sorted({j for (t, j) in self.counts if t is not GameType.C})
        return ["A", "B", "C"] + [f"k={j}" for j in ks]


def sample_ensemble(n: int, m: int, trials: int, seed: int, *, z: float = 3.0, workers: int = 1,
                    distribution: str = "normal", progress: Optional[Progress] = None) -> EnsembleEstimate:
    """Classify ``trials`` random games.

    Work is cut into fixed ``CHUNK_SIZE`` trial ranges regardless of
    ``workers``; merged counts are therefore identical for any worker count.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if n < 2 or m < 2:
        raise ValueError(f"need n >= 2 and m >= 2, got n={n}, m={m}")
    build_full_graph(n, m)  # size guard before spawning work
    chunks = [(a, min(a + CHUNK_SIZE, trials)) for a in range(0, trials, CHUNK_SIZE)]
    total = Counter()
    redraws = 0
    done = 0

    def run(chunk):
        return _classify_trials(n, m, seed, chunk[0], chunk[1], distribution)

    if workers <= 1:
        results = map(run, chunks)
    else:
        pool = ThreadPoolExecutor(max_workers=workers)
        results = pool.map(run, chunks)
    try:
        for (a, b), (counts, r) in zip(chunks, results):
            total.update(counts)
            redraws += r
            done += b - a
            if progress:
                progress(done, trials)
    finally:
        if workers > 1:
            pool.shutdown()
    if redraws:
        log.info("redrew %d degenerate games", redraws)
    counts = dict(sorted(total.items(), key=lambda kv: (kv[0][0].value, kv[0][1])))
    est = EnsembleEstimate(n, m, trials, seed, z, counts, redraws)
    intervals = {lab: wilson_interval(est.successes(lab), trials, z) for lab in est.labels()}
    object.__setattr__(est, "intervals", intervals)
    return est


@dataclass(frozen=True)
class SampleConfig:
    n: int
    m: int
    trials: int = 100_000
    seed: int = 7
    z: float = 3.0
    workers: int = 1
    distribution: str = "normal"

    def run(self, progress: Optional[Progress] = None) -> EnsembleEstimate:
        return sample_ensemble(self.n, self.m, self.trials, self.seed, z=self.z, workers=self.workers,
                               distribution=self.distribution, progress=progress)


@dataclass(frozen=True)
class ExactCensus:
    """Exact counts of best-response configurations keyed by ``(convergent, psne_count)``."""

    n: int
    m: int
    total: int
    counts: Mapping[tuple[bool, int], int]

    def convergent_counts(self) -> list[int]:
        """Counts of convergent configurations with 1, 2, ... PSNEs."""
        top = max((k for c, k in self.counts if c), default=0)
        return [self.counts.get((True, k), 0) for k in range(1, top + 1)]

    def non_convergent(self) -> int:
        return sum(v for (c, _), v in self.counts.items() if not c)

    def frequency(self, convergent: bool, psne_count: int) -> Fraction:
        return Fraction(self.counts.get((convergent, psne_count), 0), self.total)


def configuration_count(n: int, m: int) -> int:
    return m ** node_count(n, m)


def enumerate_all_configurations(n: int, m: int, cap: int = DEFAULT_ENUM_CAP,
                                 progress: Optional[Progress] = None) -> ExactCensus:
    """Classify every assignment of one best response per (player, environment)."""
    total = configuration_count(n, m)
    if total > cap:
        raise SizeGuardError(f"(n={n}, m={m}) has {total} configurations, above the cap of {cap}")
    full = build_full_graph(n, m)
    size = full.node_count
    place = m ** np.arange(size - 1, -1, -1, dtype=np.int64)
    nodes = np.arange(size)[None, :]
    counts = Counter()
    for a in range(0, total, _ENUM_BATCH):
        b = min(a + _ENUM_BATCH, total)
        idx = np.arange(a, b, dtype=np.int64)[:, None]
        choices = (idx // place) % m
        psne, convergent = classify_batch(full.adjacency[nodes, choices], n)
        counts.update(zip(convergent.tolist(), psne.tolist()))
        if progress:
            progress(b, total)
    return ExactCensus(n, m, total, dict(sorted(counts.items())))


def reference_values(n: int, m: int, census_cap: int = 1 << 16) -> dict[str, Fraction]:
    """Exact frequencies available for comparison with an :class:`EnsembleEstimate`.

    Uses the 2-player formula when ``n == 2``, an exhaustive census when it is
    small, and otherwise only the unique-PSNE frequency.
    """
    ref = {"A": closed_form.p1(n, m), "k=1": closed_form.p1(n, m)}
    if n == 2:
        for k in range(2, m + 1):
            ref[f"k={k}"] = closed_form.p2_k(m, k)
        ref["B"] = closed_form.type_b_freq_2p(m)
        ref["C"] = 1 - closed_form.convergent_freq_2p(m)
    elif configuration_count(n, m) <= census_cap:
        census = enumerate_all_configurations(n, m)
        for k, c in enumerate(census.convergent_counts(), start=1):
            ref[f"k={k}"] = Fraction(c, census.total)
        ref["B"] = sum((ref[f"k={k}"] for k in range(2, len(census.convergent_counts()) + 1)), Fraction(0))
        ref["C"] = Fraction(census.non_convergent(), census.total)
    return ref
