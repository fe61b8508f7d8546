"""Reference implementations used to check the fast expansions.

Nothing here is meant to be fast.  The enumerators walk every possible
world in lexicographic order (first trial most significant), so their
summation order, and therefore their output, is deterministic.
"""

from __future__ import annotations

import itertools
import math
from typing import Iterator, Optional, Sequence

import numpy as np

from .core import BernoulliTrial, BivariatePmf, CountDistribution, TrinaryTrial

__all__ = [
    "MAX_BINARY_TRIALS",
    "MAX_TRINARY_TRIALS",
    "brute_force_pmf",
    "poisson_binomial_recurrence",
    "brute_force_trinary",
    "enumerate_worlds",
    "world_range_count",
    "world_knn_probability",
    "world_rank_probability",
]

MAX_BINARY_TRIALS = 24
MAX_TRINARY_TRIALS = 15

# Worlds materialized per vectorized batch.
_CHUNK = 1 << 16


def _plain_probs(trials) -> list[float]:
    return [t.p if isinstance(t, BernoulliTrial) else BernoulliTrial(t).p for t in trials]


def _world_digits(start: int, stop: int, n: int, base: int) -> np.ndarray:
    """Outcome digits of worlds ``start..stop-1``; column 0 is the first trial."""
    idx = np.arange(start, stop, dtype=np.int64)
    weights = base ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // weights[None, :]) % base


def brute_force_pmf(trials: Sequence) -> CountDistribution:
    """Sum the probability of all 2^N success/failure worlds by count."""
    ps = _plain_probs(trials)
    n = len(ps)
    if n > MAX_BINARY_TRIALS:
        raise ValueError(f"brute force is limited to {MAX_BINARY_TRIALS} trials, got {n}")
    p = np.array(ps)
    pmf = np.zeros(n + 1)
    total = 1 << n
    for start in range(0, total, _CHUNK):
        stop = min(start + _CHUNK, total)
        success = _world_digits(start, stop, n, 2).astype(bool)
        world_prob = np.where(success, p, 1.0 - p).prod(axis=1)
        pmf += np.bincount(success.sum(axis=1), weights=world_prob, minlength=n + 1)
    return CountDistribution(pmf)


def poisson_binomial_recurrence(trials: Sequence) -> CountDistribution:
    """P_i(j) = p_i * P_{i-1}(j-1) + (1 - p_i) * P_{i-1}(j), in plain Python."""
    dist = [1.0]
    for p in _plain_probs(trials):
        nxt = [0.0] * (len(dist) + 1)
        for j, mass in enumerate(dist):
            nxt[j] += (1.0 - p) * mass
            nxt[j + 1] += p * mass
        dist = nxt
    return CountDistribution(dist)


def brute_force_trinary(trials: Sequence[TrinaryTrial]) -> BivariatePmf:
    """Enumerate all 3^N satisfy/undecided/fail worlds into an (i, j) grid."""
    n = len(trials)
    if n > MAX_TRINARY_TRIALS:
        raise ValueError(f"brute force is limited to {MAX_TRINARY_TRIALS} trinary trials, got {n}")
    # digit 0 = satisfies, 1 = undecided, 2 = fails
    outcome_probs = np.array([[t.p, t.unknown, t.p_bar] for t in trials]).reshape(n, 3)
    cells = np.zeros((n + 1) * (n + 1))
    total = 3**n
    for start in range(0, total, _CHUNK):
        stop = min(start + _CHUNK, total)
        digits = _world_digits(start, stop, n, 3)
        world_prob = outcome_probs[np.arange(n), digits].prod(axis=1)
        i = (digits == 0).sum(axis=1)
        j = (digits == 1).sum(axis=1)
        cells += np.bincount(i * (n + 1) + j, weights=world_prob, minlength=cells.size)
    return BivariatePmf(cells.reshape(n + 1, n + 1))


# --- possible worlds over uncertain spatial objects -------------------------


def enumerate_worlds(db) -> Iterator[tuple[float, tuple]]:
    """Yield ``(probability, locations)`` for every possible world of ``db``.

    ``locations[i]`` is the chosen point of object i, or None if the object
    is absent in that world.
    """
    choices = []
    for obj in db:
        opts = [(inst.location, inst.probability) for inst in obj.instances]
        absent = 1.0 - math.fsum(p for _, p in opts)
        if absent > 0.0:
            opts.append((None, absent))
        choices.append(opts)
    for combo in itertools.product(*choices):
        prob = 1.0
        for _, p in combo:
            prob *= p
        yield prob, tuple(loc for loc, _ in combo)


def world_range_count(db, region) -> np.ndarray:
    """Dense pmf of the in-region count, indexed 0..N."""
    pmf = np.zeros(len(db) + 1)
    for prob, locs in enumerate_worlds(db):
        pmf[sum(1 for loc in locs if loc is not None and region.contains(loc))] += prob
    return pmf


def _closer_count(locs, q, idx: int) -> Optional[int]:
    own = locs[idx]
    if own is None:
        return None
    d = math.hypot(own.x - q.x, own.y - q.y)
    return sum(
        1
        for i, loc in enumerate(locs)
        if i != idx and loc is not None and math.hypot(loc.x - q.x, loc.y - q.y) < d
    )


def _candidate_index(db, candidate_id: str) -> int:
    for i, obj in enumerate(db):
        if obj.id == candidate_id:
            return i
    raise KeyError(candidate_id)


def world_knn_probability(db, q, candidate_id: str, k: int) -> float:
    idx = _candidate_index(db, candidate_id)
    total = 0.0
    for prob, locs in enumerate_worlds(db):
        closer = _closer_count(locs, q, idx)
        if closer is not None and closer <= k - 1:
            total += prob
    return total


def world_rank_probability(db, q, candidate_id: str, K: int) -> float:
    idx = _candidate_index(db, candidate_id)
    total = 0.0
    for prob, locs in enumerate_worlds(db):
        if _closer_count(locs, q, idx) == K - 1:
            total += prob
    return total
