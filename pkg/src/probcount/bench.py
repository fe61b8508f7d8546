"""Timing harness contrasting the naive, truncated and FFT expansions."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import _kernels
from .core import NumericalInstabilityError, expand, expand_fft, expand_truncated

FFT_AGREEMENT_TOL = 1e-8


class BenchMismatchError(NumericalInstabilityError):
    pass


@dataclass
class BenchRow:
    n: int
    naive: float
    fft: float
    truncated: Optional[float] = None


def _timed(fn: Callable[[], object]) -> float:
    start = time.perf_counter()
    fn()
    return time.perf_counter() - start


def run_bench(
    sizes: Sequence[int],
    k: Optional[int] = None,
    seed: int = 0,
    repeat: int = 3,
    budget: float = 1.0,
) -> list[BenchRow]:
    """Time each algorithm on random trials; results are cross-checked first.

    Measurements are interleaved in rounds over every (size, algorithm)
    cell and the fastest run of each cell is reported, so drift in machine
    speed affects all sizes alike.  Rounds continue until each cell has
    ``repeat`` runs and ``budget`` seconds have been spent in total.
    """
    if any(n < 1 for n in sizes):
        raise ValueError("bench sizes must be at least 1")
    _kernels.warmup()
    rng = np.random.default_rng(seed)
    inputs = [rng.random(n) for n in sizes]
    for n, ps in zip(sizes, inputs):
        naive = expand(ps).dense()
        diff = float(np.max(np.abs(expand_fft(ps).dense(naive.size) - naive)))
        if diff > FFT_AGREEMENT_TOL:
            raise BenchMismatchError(f"N={n}: FFT differs from naive by {diff:.3e}")
        if k is not None:
            prefix = expand_truncated(ps, k).coeffs
            if not np.array_equal(prefix, naive[: prefix.size]):
                raise BenchMismatchError(f"N={n}: truncated expansion is not a prefix of the full one")

    algos: dict[str, Callable] = {"naive": expand, "fft": expand_fft}
    if k is not None:
        algos["truncated"] = lambda ps: expand_truncated(ps, k)
    best = {(i, name): float("inf") for i in range(len(sizes)) for name in algos}
    spent, rounds = 0.0, 0
    while rounds < repeat or spent < budget:
        for i, ps in enumerate(inputs):
            for name, fn in algos.items():
                elapsed = _timed(lambda: fn(ps))
                best[i, name] = min(best[i, name], elapsed)
                spent += elapsed
        rounds += 1
    return [
        BenchRow(
            n=n,
            naive=best[i, "naive"],
            fft=best[i, "fft"],
            truncated=best.get((i, "truncated")),
        )
        for i, n in enumerate(sizes)
    ]


def format_table(rows: Sequence[BenchRow], k: Optional[int] = None) -> str:
    trunc_head = f"truncated(K={k}) s" if k is not None else None
    heads = ["N", "naive s", "fft s"] + ([trunc_head] if trunc_head else [])
    lines = ["  ".join(f"{h:>18}" for h in heads)]
    for r in rows:
        cells = [f"{r.n:>18d}", f"{r.naive:>18.6f}", f"{r.fft:>18.6f}"]
        if trunc_head:
            cells.append(f"{r.truncated:>18.6f}")
        lines.append("  ".join(cells))
    return "\n".join(lines)
