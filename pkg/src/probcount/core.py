"""Probability-generating polynomials for counting independent Bernoulli trials.

The number of successes among independent trials with success
probabilities ``p_1..p_N`` follows a Poisson-binomial distribution.  Its
probability mass function is the coefficient sequence of

    prod_i (p_i * x + 1 - p_i)

and multiplying the factors in one at a time unifies all possible worlds
with the same count into a single coefficient, so the full pmf costs
O(N^2) multiplications instead of O(2^N) world enumerations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from ._kernels import bernoulli_expand

__all__ = [
    "BernoulliTrial",
    "TrinaryTrial",
    "ProbabilityPolynomial",
    "BivariatePmf",
    "CountDistribution",
    "NumericalInstabilityError",
    "poly_from_trial",
    "multiply",
    "multiply_truncated",
    "expand",
    "expand_truncated",
    "rank_coefficient",
    "expand_fft",
    "expand_trinary",
    "update_trial",
]

NORMALIZATION_TOL = 1e-9
FFT_NEGATIVE_TOL = 1e-9
DIVISION_BOUND_TOL = 1e-6
SHIFT_ZERO_TOL = 1e-12

# D&C base case and the combined length above which FFT convolution engages.
FFT_LEAF_SIZE = 32
FFT_MIN_LENGTH = 64


class NumericalInstabilityError(ArithmeticError):
    """Raised when floating point error makes a result untrustworthy."""


def _check_probability(p: float, name: str = "p") -> float:
    p = float(p)
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"{name} must lie in [0, 1], got {p!r}")
    return p


@dataclass(frozen=True)
class BernoulliTrial:
    p: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", _check_probability(self.p))


@dataclass(frozen=True)
class TrinaryTrial:
    """A trial that satisfies, fails, or stays undecided.

    ``p`` is the probability of definite satisfaction and ``p_bar`` that of
    definite non-satisfaction; the remainder is the undecided state.
    """

    p: float
    p_bar: float

    def __post_init__(self) -> None:
        p = _check_probability(self.p)
        p_bar = _check_probability(self.p_bar, "p_bar")
        if p + p_bar > 1.0 + 1e-12:
            raise ValueError(f"p + p_bar must not exceed 1, got {p} + {p_bar}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "p_bar", p_bar)

    @property
    def unknown(self) -> float:
        return max(0.0, 1.0 - self.p - self.p_bar)


TrialLike = Union[BernoulliTrial, float]


def _probabilities(trials: Iterable[TrialLike]) -> np.ndarray:
    ps = [t.p if isinstance(t, BernoulliTrial) else _check_probability(t) for t in trials]
    return np.asarray(ps, dtype=float)


def _split_degenerate(ps: np.ndarray) -> tuple[np.ndarray, int]:
    """Drop impossible trials and count certain ones.

    Multiplying by ``1 + 0x`` or ``0 + 1x`` is exact in floating point, so
    removing these factors changes no coefficient bit.
    """
    certain = int(np.count_nonzero(ps == 1.0))
    return ps[(ps > 0.0) & (ps < 1.0)], certain


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ProbabilityPolynomial:
    """Dense coefficients of a generating polynomial; index = exponent.

    When ``truncation_bound`` is set the polynomial is the prefix of a
    longer one: only exponents below the bound are kept, so the
    coefficients may sum to less than one.
    """

    coeffs: np.ndarray
    truncation_bound: Optional[int] = None

    def __post_init__(self) -> None:
        coeffs = _frozen(self.coeffs)
        if coeffs.ndim != 1 or coeffs.size == 0:
            raise ValueError("coefficients must be a nonempty 1-d sequence")
        if not np.all(np.isfinite(coeffs)) or np.any(coeffs < 0.0):
            raise ValueError("coefficients must be finite and nonnegative")
        total = math.fsum(coeffs)
        if self.truncation_bound is None:
            if abs(total - 1.0) > NORMALIZATION_TOL:
                raise ValueError(f"coefficients sum to {total!r}, expected 1")
        else:
            if self.truncation_bound < 1:
                raise ValueError("truncation bound must be at least 1")
            if coeffs.size > self.truncation_bound:
                raise ValueError("more coefficients than the truncation bound allows")
            if total > 1.0 + NORMALIZATION_TOL:
                raise ValueError(f"truncated coefficients sum to {total!r} > 1")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def is_truncated(self) -> bool:
        return self.truncation_bound is not None

    def __len__(self) -> int:
        return self.coeffs.size

    def __getitem__(self, exponent):
        return self.coeffs[exponent]

    def __repr__(self) -> str:
        bound = "" if self.truncation_bound is None else f", truncation_bound={self.truncation_bound}"
        return f"ProbabilityPolynomial({self.coeffs.tolist()}{bound})"


@dataclass(frozen=True, eq=False)
class CountDistribution:
    """Distribution of a count as ``offset + k`` with ``k ~ pmf``.

    ``offset`` holds trials that were certain to succeed and were folded in
    without expanding them.
    """

    pmf: np.ndarray
    offset: int = 0

    def __post_init__(self) -> None:
        pmf = _frozen(self.pmf)
        if pmf.ndim != 1 or pmf.size == 0:
            raise ValueError("pmf must be a nonempty 1-d sequence")
        if not np.all(np.isfinite(pmf)) or np.any(pmf < 0.0):
            raise ValueError("pmf entries must be finite and nonnegative")
        total = math.fsum(pmf)
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"pmf sums to {total!r}, expected 1")
        if self.offset < 0:
            raise ValueError("offset must be nonnegative")
        object.__setattr__(self, "pmf", pmf)
        object.__setattr__(self, "offset", int(self.offset))

    @classmethod
    def from_polynomial(cls, poly: ProbabilityPolynomial) -> "CountDistribution":
        if poly.is_truncated:
            raise ValueError("a truncated polynomial is not a complete distribution")
        return cls(poly.coeffs, 0)

    @property
    def max_count(self) -> int:
        return self.offset + self.pmf.size - 1

    def probability(self, count: int) -> float:
        k = count - self.offset
        if 0 <= k < self.pmf.size:
            return float(self.pmf[k])
        return 0.0

    def dense(self, length: Optional[int] = None) -> np.ndarray:
        """Probabilities indexed by total count, zero padded to ``length``."""
        n = self.max_count + 1 if length is None else max(length, self.max_count + 1)
        out = np.zeros(n)
        out[self.offset : self.offset + self.pmf.size] = self.pmf
        return out

    def to_polynomial(self) -> ProbabilityPolynomial:
        return ProbabilityPolynomial(self.dense())

    def mean(self) -> float:
        return self.offset + float(np.dot(np.arange(self.pmf.size), self.pmf))

    def variance(self) -> float:
        k = np.arange(self.pmf.size)
        m = float(np.dot(k, self.pmf))
        return float(np.dot(k * k, self.pmf)) - m * m

    def __repr__(self) -> str:
        return f"CountDistribution(pmf={self.pmf.tolist()}, offset={self.offset})"


@dataclass(frozen=True, eq=False)
class BivariatePmf:
    """Joint pmf of (satisfying count i, undecided count j) as a grid."""

    coeffs: np.ndarray

    def __post_init__(self) -> None:
        grid = _frozen(self.coeffs)
        if grid.ndim != 2 or grid.size == 0:
            raise ValueError("grid must be a nonempty 2-d array")
        if not np.all(np.isfinite(grid)) or np.any(grid < 0.0):
            raise ValueError("grid entries must be finite and nonnegative")
        total = math.fsum(grid.ravel())
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"grid sums to {total!r}, expected 1")
        object.__setattr__(self, "coeffs", grid)

    def __getitem__(self, ij):
        return self.coeffs[ij]

    def certain_marginal(self) -> np.ndarray:
        """Distribution of the satisfying count alone (substitute y = 1)."""
        return self.coeffs.sum(axis=1)

    def possible_marginal(self) -> np.ndarray:
        """Distribution of satisfying plus undecided (substitute y = x)."""
        rows, cols = self.coeffs.shape
        out = np.zeros(rows + cols - 1)
        for i in range(rows):
            out[i : i + cols] += self.coeffs[i]
        return out

    @staticmethod
    def count_bounds(i: int, j: int) -> tuple[int, int]:
        return i, i + j

    def describe(self, i: int, j: int) -> str:
        lo, hi = self.count_bounds(i, j)
        return f"at least {lo}, at most {hi} objects satisfy, probability {self.coeffs[i, j]:.12g}"

    def cells(self, threshold: float = 0.0):
        """Yield ``(i, j, probability)`` for cells above ``threshold``."""
        for i, j in zip(*np.nonzero(self.coeffs > threshold)):
            yield int(i), int(j), float(self.coeffs[i, j])


def poly_from_trial(trial: TrialLike) -> ProbabilityPolynomial:
    p = trial.p if isinstance(trial, BernoulliTrial) else _check_probability(trial)
    if p == 0.0:
        return ProbabilityPolynomial([1.0])
    return ProbabilityPolynomial([1.0 - p, p])


def _convolve(a: np.ndarray, b: np.ndarray, length: Optional[int] = None) -> np.ndarray:
    # Contributions land in the same order whether or not the tail is cut,
    # so a truncated product is bit-identical to the prefix of the full one.
    full = a.size + b.size - 1
    n = full if length is None else min(length, full)
    out = np.zeros(n)
    for j in range(min(b.size, n)):
        span = min(a.size, n - j)
        out[j : j + span] += a[:span] * b[j]
    return out


def multiply(a: ProbabilityPolynomial, b: ProbabilityPolynomial) -> ProbabilityPolynomial:
    if a.is_truncated or b.is_truncated:
        raise ValueError("multiply needs complete polynomials; use multiply_truncated")
    return ProbabilityPolynomial(_convolve(a.coeffs, b.coeffs))


def multiply_truncated(
    a: ProbabilityPolynomial, b: ProbabilityPolynomial, K: int
) -> ProbabilityPolynomial:
    """Product with every exponent >= K discarded.

    Truncated inputs are accepted; the result is only meaningful below the
    smallest bound involved, so that bound is what the result carries.
    """
    if K < 1:
        raise ValueError("truncation bound K must be at least 1")
    bound = min(k for k in (K, a.truncation_bound, b.truncation_bound) if k is not None)
    return ProbabilityPolynomial(_convolve(a.coeffs, b.coeffs, bound), truncation_bound=bound)


def expand(trials: Sequence[TrialLike]) -> CountDistribution:
    """Full distribution of the number of successful trials."""
    ps, certain = _split_degenerate(_probabilities(trials))
    return CountDistribution(bernoulli_expand(ps, ps.size + 1), offset=certain)


def expand_truncated(trials: Sequence[TrialLike], K: int) -> ProbabilityPolynomial:
    """First ``K`` coefficients of the expansion, in O(K * N) time.

    Enough for any question about counts below ``K`` (kNN membership,
    distance rank).  Matches ``expand(trials).dense()[:K]`` bit for bit.
    """
    if K < 1:
        raise ValueError("truncation bound K must be at least 1")
    ps, certain = _split_degenerate(_probabilities(trials))
    length = min(K, certain + ps.size + 1)
    out = np.zeros(length)
    if certain < length:
        out[certain:] = bernoulli_expand(ps, length - certain)
    return ProbabilityPolynomial(out, truncation_bound=K)


def rank_coefficient(trials: Sequence[TrialLike], K: int) -> float:
    """Probability that exactly ``K - 1`` trials succeed."""
    n = len(trials)
    if not 1 <= K <= n + 1:
        raise ValueError(f"K must lie in [1, {n + 1}], got {K}")
    coeffs = expand_truncated(trials, K).coeffs
    return float(coeffs[K - 1]) if K <= coeffs.size else 0.0


def _fft_convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = a.size + b.size - 1
    if n <= FFT_MIN_LENGTH:
        return _convolve(a, b)
    size = 1 << (n - 1).bit_length()
    out = np.fft.irfft(np.fft.rfft(a, size) * np.fft.rfft(b, size), size)[:n]
    low = out.min()
    if low < -FFT_NEGATIVE_TOL:
        raise NumericalInstabilityError(
            f"FFT convolution produced coefficient {low:.3e} below -{FFT_NEGATIVE_TOL:g}"
        )
    np.maximum(out, 0.0, out=out)
    return out / out.sum()


def _expand_dc(ps: np.ndarray) -> np.ndarray:
    if ps.size <= FFT_LEAF_SIZE:
        return bernoulli_expand(ps, ps.size + 1)
    mid = ps.size // 2
    return _fft_convolve(_expand_dc(ps[:mid]), _expand_dc(ps[mid:]))


def expand_fft(trials: Sequence[TrialLike]) -> CountDistribution:
    """Same distribution as :func:`expand` in O(N log^2 N).

    Trials are halved recursively and the two halves' polynomials are
    combined by FFT convolution.  Roundoff negatives down to -1e-9 are
    clamped and the pmf renormalized; anything worse raises
    :class:`NumericalInstabilityError`.
    """
    ps, certain = _split_degenerate(_probabilities(trials))
    return CountDistribution(_expand_dc(ps), offset=certain)


def expand_trinary(trials: Sequence[TrinaryTrial]) -> BivariatePmf:
    """Expand prod(p*x + u*y + p_bar) into an (N+1) x (N+1) grid.

    Cell (i, j) is the probability that exactly i trials satisfy and j
    remain undecided.
    """
    n = len(trials)
    grid = np.zeros((n + 1, n + 1))
    grid[0, 0] = 1.0
    for k, t in enumerate(trials):
        cur = grid[: k + 1, : k + 1].copy()
        grid[: k + 1, : k + 1] = cur * t.p_bar
        grid[1 : k + 2, : k + 1] += cur * t.p
        grid[: k + 1, 1 : k + 2] += cur * t.unknown
    return BivariatePmf(grid)


def _divide_out(c: np.ndarray, p: float) -> np.ndarray:
    """Quotient of ``c`` by ``p*x + 1 - p`` for 0 < p < 1.

    Runs the recurrence that divides by the larger of p and 1 - p so that
    error shrinks from step to step.
    """
    q = 1.0 - p
    n = c.size - 1
    g = np.empty(n)
    if p <= 0.5:
        prev = 0.0
        for i in range(n):
            prev = (c[i] - p * prev) / q
            g[i] = prev
        remainder = c[n] - p * g[n - 1]
    else:
        nxt = 0.0
        for i in range(n, 0, -1):
            nxt = (c[i] - q * nxt) / p
            g[i - 1] = nxt
        remainder = c[0] - q * g[0]
    low, high = g.min(), g.max()
    if low < -DIVISION_BOUND_TOL or high > 1.0 + DIVISION_BOUND_TOL:
        raise NumericalInstabilityError(
            f"quotient coefficient outside [{-DIVISION_BOUND_TOL:g}, 1+{DIVISION_BOUND_TOL:g}]: "
            f"min {low:.3e}, max {high:.3e}"
        )
    if abs(remainder) > DIVISION_BOUND_TOL:
        raise NumericalInstabilityError(
            f"division by the trial factor left remainder {remainder:.3e}; "
            "the polynomial does not contain a trial with this probability"
        )
    return g


def update_trial(F: ProbabilityPolynomial, p_old: float, p_new: float) -> ProbabilityPolynomial:
    """Replace one trial's probability inside an already expanded polynomial.

    Divides out ``p_old*x + 1 - p_old`` and multiplies in the new factor.
    The result keeps at least the length of ``F``.  Raises
    :class:`NumericalInstabilityError` when the division is not trustworthy;
    recompute from scratch in that case.
    """
    if F.is_truncated:
        raise ValueError("update_trial needs a complete expansion")
    p_old = _check_probability(p_old, "p_old")
    p_new = _check_probability(p_new, "p_new")
    c = F.coeffs
    if p_old == 0.0:
        quotient = c
    elif c.size < 2:
        raise ValueError("a degree-0 polynomial contains no trial with p_old > 0")
    elif p_old == 1.0:
        if c[0] > SHIFT_ZERO_TOL:
            raise ValueError(
                f"P(count = 0) = {c[0]:.3e}; the polynomial contains no certain trial"
            )
        quotient = c[1:]
    else:
        quotient = np.maximum(_divide_out(c, p_old), 0.0)
    out = _convolve(quotient, poly_from_trial(p_new).coeffs)
    if out.size < c.size:
        out = np.concatenate([out, np.zeros(c.size - out.size)])
    return ProbabilityPolynomial(out / math.fsum(out))
