"""Exact count distributions over uncertain objects via generating functions."""

from .core import (
    BernoulliTrial,
    BivariatePmf,
    CountDistribution,
    NumericalInstabilityError,
    ProbabilityPolynomial,
    TrinaryTrial,
    expand,
    expand_fft,
    expand_trinary,
    expand_truncated,
    multiply,
    multiply_truncated,
    poly_from_trial,
    rank_coefficient,
    update_trial,
)
from .spatial import (
    Circle,
    Instance,
    Point,
    Rect,
    UncertainDatabase,
    UncertainObject,
    closer_than_probability,
    distance_rank_probability,
    inside_probability,
    knn_membership_probability,
    range_count_query,
)

__version__ = "0.1.0"
