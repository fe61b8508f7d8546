"""Uncertain spatial objects and queries that reduce to probabilistic counting.

An uncertain object is a finite set of alternative locations, each with the
probability of being the true one.  Distinct objects are independent;
instances of one object are mutually exclusive.  Instance probabilities may
sum to less than one, the remainder being the chance that the object does
not exist at all.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from .core import CountDistribution, expand, expand_truncated, rank_coefficient

__all__ = [
    "Point",
    "Circle",
    "Rect",
    "QueryRegion",
    "Instance",
    "UncertainObject",
    "UncertainDatabase",
    "UnknownObjectError",
    "inside_probability",
    "closer_than_probability",
    "range_count_query",
    "knn_membership_probability",
    "distance_rank_probability",
]

EXISTENCE_TOL = 1e-9
# Summed probabilities this close to one are treated as a certain event.
CERTAINTY_SNAP = 1e-12


class UnknownObjectError(KeyError):
    pass


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self) -> None:
        x, y = float(self.x), float(self.y)
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ValueError(f"point coordinates must be finite, got ({x}, {y})")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def distance(self, other: "Point") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class Circle:
    center: Point
    radius: float

    def __post_init__(self) -> None:
        if not self.radius > 0:
            raise ValueError(f"circle radius must be positive, got {self.radius}")

    def contains(self, pt: Point) -> bool:
        return self.center.distance(pt) <= self.radius


@dataclass(frozen=True)
class Rect:
    min: Point
    max: Point

    def __post_init__(self) -> None:
        if self.min.x > self.max.x or self.min.y > self.max.y:
            raise ValueError("rectangle min corner must not exceed max corner")

    def contains(self, pt: Point) -> bool:
        return self.min.x <= pt.x <= self.max.x and self.min.y <= pt.y <= self.max.y


QueryRegion = Union[Circle, Rect]


@dataclass(frozen=True)
class Instance:
    location: Point
    probability: float


def _coerce_instance(item) -> Instance:
    if isinstance(item, Instance):
        return item
    loc, prob = item
    return Instance(loc if isinstance(loc, Point) else Point(*loc), float(prob))


@dataclass(frozen=True)
class UncertainObject:
    id: str
    instances: tuple[Instance, ...]

    def __post_init__(self) -> None:
        insts = tuple(_coerce_instance(i) for i in self.instances)
        if not insts:
            raise ValueError(f"object {self.id!r}: needs at least one instance")
        for inst in insts:
            if not (0.0 < inst.probability <= 1.0):
                raise ValueError(
                    f"object {self.id!r}: instance probability {inst.probability!r} not in (0, 1]"
                )
        total = math.fsum(i.probability for i in insts)
        if total > 1.0 + EXISTENCE_TOL:
            raise ValueError(f"object {self.id!r}: instance probabilities sum to {total:.12g} > 1")
        object.__setattr__(self, "instances", insts)

    @property
    def existence_probability(self) -> float:
        return _as_probability(math.fsum(i.probability for i in self.instances))


class UncertainDatabase:
    def __init__(self, objects: Iterable[UncertainObject] = ()):
        self.objects: tuple[UncertainObject, ...] = tuple(objects)
        self._by_id = {}
        for obj in self.objects:
            if obj.id in self._by_id:
                raise ValueError(f"duplicate object id {obj.id!r}")
            self._by_id[obj.id] = obj

    def __len__(self) -> int:
        return len(self.objects)

    def __iter__(self) -> Iterator[UncertainObject]:
        return iter(self.objects)

    def __contains__(self, object_id: str) -> bool:
        return object_id in self._by_id

    def __getitem__(self, object_id: str) -> UncertainObject:
        try:
            return self._by_id[object_id]
        except KeyError:
            raise UnknownObjectError(object_id) from None

    def __eq__(self, other) -> bool:
        return isinstance(other, UncertainDatabase) and self.objects == other.objects

    def __repr__(self) -> str:
        return f"UncertainDatabase({len(self)} objects)"


def _as_probability(total: float) -> float:
    if total >= 1.0 - CERTAINTY_SNAP:
        return 1.0
    return max(total, 0.0)


def inside_probability(obj: UncertainObject, region: QueryRegion) -> float:
    """Probability mass of the object's instances inside the closed region."""
    return _as_probability(
        math.fsum(i.probability for i in obj.instances if region.contains(i.location))
    )


def closer_than_probability(obj: UncertainObject, q: Point, d: float) -> float:
    """Probability that the object lies strictly closer to ``q`` than ``d``."""
    if d < 0:
        raise ValueError("distance must be nonnegative")
    return _as_probability(
        math.fsum(i.probability for i in obj.instances if q.distance(i.location) < d)
    )


def range_count_query(db: UncertainDatabase, region: QueryRegion) -> CountDistribution:
    """Distribution of how many objects lie inside ``region``.

    Objects certainly outside are pruned and objects certainly inside are
    folded into the offset before the expansion runs.
    """
    return expand([inside_probability(obj, region) for obj in db])


def _others_closer(db: UncertainDatabase, candidate: UncertainObject, q: Point, d: float) -> list[float]:
    return [closer_than_probability(o, q, d) for o in db if o.id != candidate.id]


def knn_membership_probability(db: UncertainDatabase, q: Point, candidate_id: str, k: int) -> float:
    """Probability that the candidate is among the ``k`` nearest objects to ``q``.

    Conditions on each candidate instance: the candidate is a kNN iff at
    most ``k - 1`` other objects are strictly closer than that instance.
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    candidate = db[candidate_id]
    total = []
    for inst in candidate.instances:
        closer = _others_closer(db, candidate, q, q.distance(inst.location))
        at_most = math.fsum(expand_truncated(closer, k).coeffs)
        total.append(inst.probability * at_most)
    return math.fsum(total)


def distance_rank_probability(db: UncertainDatabase, q: Point, candidate_id: str, K: int) -> float:
    """Probability that exactly ``K - 1`` other objects are strictly closer to ``q``."""
    candidate = db[candidate_id]
    if not 1 <= K <= len(db):
        raise ValueError(f"rank K must lie in [1, {len(db)}], got {K}")
    total = []
    for inst in candidate.instances:
        closer = _others_closer(db, candidate, q, q.distance(inst.location))
        total.append(inst.probability * rank_coefficient(closer, K))
    return math.fsum(total)
