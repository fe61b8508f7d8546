import numpy as np
import pytest

from probcount.oracles import world_knn_probability, world_range_count, world_rank_probability
from probcount.spatial import (
    Circle,
    Point,
    Rect,
    UncertainDatabase,
    UncertainObject,
    UnknownObjectError,
    closer_than_probability,
    distance_rank_probability,
    inside_probability,
    knn_membership_probability,
    range_count_query,
)

from helpers import FIGURE_ONE_REGION, figure_one_db, random_micro_db

ORIGIN = Point(0, 0)


def test_object_validation():
    with pytest.raises(ValueError, match="'X'.*sum to 1.2"):
        UncertainObject("X", (((0, 0), 0.6), ((1, 1), 0.6)))
    with pytest.raises(ValueError):
        UncertainObject("X", ())
    with pytest.raises(ValueError):
        UncertainObject("X", (((0, 0), 0.0),))
    with pytest.raises(ValueError):
        Point(float("inf"), 0)
    with pytest.raises(ValueError):
        UncertainDatabase([UncertainObject("X", (((0, 0), 1.0),))] * 2)


def test_regions_are_closed():
    assert Circle(ORIGIN, 1).contains(Point(1, 0))
    assert Rect(Point(0, 0), Point(1, 1)).contains(Point(1, 0.5))
    assert not Rect(Point(0, 0), Point(1, 1)).contains(Point(1.0001, 0.5))
    with pytest.raises(ValueError):
        Circle(ORIGIN, 0)
    with pytest.raises(ValueError):
        Rect(Point(1, 0), Point(0, 1))


def test_inside_probability():
    db = figure_one_db()
    got = {o.id: inside_probability(o, FIGURE_ONE_REGION) for o in db}
    assert got == pytest.approx({"A": 1.0, "B": 0.3, "C": 0.2, "D": 0.9, "E": 0.0, "F": 0.0}, abs=1e-15)
    assert got["A"] == 1.0 and got["E"] == 0.0


def test_inside_probability_constructed_object():
    obj = UncertainObject("B", (((0, 0), 0.1), ((1, 0), 0.2), ((9, 9), 0.7)))
    assert inside_probability(obj, Circle(ORIGIN, 2)) == pytest.approx(0.3, abs=1e-15)


def test_closer_than_probability():
    obj = UncertainObject("X", (((1, 0), 0.4), ((0, 3), 0.6)))
    assert closer_than_probability(obj, ORIGIN, 0) == 0
    assert closer_than_probability(obj, ORIGIN, 2) == pytest.approx(0.4)
    assert closer_than_probability(obj, ORIGIN, 1) == 0  # tie is not closer
    assert closer_than_probability(obj, ORIGIN, 100) == 1.0
    partial = UncertainObject("Y", (((1, 0), 0.3),))
    assert closer_than_probability(partial, ORIGIN, 100) == pytest.approx(0.3)


def test_range_count_figure_one():
    d = range_count_query(figure_one_db(), FIGURE_ONE_REGION)
    assert d.offset == 1
    np.testing.assert_allclose(d.pmf, [0.056, 0.542, 0.348, 0.054], atol=1e-12)
    assert d.probability(1) == pytest.approx(0.7 * 0.8 * 0.1, abs=1e-12)


def test_range_count_trivial():
    d = range_count_query(UncertainDatabase(), FIGURE_ONE_REGION)
    assert d.offset == 0 and d.pmf.tolist() == [1.0]
    certain = UncertainDatabase([UncertainObject(f"o{i}", (((0, i * 0.1), 1.0),)) for i in range(4)])
    d = range_count_query(certain, FIGURE_ONE_REGION)
    assert d.offset == 4 and d.pmf.tolist() == [1.0]


def test_pruning_neutrality():
    db = figure_one_db()
    base = range_count_query(db, FIGURE_ONE_REGION)
    miss = UncertainObject("far", (((50, 50), 0.8),))
    hit = UncertainObject("near", (((0, 0), 1.0),))
    d_miss = range_count_query(UncertainDatabase([*db, miss]), FIGURE_ONE_REGION)
    d_hit = range_count_query(UncertainDatabase([*db, hit]), FIGURE_ONE_REGION)
    assert d_miss.offset == base.offset and d_miss.pmf.tobytes() == base.pmf.tobytes()
    assert d_hit.offset == base.offset + 1 and d_hit.pmf.tobytes() == base.pmf.tobytes()


def test_monotone_region_growth():
    rng = np.random.default_rng(11)
    for _ in range(10):
        db = random_micro_db(rng, max_objects=8)
        center = Point(*rng.uniform(-5, 5, 2))
        means = [range_count_query(db, Circle(center, r)).mean() for r in np.linspace(0.5, 20, 15)]
        assert all(b >= a - 1e-12 for a, b in zip(means, means[1:]))


def test_knn_trivial():
    alone = UncertainDatabase([UncertainObject("A", (((3, 4), 1.0),))])
    assert knn_membership_probability(alone, ORIGIN, "A", 1) == 1.0
    blocked = UncertainDatabase([*alone, UncertainObject("Z", (((1, 0), 1.0),))])
    assert knn_membership_probability(blocked, ORIGIN, "A", 1) == 0.0
    assert knn_membership_probability(blocked, ORIGIN, "A", 2) == 1.0
    with pytest.raises(UnknownObjectError):
        knn_membership_probability(alone, ORIGIN, "nope", 1)
    with pytest.raises(ValueError):
        knn_membership_probability(alone, ORIGIN, "A", 0)


def test_rank_trivial():
    alone = UncertainDatabase([UncertainObject("A", (((3, 4), 0.7),))])
    assert distance_rank_probability(alone, ORIGIN, "A", 1) == pytest.approx(0.7)
    cand = UncertainObject("A", (((3, 4), 0.6), ((0, 9), 0.3)))
    blocked = UncertainDatabase([cand, UncertainObject("Z", (((1, 0), 1.0),))])
    assert distance_rank_probability(blocked, ORIGIN, "A", 1) == 0.0
    assert distance_rank_probability(blocked, ORIGIN, "A", 2) == pytest.approx(0.9)
    for bad in (0, 3):
        with pytest.raises(ValueError):
            distance_rank_probability(blocked, ORIGIN, "A", bad)


def test_ties_are_not_closer():
    db = UncertainDatabase(
        [UncertainObject("A", (((1, 0), 1.0),)), UncertainObject("B", (((0, 1), 1.0),))]
    )
    assert distance_rank_probability(db, ORIGIN, "A", 1) == 1.0
    assert distance_rank_probability(db, ORIGIN, "B", 1) == 1.0
    assert world_rank_probability(db, ORIGIN, "A", 1) == 1.0


def test_evaluators_match_world_enumeration():
    rng = np.random.default_rng(2024)
    for _ in range(20):
        db = random_micro_db(rng)
        region = Circle(Point(*rng.uniform(-6, 6, 2)), rng.uniform(1, 10))
        got = range_count_query(db, region).dense(len(db) + 1)
        np.testing.assert_allclose(got, world_range_count(db, region), rtol=0, atol=1e-10)
        q = Point(*rng.uniform(-6, 6, 2))
        cand = db.objects[int(rng.integers(len(db)))].id
        for k in range(1, len(db) + 1):
            assert knn_membership_probability(db, q, cand, k) == pytest.approx(
                world_knn_probability(db, q, cand, k), abs=1e-10
            )
            assert distance_rank_probability(db, q, cand, k) == pytest.approx(
                world_rank_probability(db, q, cand, k), abs=1e-10
            )


def test_rank_completeness_and_knn_consistency():
    rng = np.random.default_rng(99)
    for _ in range(20):
        db = random_micro_db(rng, max_objects=7)
        q = Point(*rng.uniform(-6, 6, 2))
        for obj in db:
            ranks = [distance_rank_probability(db, q, obj.id, K) for K in range(1, len(db) + 1)]
            assert sum(ranks) == pytest.approx(obj.existence_probability, abs=1e-9)
            for k in range(1, len(db) + 1):
                assert knn_membership_probability(db, q, obj.id, k) == pytest.approx(sum(ranks[:k]), abs=1e-9)
