import numpy as np

from probcount.spatial import Circle, Point, UncertainDatabase, UncertainObject


def figure_one_db() -> UncertainDatabase:
    """Six objects around a radius-5 circle at the origin.

    Inside probabilities: A 1.0, B 0.3, C 0.2, D 0.9, E 0, F 0.
    """
    return UncertainDatabase(
        [
            UncertainObject("A", (((1, 0), 0.5), ((0, 1), 0.5))),
            UncertainObject(
                "B",
                (((1, 1), 0.1), ((2, 2), 0.2), ((10, 0), 0.3), ((0, 10), 0.2), ((8, 8), 0.2)),
            ),
            UncertainObject("C", (((-1, -1), 0.2), ((6, 6), 0.8))),
            UncertainObject("D", (((3, 0), 0.4), ((0, 3), 0.3), ((-2, 2), 0.2), ((9, 9), 0.1))),
            UncertainObject("E", (((20, 20), 1.0),)),
            UncertainObject("F", (((-20, 5), 0.6), ((15, -15), 0.4))),
        ]
    )


FIGURE_ONE_REGION = Circle(Point(0, 0), 5)


def random_micro_db(rng: np.random.Generator, max_objects: int = 5, max_instances: int = 3) -> UncertainDatabase:
    """Random objects with up to ``max_instances`` instances; some lack full existence."""
    objects = []
    for idx in range(int(rng.integers(1, max_objects + 1))):
        m = int(rng.integers(1, max_instances + 1))
        weights = rng.random(m) + 0.05
        existence = 1.0 if rng.random() < 0.6 else rng.uniform(0.3, 1.0)
        probs = weights / weights.sum() * existence
        locs = rng.uniform(-10, 10, size=(m, 2))
        objects.append(UncertainObject(f"o{idx}", tuple(((x, y), float(p)) for (x, y), p in zip(locs, probs))))
    return UncertainDatabase(objects)
