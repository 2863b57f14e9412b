"""Shared builders for tests: rational grids and seeded random instances."""
from fractions import Fraction
import random

from quasicone import OrderedSpace, QcmInstance, Query, Vec


def rational_grid(start, stop, step):
    """[(label, value)] for start, start+step, ..., <= stop."""
    value = Fraction(start)
    stop = Fraction(stop)
    step = Fraction(step)
    points = []
    while value <= stop:
        points.append((str(value), value))
        value += step
    return points


def random_vec(rng: random.Random, dim: int, lo=0, hi=4, denominators=(1, 2, 3)) -> Vec:
    return Vec(
        tuple(Fraction(rng.randint(lo, hi), rng.choice(denominators)) for _ in range(dim))
    )


def random_table_instance(rng: random.Random, max_points=8, dim=3) -> QcmInstance:
    """Random explicit table over the orthant: zero diagonal, small entries.

    Roughly a fifth of the off-diagonal entries reuse an earlier value so
    exact ties (and with them multi-member best sets) actually occur.
    """
    n = rng.randint(3, max_points)
    labels = [f"p{i}" for i in range(n)]
    space = OrderedSpace.orthant(dim)
    table = {}
    seen = []
    for r in labels:
        for s in labels:
            if r == s:
                table[(r, s)] = Vec.zero(dim)
                continue
            if seen and rng.random() < 0.2:
                value = rng.choice(seen)
            else:
                value = random_vec(rng, dim)
                seen.append(value)
            table[(r, s)] = value
    return QcmInstance(space, labels, table)


def random_query(rng: random.Random, instance: QcmInstance, max_candidates=6,
                 direction="forward") -> Query:
    labels = list(instance.points)
    q = rng.choice(labels)
    size = rng.randint(1, min(max_candidates, len(labels)))
    return Query(q, frozenset(rng.sample(labels, size)), direction)


def seeded_instances(count: int, seed: int, max_points=8, max_candidates=6, dim=3):
    """The shared corpus of (instance, query) pairs used by several suites."""
    rng = random.Random(seed)
    pairs = []
    for _ in range(count):
        instance = random_table_instance(rng, max_points=max_points, dim=dim)
        pairs.append((instance, random_query(rng, instance, max_candidates)))
    return pairs
