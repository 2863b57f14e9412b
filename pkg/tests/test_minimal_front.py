"""The two minimal-front routes agree with each other and with a direct
definition-based oracle, on every cone and size we throw at them."""
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quasicone import (
    MinimalFrontFallback,
    OrderedSpace,
    PolyhedralCone,
    Vec,
    minimal_front_dnc,
    minimal_front_naive,
)

ORTHANT2 = OrderedSpace.orthant(2)
ORTHANT3 = OrderedSpace.orthant(3)
SKEW = OrderedSpace(2, PolyhedralCone(2, (Vec.of(2, -1), Vec.of(-1, 2))))


def oracle_front(values, space):
    """Directly quantify the definition: keep v unless something strictly
    precedes it."""
    values = list(values)
    return frozenset(
        label
        for label, vec in values
        if not any(space.lt(other, vec) for _, other in values)
    )


def random_values(rng, count, dim, lo=0, hi=12, denominators=(1, 2, 4)):
    values = []
    for i in range(count):
        if values and rng.random() < 0.15:  # force exact duplicates
            values.append((f"v{i}", values[rng.randrange(len(values))][1]))
        else:
            values.append(
                (
                    f"v{i}",
                    Vec(
                        tuple(
                            Fraction(rng.randint(lo, hi), rng.choice(denominators))
                            for _ in range(dim)
                        )
                    ),
                )
            )
    return values


class TestSmallCases:
    def test_three_point_front(self):
        values = [("a", Vec.of(1, 0)), ("b", Vec.of(0, 1)), ("c", Vec.of(1, 1))]
        assert minimal_front_naive(values, ORTHANT2) == {"a", "b"}
        assert minimal_front_dnc(values, ORTHANT2) == {"a", "b"}

    def test_singleton(self):
        values = [("only", Vec.of(3, "1/2"))]
        assert minimal_front_naive(values, ORTHANT2) == {"only"}
        assert minimal_front_dnc(values, ORTHANT2) == {"only"}

    def test_empty(self):
        assert minimal_front_naive([], ORTHANT2) == frozenset()
        assert minimal_front_dnc([], ORTHANT2) == frozenset()

    def test_duplicates_survive_together(self):
        values = [("a", Vec.of(0, 0)), ("b", Vec.of(0, 0)), ("c", Vec.of(1, 0))]
        for front in (minimal_front_naive(values, ORTHANT2), minimal_front_dnc(values, ORTHANT2)):
            assert front == {"a", "b"}

    def test_dominated_duplicates_excluded_together(self):
        values = [("a", Vec.of(2, 2)), ("b", Vec.of(2, 2)), ("c", Vec.of(1, 1))]
        for front in (minimal_front_naive(values, ORTHANT2), minimal_front_dnc(values, ORTHANT2)):
            assert front == {"c"}

    def test_equal_first_coordinate_groups(self):
        values = [
            ("a", Vec.of(1, 5)),
            ("b", Vec.of(1, 2)),
            ("c", Vec.of(1, 2)),
            ("d", Vec.of(2, 2)),
            ("e", Vec.of(2, 1)),
        ]
        expected = oracle_front(values, ORTHANT2)
        assert expected == {"b", "c", "e"}
        assert minimal_front_dnc(values, ORTHANT2) == expected

    def test_one_dimensional(self):
        space = OrderedSpace.orthant(1)
        values = [("a", Vec.of(2)), ("b", Vec.of(1)), ("c", Vec.of(1))]
        assert minimal_front_dnc(values, space) == {"b", "c"}
        assert minimal_front_naive(values, space) == {"b", "c"}


class TestFallbacks:
    def test_non_orthant_falls_back_with_warning(self):
        values = [("a", Vec.of(1, 0)), ("b", Vec.of(0, 1)), ("c", Vec.of(2, 2))]
        with pytest.warns(MinimalFrontFallback):
            front = minimal_front_dnc(values, SKEW)
        assert front == minimal_front_naive(values, SKEW) == oracle_front(values, SKEW)

    def test_high_dimension_falls_back_with_warning(self):
        space = OrderedSpace.orthant(4)
        rng = random.Random(1)
        values = random_values(rng, 30, 4)
        with pytest.warns(MinimalFrontFallback):
            front = minimal_front_dnc(values, space)
        assert front == minimal_front_naive(values, space)

    def test_skew_cone_naive_matches_oracle(self):
        rng = random.Random(2)
        values = [
            (f"v{i}", Vec.of(Fraction(rng.randint(-6, 6), 2), Fraction(rng.randint(-6, 6), 2)))
            for i in range(40)
        ]
        assert minimal_front_naive(values, SKEW) == oracle_front(values, SKEW)


class TestEquivalence:
    @pytest.mark.parametrize("dim,space", [(2, ORTHANT2), (3, ORTHANT3)])
    @pytest.mark.parametrize("count", [10, 60, 250])
    def test_seeded_random_sets(self, dim, space, count):
        rng = random.Random(1000 + dim * count)
        for _ in range(5):
            values = random_values(rng, count, dim)
            naive = minimal_front_naive(values, space)
            fast = minimal_front_dnc(values, space)
            assert naive == fast
            assert naive == oracle_front(values, space)

    def test_thousand_points_q3(self):
        rng = random.Random(31)
        values = random_values(rng, 1000, 3)
        assert minimal_front_naive(values, ORTHANT3) == minimal_front_dnc(values, ORTHANT3)

    @settings(max_examples=60, deadline=None)
    @given(
        st.lists(
            st.tuples(
                st.integers(min_value=0, max_value=6),
                st.integers(min_value=0, max_value=6),
            ),
            max_size=40,
        )
    )
    def test_property_plane(self, raw):
        values = [(f"v{i}", Vec.of(a, b)) for i, (a, b) in enumerate(raw)]
        assert minimal_front_dnc(values, ORTHANT2) == minimal_front_naive(values, ORTHANT2)

    @settings(max_examples=60, deadline=None)
    @given(
        st.lists(
            st.tuples(
                st.integers(min_value=0, max_value=4),
                st.integers(min_value=0, max_value=4),
                st.integers(min_value=0, max_value=4),
            ),
            max_size=40,
        )
    )
    def test_property_three_dims(self, raw):
        values = [(f"v{i}", Vec.of(a, b, c)) for i, (a, b, c) in enumerate(raw)]
        assert minimal_front_dnc(values, ORTHANT3) == minimal_front_naive(values, ORTHANT3)
