"""Instance builders, exhaustive axiom verification, and transposition."""
from fractions import Fraction

import pytest

from quasicone import (
    DimensionMismatch,
    DuplicateLabel,
    OrderedSpace,
    QcmInstance,
    Vec,
    build_example3,
    build_example4,
    transpose,
    verify_axioms,
)
from helpers import rational_grid


class TestDirectionMetric:
    def test_values(self):
        inst = build_example3([("1", 1), ("2", 2)])
        assert inst.distance("2", "1") == Vec.of(1, 0)
        assert inst.distance("1", "1") == Vec.of(0, 0)
        assert inst.distance("1", "2") == Vec.of(0, 1)

    def test_duplicate_labels_rejected(self):
        with pytest.raises(DuplicateLabel):
            build_example3([("a", 1), ("a", 2)])

    def test_duplicate_coordinates_rejected(self):
        with pytest.raises(DuplicateLabel):
            build_example3([("a", 1), ("b", 1)])


class TestAlphaMetric:
    def test_values_alpha_one(self):
        inst = build_example4([("1", 1), ("3", 3)], 1)
        assert inst.distance("3", "1") == Vec.of(2, 2)
        assert inst.distance("1", "3") == Vec.of(1, 1)
        assert inst.distance("3", "3") == Vec.of(0, 0)

    def test_values_alpha_half(self):
        inst = build_example4([("0", 0), ("2", 2)], "1/2")
        assert inst.distance("2", "0") == Vec.of(2, 1)
        assert inst.distance("0", "2") == Vec.of("1/2", 1)

    @pytest.mark.parametrize("alpha", [0, -1, "-2/3"])
    def test_nonpositive_alpha_rejected(self, alpha):
        with pytest.raises(ValueError):
            build_example4([("0", 0), ("1", 1)], alpha)


class TestInstanceConstruction:
    def test_table_must_be_total(self):
        space = OrderedSpace.orthant(2)
        with pytest.raises(ValueError, match="not total"):
            QcmInstance(space, ["a", "b"], {("a", "a"): Vec.zero(2)})

    def test_entry_dimension_checked(self):
        space = OrderedSpace.orthant(2)
        table = {
            (r, s): Vec.zero(2) if r == s else Vec.of(1, 0)
            for r in "ab"
            for s in "ab"
        }
        table[("a", "b")] = Vec.of(1, 0, 0)
        with pytest.raises(DimensionMismatch):
            QcmInstance(space, ["a", "b"], table)

    def test_generator_provenance_revalidated(self):
        inst = build_example3([("1", 1), ("2", 2)])
        broken = {
            (r, s): v for r, s, v in inst.entries()
        }
        broken[("1", "2")] = Vec.of(1, 1)
        with pytest.raises(ValueError, match="generator"):
            QcmInstance(inst.space, inst.points, broken, inst.provenance)


def explicit_instance(entries, dim=2):
    labels = sorted({r for r, _ in entries} | {s for _, s in entries})
    space = OrderedSpace.orthant(dim)
    table = {}
    for r in labels:
        for s in labels:
            table[(r, s)] = Vec.zero(dim)
    table.update(entries)
    return QcmInstance(space, labels, table)


class TestVerifyAxioms:
    def test_direction_metric_exhaustive(self):
        inst = build_example3(rational_grid(-2, 2, "1/2"))
        report = verify_axioms(inst)
        assert report.passed
        n = len(inst.points)
        assert report["QCM1"].checks == n * n
        assert report["QCM3"].checks == n**3

    @pytest.mark.parametrize("alpha", ["1/2", 1, 3])
    def test_alpha_metric_exhaustive(self, alpha):
        inst = build_example4(rational_grid(-2, 2, "1/2"), alpha)
        assert verify_axioms(inst).passed

    def test_zero_for_distinct_points_fails_identity(self):
        inst = explicit_instance({("a", "b"): Vec.zero(2)})
        report = verify_axioms(inst)
        assert not report["QCM2"].passed
        assert report["QCM2"].counterexample["pair"] == ("a", "b")

    def test_negative_entry_fails_nonnegativity(self):
        inst = explicit_instance(
            {("a", "b"): Vec.of(-1, 0), ("b", "a"): Vec.of(1, 1)}
        )
        report = verify_axioms(inst)
        assert not report["QCM1"].passed
        assert report["QCM1"].counterexample["pair"] == ("a", "b")

    def test_triangle_counterexample_reverifies(self):
        inst = explicit_instance(
            {
                ("a", "b"): Vec.of(5, 5),
                ("b", "a"): Vec.of(1, 1),
                ("a", "c"): Vec.of(1, 1),
                ("c", "a"): Vec.of(1, 1),
                ("c", "b"): Vec.of(1, 1),
                ("b", "c"): Vec.of(1, 1),
            }
        )
        report = verify_axioms(inst)
        assert not report["QCM3"].passed
        ce = report["QCM3"].counterexample
        r, s, t = ce["triple"]
        lhs = inst.distance(r, t)
        rhs = inst.distance(r, s) + inst.distance(s, t)
        assert lhs == ce["d(r,t)"] and rhs == ce["d(r,s)+d(s,t)"]
        assert not inst.space.leq(lhs, rhs)

    def test_parallel_matches_serial(self):
        # large enough that the triple space actually gets partitioned
        inst = build_example4(rational_grid(-4, 4, "1/2"), "1/3")
        assert len(inst.points) == 17
        serial = verify_axioms(inst, jobs=1)
        parallel = verify_axioms(inst, jobs=3)
        assert serial == parallel

    def test_parallel_failure_counterexample_deterministic(self):
        base = build_example3(rational_grid(-4, 4, "1/2"))
        table = {(r, s): v for r, s, v in base.entries()}
        table[("-1/2", "3/2")] = Vec.of(4, 4)
        table[("7/2", "-3")] = Vec.of(9, 9)
        broken = QcmInstance(base.space, base.points, table)
        serial = verify_axioms(broken, jobs=1)
        parallel = verify_axioms(broken, jobs=4)
        assert not serial["QCM3"].passed
        assert serial == parallel


class TestTranspose:
    def test_involution(self):
        inst = build_example4(rational_grid(0, 2, 1), "2/3")
        assert transpose(transpose(inst)).table_equal(inst)

    def test_direction_metric_swaps_values(self):
        inst = build_example3(rational_grid(-1, 1, 1))
        flipped = transpose(inst)
        for r, s, v in inst.entries():
            assert flipped.distance(s, r) == v
        assert flipped.distance("-1", "1") == Vec.of(1, 0)

    def test_axioms_preserved(self):
        inst = build_example4(rational_grid(-1, 2, "1/2"), 2)
        assert verify_axioms(inst).passed
        assert verify_axioms(transpose(inst)).passed

    def test_provenance_becomes_explicit(self):
        inst = build_example3(rational_grid(0, 1, 1))
        assert transpose(inst).provenance.kind == "explicit-table"
