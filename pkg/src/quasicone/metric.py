"""Finite quasi-cone metric instances.

An instance is a finite labeled ground set together with a total,
cone-valued distance table. The distance need not be symmetric: d(r, s)
and d(s, r) are independent entries, which is what makes the forward and
backward problems genuinely different.

Two closed-form generators are provided (a two-valued direction metric
over Q^2 and a slack metric with a positive parameter alpha), plus an
exhaustive axiom checker that enumerates every ordered pair and triple.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .cones import OrderedSpace, RationalLike, Vec, as_rational
from .errors import DimensionMismatch, DuplicateLabel, UnknownLabel
from .reports import AxiomCheck, AxiomReport

Label = str

EXPLICIT_TABLE = "explicit-table"
DIRECTION_METRIC = "example3-direction-metric"
ALPHA_METRIC = "example4-alpha-metric"


@dataclass(frozen=True)
class Provenance:
    """How an instance's table came to be.

    Generator provenances carry their parameters so the table can be
    regenerated and compared exactly at construction time.
    """

    kind: str
    alpha: Fraction | None = None
    coordinates: tuple[tuple[Label, Fraction], ...] | None = None

    def coordinate_map(self) -> dict[Label, Fraction]:
        return dict(self.coordinates or ())


_EXPLICIT = Provenance(EXPLICIT_TABLE)


class QcmInstance:
    """A finite ground set with a total cone-valued distance table.

    Immutable after construction: the table is copied in and only read
    thereafter, so instances are safe to share across threads or pass to
    worker processes.
    """

    def __init__(
        self,
        space: OrderedSpace,
        points: Sequence[Label],
        table: Mapping[tuple[Label, Label], Vec],
        provenance: Provenance = _EXPLICIT,
    ):
        points = tuple(points)
        if not points:
            raise ValueError("ground set must be nonempty")
        if len(set(points)) != len(points):
            seen = set()
            dup = next(p for p in points if p in seen or seen.add(p))
            raise DuplicateLabel(f"duplicate point label {dup!r}")
        tbl: dict[tuple[Label, Label], Vec] = {}
        for r in points:
            for s in points:
                try:
                    value = table[(r, s)]
                except KeyError:
                    raise ValueError(f"table is not total: missing entry for ({r!r}, {s!r})") from None
                if value.dimension != space.dimension:
                    raise DimensionMismatch(
                        f"entry d({r!r}, {s!r}) has dimension {value.dimension}, "
                        f"space has {space.dimension}"
                    )
                tbl[(r, s)] = value
        self._space = space
        self._points = points
        self._label_set = frozenset(points)
        self._table = tbl
        self._provenance = provenance
        if provenance.kind != EXPLICIT_TABLE:
            self._check_generated()

    def _check_generated(self) -> None:
        coords = self._provenance.coordinate_map()
        for r in self._points:
            for s in self._points:
                if self._provenance.kind == DIRECTION_METRIC:
                    expected = direction_distance(coords[r], coords[s])
                else:
                    expected = alpha_distance(coords[r], coords[s], self._provenance.alpha)
                if self._table[(r, s)] != expected:
                    raise ValueError(
                        f"table entry d({r!r}, {s!r}) = {self._table[(r, s)]} does not "
                        f"match its generator value {expected}"
                    )

    @property
    def space(self) -> OrderedSpace:
        return self._space

    @property
    def points(self) -> tuple[Label, ...]:
        return self._points

    @property
    def provenance(self) -> Provenance:
        return self._provenance

    @property
    def size(self) -> int:
        return len(self._points)

    def has_point(self, label: Label) -> bool:
        return label in self._label_set

    def require_points(self, labels: Iterable[Label]) -> None:
        for label in labels:
            if label not in self._label_set:
                raise UnknownLabel(f"unknown point label {label!r}")

    def distance(self, r: Label, s: Label) -> Vec:
        try:
            return self._table[(r, s)]
        except KeyError:
            self.require_points((r, s))
            raise

    def entries(self) -> Iterable[tuple[Label, Label, Vec]]:
        for r in self._points:
            for s in self._points:
                yield r, s, self._table[(r, s)]

    def table_equal(self, other: "QcmInstance") -> bool:
        return self._points == other._points and self._table == other._table

    def __repr__(self) -> str:
        return (
            f"QcmInstance({len(self._points)} points, dim {self._space.dimension}, "
            f"{self._provenance.kind})"
        )


# ---------------------------------------------------------------------------
# Closed-form generators
# ---------------------------------------------------------------------------

def direction_distance(r: Fraction, s: Fraction) -> Vec:
    """Two-valued direction metric on rational coordinates.

    Zero on the diagonal, (1, 0) when the first argument is larger,
    (0, 1) when it is smaller. Only the sign of r - s matters.
    """
    if r == s:
        return Vec.of(0, 0)
    if r > s:
        return Vec.of(1, 0)
    return Vec.of(0, 1)


def alpha_distance(r: Fraction, s: Fraction, alpha: Fraction) -> Vec:
    """Slack metric: (r - s, alpha*(r - s)) when r >= s, else (alpha, 1)."""
    if r >= s:
        return Vec.of(r - s, alpha * (r - s))
    return Vec.of(alpha, 1)


def _coordinate_points(
    points: Sequence[tuple[Label, RationalLike]]
) -> tuple[tuple[Label, ...], dict[Label, Fraction]]:
    labels = tuple(label for label, _ in points)
    if len(set(labels)) != len(labels):
        seen = set()
        dup = next(l for l in labels if l in seen or seen.add(l))
        raise DuplicateLabel(f"duplicate point label {dup!r}")
    coords = {label: as_rational(c) for label, c in points}
    by_value: dict[Fraction, Label] = {}
    for label, value in coords.items():
        if value in by_value:
            raise DuplicateLabel(
                f"points {by_value[value]!r} and {label!r} share coordinate "
                f"{value}; distinct points at equal coordinates would get "
                "distance zero"
            )
        by_value[value] = label
    return labels, coords


def build_example3(points: Sequence[tuple[Label, RationalLike]]) -> QcmInstance:
    """Instance of the direction metric over Q^2 with the orthant cone."""
    labels, coords = _coordinate_points(points)
    space = OrderedSpace.orthant(2)
    table = {
        (r, s): direction_distance(coords[r], coords[s]) for r in labels for s in labels
    }
    provenance = Provenance(
        DIRECTION_METRIC, coordinates=tuple(sorted(coords.items()))
    )
    return QcmInstance(space, labels, table, provenance)


def build_example4(
    points: Sequence[tuple[Label, RationalLike]], alpha: RationalLike
) -> QcmInstance:
    """Instance of the slack metric over Q^2 with the orthant cone."""
    alpha = as_rational(alpha)
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    labels, coords = _coordinate_points(points)
    space = OrderedSpace.orthant(2)
    table = {
        (r, s): alpha_distance(coords[r], coords[s], alpha)
        for r in labels
        for s in labels
    }
    provenance = Provenance(
        ALPHA_METRIC, alpha=alpha, coordinates=tuple(sorted(coords.items()))
    )
    return QcmInstance(space, labels, table, provenance)


# ---------------------------------------------------------------------------
# Exhaustive axiom verification
# ---------------------------------------------------------------------------

def _triangle_chunk(instance: QcmInstance, start: int, stop: int):
    """Check the triangle inequality for flat triple indices [start, stop).

    Returns (checks, index_of_first_failure_or_None, counterexample_or_None).
    Flat index k encodes the triple (k // n^2, (k // n) % n, k % n).
    """
    labels = instance.points
    n = len(labels)
    space = instance.space
    first_index = None
    counterexample = None
    for k in range(start, stop):
        i, rem = divmod(k, n * n)
        j, l = divmod(rem, n)
        r, s, t = labels[i], labels[j], labels[l]
        lhs = instance.distance(r, t)
        rhs = instance.distance(r, s) + instance.distance(s, t)
        if not space.leq(lhs, rhs):
            if first_index is None:
                first_index = k
                counterexample = {
                    "triple": (r, s, t),
                    "d(r,t)": lhs,
                    "d(r,s)+d(s,t)": rhs,
                }
    return stop - start, first_index, counterexample


def verify_axioms(instance: QcmInstance, jobs: int = 1) -> AxiomReport:
    """Exhaustively check nonnegativity, identity of indiscernibles, and
    the triangle inequality over the whole ground set.

    The triangle pass enumerates all |Q|^3 ordered triples; with jobs > 1
    the triple space is partitioned across worker processes and the
    partial reports are merged deterministically (the recorded
    counterexample is always the one with the smallest flat index), so
    the result is independent of the partitioning.
    """
    labels = instance.points
    n = len(labels)
    space = instance.space
    cone = space.cone

    nonneg_counter = None
    for r in labels:
        for s in labels:
            value = instance.distance(r, s)
            if not cone.contains(value):
                nonneg_counter = {"pair": (r, s), "value": value}
                break
        if nonneg_counter:
            break

    identity_counter = None
    zero = space.zero()
    for r in labels:
        for s in labels:
            value = instance.distance(r, s)
            if r == s and value != zero:
                identity_counter = {"pair": (r, s), "value": value, "expected": zero}
                break
            if r != s and value == zero:
                identity_counter = {
                    "pair": (r, s),
                    "value": value,
                    "expected": "nonzero for distinct points",
                }
                break
        if identity_counter:
            break

    total = n * n * n
    if jobs <= 1 or total < 4096:
        _, _, triangle_counter = _triangle_chunk(instance, 0, total)
    else:
        bounds = [total * w // jobs for w in range(jobs + 1)]
        results = []
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [
                pool.submit(_triangle_chunk, instance, bounds[w], bounds[w + 1])
                for w in range(jobs)
            ]
            results = [f.result() for f in futures]
        failed = [(idx, ce) for _, idx, ce in results if idx is not None]
        triangle_counter = min(failed)[1] if failed else None

    checks = (
        AxiomCheck("QCM1", nonneg_counter is None, n * n, nonneg_counter),
        AxiomCheck("QCM2", identity_counter is None, n * n, identity_counter),
        AxiomCheck("QCM3", triangle_counter is None, total, triangle_counter),
    )
    return AxiomReport(checks)


def transpose(instance: QcmInstance) -> QcmInstance:
    """Swap the two arguments of the distance everywhere.

    The result is always an explicit table, whatever the input's
    provenance, because the closed forms do not describe the swapped
    metric.
    """
    swapped = {(s, r): value for r, s, value in instance.entries()}
    return QcmInstance(instance.space, instance.points, swapped, _EXPLICIT)
