"""Witness certificates for best-approximation membership.

A witness is a finite table f over the ground set. It certifies that a
candidate h is a best approximation to q when three exact conditions
hold:

  anchor   f(h) equals the distance from q to h,
  shift    f(x) - f(h) lies in the cone for every candidate x,
  gap      d(q, x) - f(x) lies in the cone for every candidate x.

Membership in the best set is equivalent to the existence of such an f,
and the canonical table f(x) = d(q, x) always realizes the forward
implication, so verification against the canonical witness is a second,
independent route to the best set (the backward direction mirrors with
d(x, q)).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .approximation import (
    BACKWARD,
    DIRECTIONS,
    FORWARD,
    Query,
    best_approximation_set,
    directed_distance,
)
from .cones import Vec
from .errors import UnknownLabel
from .metric import Label, QcmInstance

ANCHOR_EQUALITY = "anchor-equality"
SHIFT_NOT_IN_CONE = "f-shift-not-in-cone"
GAP_NOT_IN_CONE = "d-gap-not-in-cone"


@dataclass(frozen=True)
class WitnessTable:
    """A candidate certificate: target point, direction, and the table f."""

    q: Label
    direction: str
    f: Mapping[Label, Vec]

    def __post_init__(self):
        if self.direction not in DIRECTIONS:
            raise ValueError(f"direction must be one of {DIRECTIONS}")
        object.__setattr__(self, "f", dict(self.f))

    def value(self, label: Label) -> Vec:
        try:
            return self.f[label]
        except KeyError:
            raise ValueError(f"witness table has no value for point {label!r}") from None


@dataclass(frozen=True)
class WitnessVerdict:
    """Outcome of checking the three conditions.

    When the verdict fails, ``failed_condition`` names the first condition
    violated (in the fixed order anchor, shift, gap) and ``counterexample``
    carries the offending point together with the value that left the
    cone (for the anchor condition: the mismatched table value).
    """

    holds: bool
    failed_condition: str | None = None
    counterexample: tuple[Label, Vec] | None = None

    def __post_init__(self):
        if not self.holds and (self.failed_condition is None or self.counterexample is None):
            raise ValueError("failing verdicts must carry a condition and counterexample")


def canonical_witness(instance: QcmInstance, q: Label, direction: str = FORWARD) -> WitnessTable:
    """The table f(x) = d(q, x) (forward) or f(x) = d(x, q) (backward).

    This is the certificate that always exists for genuine best
    approximations; in particular f(q) is the zero vector.
    """
    instance.require_points([q])
    table = {
        x: directed_distance(instance, q, x, direction) for x in instance.points
    }
    return WitnessTable(q, direction, table)


def _validate(instance: QcmInstance, witness: WitnessTable, candidates: Iterable[Label]) -> list[Label]:
    instance.require_points([witness.q])
    candidates = sorted(set(candidates))
    instance.require_points(candidates)
    for x in instance.points:
        if x not in witness.f:
            raise ValueError(f"witness table does not cover ground-set point {x!r}")
    return candidates


def verify_witness_for_element(
    instance: QcmInstance,
    witness: WitnessTable,
    candidates: Iterable[Label],
    h: Label,
) -> WitnessVerdict:
    """Check the three conditions with h as the anchored member.

    Exact verdict: no tolerances. Candidates are scanned in label order,
    so the reported counterexample is deterministic.
    """
    candidates = _validate(instance, witness, candidates)
    if h not in candidates:
        raise ValueError(f"anchored element {h!r} is not in the candidate set")
    cone = instance.space.cone
    anchor = witness.value(h)
    if anchor != directed_distance(instance, witness.q, h, witness.direction):
        return WitnessVerdict(False, ANCHOR_EQUALITY, (h, anchor))
    for x in candidates:
        shift = witness.value(x) - anchor
        if not cone.contains(shift):
            return WitnessVerdict(False, SHIFT_NOT_IN_CONE, (x, shift))
    for x in candidates:
        gap = directed_distance(instance, witness.q, x, witness.direction) - witness.value(x)
        if not cone.contains(gap):
            return WitnessVerdict(False, GAP_NOT_IN_CONE, (x, gap))
    return WitnessVerdict(True)


def verify_witness_for_set(
    instance: QcmInstance,
    witness: WitnessTable,
    candidates: Iterable[Label],
    members: Iterable[Label],
) -> WitnessVerdict:
    """Check one shared table against every member of a set.

    Holds iff the three conditions hold for each member under the single
    f. A valid shared witness forces the members' distances to agree, so
    equal anchors are checked as part of the verdict. The empty member
    set holds vacuously.
    """
    candidates = _validate(instance, witness, candidates)
    members = sorted(set(members))
    missing = [m for m in members if m not in candidates]
    if missing:
        raise ValueError(
            f"members {missing} are not contained in the candidate set"
        )
    for m in members:
        verdict = verify_witness_for_element(instance, witness, candidates, m)
        if not verdict.holds:
            return verdict
    if members:
        shared = directed_distance(instance, witness.q, members[0], witness.direction)
        for m in members[1:]:
            anchor = directed_distance(instance, witness.q, m, witness.direction)
            if anchor != shared:
                return WitnessVerdict(False, ANCHOR_EQUALITY, (m, anchor))
    return WitnessVerdict(True)


def default_witness_pool(
    instance: QcmInstance, q: Label, direction: str = FORWARD
) -> list[WitnessTable]:
    """Canonical table plus componentwise shrinkages t*d for t in {1/2, 3/4}.

    The shrunk tables keep every value inside the cone whenever the
    distances are; they mostly exercise the verifier, since the anchor
    condition pins f to the true distance at the members.
    """
    canonical = canonical_witness(instance, q, direction)
    pool = [canonical]
    for t in (Fraction(1, 2), Fraction(3, 4)):
        pool.append(
            WitnessTable(q, direction, {x: t * v for x, v in canonical.f.items()})
        )
    return pool


def search_counterexample_witness(
    instance: QcmInstance,
    q: Label,
    candidates: Iterable[Label],
    pool: Iterable[WitnessTable] | None = None,
    direction: str = FORWARD,
) -> tuple[WitnessTable, frozenset[Label]] | None:
    """Find a witness certifying at least two members at once, if any.

    Any set certified by any table is contained in the best set, so the
    search space collapses: compute the best set, and if it has fewer
    than two members no table in any pool can succeed. Otherwise filter
    each pool table down to the members it certifies and return the
    first table certifying two or more.
    """
    candidates = frozenset(candidates)
    best = best_approximation_set(instance, Query(q, candidates, direction)).best
    if len(best) < 2:
        return None
    if pool is None:
        pool = default_witness_pool(instance, q, direction)
    for witness in pool:
        certified = frozenset(
            m
            for m in sorted(best)
            if verify_witness_for_element(instance, witness, candidates, m).holds
        )
        if len(certified) >= 2 and verify_witness_for_set(
            instance, witness, candidates, certified
        ).holds:
            return witness, certified
    return None
