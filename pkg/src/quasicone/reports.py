"""Axiom-check reports.

Both the cone axioms and the metric axioms produce the same shape of
result: a list of named checks, each either passing or carrying a
reproducible counterexample. Failures never raise; callers inspect the
report.
"""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class AxiomCheck:
    """Outcome of one axiom over one instance.

    ``counterexample`` is a small dict naming the offending points and
    values; it is present exactly when ``passed`` is false.
    """

    axiom: str
    passed: bool
    checks: int
    counterexample: dict | None = None
    note: str = ""


@dataclass(frozen=True)
class AxiomReport:
    checks: tuple[AxiomCheck, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> tuple[AxiomCheck, ...]:
        return tuple(c for c in self.checks if not c.passed)

    def __getitem__(self, axiom: str) -> AxiomCheck:
        for c in self.checks:
            if c.axiom == axiom:
                return c
        raise KeyError(axiom)

    def __iter__(self):
        return iter(self.checks)
