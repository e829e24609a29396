"""Validation reports: violations are data, not exceptions."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Violation:
    """One violated axiom together with a witness tuple of ids."""

    rule: str
    witness: tuple

    def as_dict(self):
        return {"rule": self.rule, "witness": list(self.witness)}


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, rule: str, *witness) -> None:
        self.violations.append(Violation(rule, tuple(witness)))

    def rules(self) -> set[str]:
        return {v.rule for v in self.violations}

    def as_dict(self):
        return {"ok": self.ok, "violations": [v.as_dict() for v in self.violations]}
