"""Verdicts returned by the property checkers.

Every checker is relative to an explicitly enumerated universe of
structures and teams, so a positive verdict never claims more than
"no counterexample in this universe".  Counterexample witnesses carry
enough data to re-run the violating evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

HOLDS = "holds"
COUNTEREXAMPLE = "counterexample"
INAPPLICABLE = "inapplicable"


@dataclass(frozen=True)
class Witness:
    structure: object = None
    team: object = None
    other_team: object = None
    formula: object = None
    note: str = ""


@dataclass(frozen=True)
class PropertyReport:
    name: str
    verdict: str
    universe: str = ""
    details: str = ""
    witness: Witness | None = None

    def holds(self) -> bool:
        return self.verdict == HOLDS

    def __str__(self) -> str:
        parts = [f"{self.name}: {self.verdict}"]
        if self.details:
            parts.append(self.details)
        if self.universe:
            parts.append(f"[universe: {self.universe}]")
        return " ".join(parts)
