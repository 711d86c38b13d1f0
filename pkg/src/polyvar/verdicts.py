"""Three-valued verdicts and rule reports shared by the calculus modules."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

HOLDS = "holds"
FAILS = "fails"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class TriVerdict:
    """Holds / Fails / Unknown with an exact certificate where decisive."""

    value: str
    certificate: Any = None

    @staticmethod
    def holds(certificate: Any = None) -> "TriVerdict":
        return TriVerdict(HOLDS, certificate)

    @staticmethod
    def fails(certificate: Any = None) -> "TriVerdict":
        return TriVerdict(FAILS, certificate)

    @staticmethod
    def unknown(certificate: Any = None) -> "TriVerdict":
        return TriVerdict(UNKNOWN, certificate)

    def is_holds(self) -> bool:
        return self.value == HOLDS

    def is_fails(self) -> bool:
        return self.value == FAILS


@dataclass(frozen=True)
class RuleReport:
    """Both sides of a calculus rule plus the checked hypotheses.

    `witness` is present exactly when inclusion_holds is False and then lies
    in lhs \\ rhs; when some hypothesis is not Holds the report is diagnostic
    and makes no claim about the rule.
    """

    rule_id: str
    lhs: Any
    rhs: Any
    qualifications: tuple[tuple[str, TriVerdict], ...] = field(default=())
    inclusion_holds: bool = True
    equality_holds: bool | None = None
    witness: Any = None

    def hypotheses_hold(self) -> bool:
        return all(v.is_holds() for _, v in self.qualifications)
