"""Structured pass/fail reporting for identity checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


def fmt_rational(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}" if f.denominator != 1 else str(f.numerator)


def fmt_vector(v) -> str:
    return "(" + ", ".join(fmt_rational(x) for x in v) + ")"


@dataclass
class Check:
    name: str
    passed: bool
    witness: "dict | None" = None

    def to_dict(self):
        d = {"name": self.name, "status": "pass" if self.passed else "fail"}
        if self.witness is not None:
            d["witness"] = self.witness
        return d


@dataclass
class VerificationReport:
    suite: str
    metadata: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)

    def add(self, name: str, passed: bool, witness: "dict | None" = None):
        self.checks.append(Check(name, bool(passed), None if passed else witness))
        return passed

    def extend(self, other: "VerificationReport"):
        self.checks.extend(other.checks)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def to_dict(self):
        return {
            "suite": self.suite,
            "parameters": {k: self.metadata[k] for k in sorted(self.metadata)},
            "identities": [c.to_dict() for c in self.checks],
        }
