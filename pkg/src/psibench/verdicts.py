"""Verdict objects shared by the verifier suites."""

from __future__ import annotations

from dataclasses import dataclass

PASS = "PASS"
FAIL = "FAIL"
PASS_UP_TO_TRUNCATION = "PASS-UP-TO-TRUNCATION"


@dataclass
class Verdict:
    """Outcome of one axiom/property check.

    ``checked`` counts identities verified exactly; ``skipped`` counts
    identities whose target weight fell outside the truncation window and
    could not be decided.  A FAIL always carries a reproducible witness.
    """

    name: str
    status: str
    checked: int = 0
    skipped: int = 0
    witness: dict | None = None
    notes: tuple = ()

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    @staticmethod
    def decide(name: str, checked: int, skipped: int, witness: dict | None = None,
               notes: tuple = ()) -> "Verdict":
        if witness is not None:
            status = FAIL
        elif skipped:
            status = PASS_UP_TO_TRUNCATION
        else:
            status = PASS
        return Verdict(name, status, checked, skipped, witness, notes)

    def to_dict(self) -> dict:
        return {
            "axiom": self.name,
            "status": self.status,
            "checked": self.checked,
            "skipped_beyond_truncation": self.skipped,
            "witness": self.witness,
            "notes": list(self.notes),
        }

    def describe(self) -> str:
        msg = f"{self.name}: {self.status} (checked {self.checked}, skipped {self.skipped})"
        if self.witness is not None:
            msg += f" witness={self.witness}"
        return msg
