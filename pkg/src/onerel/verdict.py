from __future__ import annotations

import enum


class Verdict(str, enum.Enum):
    """Three-valued answer of a bounded procedure."""

    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def of(cls, flag: bool) -> "Verdict":
        return cls.YES if flag else cls.NO


def all_of(verdicts) -> Verdict:
    verdicts = list(verdicts)
    if any(v is Verdict.NO for v in verdicts):
        return Verdict.NO
    if all(v is Verdict.YES for v in verdicts):
        return Verdict.YES
    return Verdict.UNKNOWN
