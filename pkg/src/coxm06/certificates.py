"""Effectivity certificates shared by the surface and X engines."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

EFFECTIVE = "Effective"
NOT_EFFECTIVE = "NotEffective"


@dataclass(frozen=True)
class EffCertificate:
    """Either an explicit decomposition or a violated inequality.

    terms holds (name, class) pairs, repeated once per copy, in the order the
    algorithm produced them.  witness is (inequality name, value) for a
    NotEffective verdict.
    """

    verdict: str
    terms: tuple = ()
    witness: tuple | None = None
    notes: tuple = field(default=())

    @classmethod
    def effective(cls, terms, notes=()) -> EffCertificate:
        return cls(EFFECTIVE, tuple(terms), None, tuple(notes))

    @classmethod
    def not_effective(cls, name: str, value: int, notes=()) -> EffCertificate:
        return cls(NOT_EFFECTIVE, (), (name, value), tuple(notes))

    @property
    def is_effective(self) -> bool:
        return self.verdict == EFFECTIVE

    def __bool__(self) -> bool:
        return self.is_effective

    def names(self) -> list:
        return [n for n, _ in self.terms]

    def multiset(self) -> Counter:
        return Counter(self.names())

    def total(self, zero):
        out = zero
        for _, c in self.terms:
            out = out + c
        return out

    def to_dict(self) -> dict:
        out = {"verdict": self.verdict}
        if self.is_effective:
            out["decomposition"] = dict(sorted(self.multiset().items()))
            out["terms"] = self.names()
        else:
            out["violated"] = self.witness[0]
            out["slack"] = self.witness[1]
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    def __str__(self) -> str:
        if not self.is_effective:
            return f"NotEffective: {self.witness[0]} = {self.witness[1]}"
        if not self.terms:
            return "Effective: 0"
        counts = self.multiset()
        seen = []
        for n in self.names():
            if n not in seen:
                seen.append(n)
        body = " + ".join(f"{counts[n]}*({n})" if counts[n] > 1 else f"({n})" for n in seen)
        return f"Effective: {body}"
