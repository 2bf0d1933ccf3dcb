"""Report records shared by the DY, Hochschild and theorem-check pipelines."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field


@dataclass
class CohomologyEntry:
    """One degree of a cohomology computation.

    ``representative_coords`` are coordinates in the canonical cochain basis;
    ``representatives`` hold the same cocycles as cochain objects.
    """

    kind: str
    subject: str
    degree: int
    dim_cochains: int
    rank_d: int
    dim_cocycles: int
    dim_coboundaries: int
    dim_H: int
    representative_coords: list
    representatives: list = dc_field(default_factory=list)
    convention: str = "standard"

    def to_json(self):
        return {"kind": self.kind, "subject": self.subject, "degree": self.degree,
                "dim_cochains": self.dim_cochains, "rank_d": self.rank_d,
                "dim_cocycles": self.dim_cocycles, "dim_coboundaries": self.dim_coboundaries,
                "dim_H": self.dim_H, "convention": self.convention,
                "representatives": [r.to_json() for r in self.representatives]}


@dataclass
class TheoremReport:
    """Outcome of an executable theorem check: per-instance entries and a verdict."""

    kind: str
    subject: str
    field: str
    entries: list = dc_field(default_factory=list)
    notes: list = dc_field(default_factory=list)

    @property
    def passed(self):
        return all(e.get("pass", True) for e in self.entries)

    @property
    def verdict(self):
        return "PASS" if self.passed else "FAIL"

    def to_json(self):
        return {"kind": self.kind, "subject": self.subject, "field": self.field,
                "verdict": self.verdict, "entries": self.entries, "notes": list(self.notes)}
