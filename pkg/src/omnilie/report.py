"""Check results, reports and witness formatting."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .bundle import DerivationDE, JetSection, _Vec
from .poly import Poly, PolyMatrix


@dataclass
class Check:
    name: str
    tag: str
    passed: bool
    witness: dict | None = None
    note: str | None = None

    def to_dict(self) -> dict:
        d = {"name": self.name, "tag": self.tag, "pass": self.passed,
             "witness": self.witness}
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.tag, c.passed, c.witness, c.note))

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(c.name == name for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {"title": self.title,
                "checks": [c.to_dict() for c in sorted(self.checks, key=lambda c: c.name)],
                "data": self.data,
                "verdict": "pass" if self.passed else "fail"}


def labeled_polys(obj) -> Iterator[tuple[str, Poly]]:
    """Flatten any kernel value into ``(label, poly)`` pairs, labels 1-based."""
    if isinstance(obj, Poly):
        yield "", obj
    elif isinstance(obj, _Vec):
        for i, p in enumerate(obj.comps):
            yield f"[{i + 1}]", p
    elif isinstance(obj, PolyMatrix):
        for i in range(obj.rows):
            for j in range(obj.cols):
                yield f"[{i + 1},{j + 1}]", obj[i, j]
    elif isinstance(obj, DerivationDE):
        for lab, p in labeled_polys(obj.endo):
            yield "endo" + lab, p
        for lab, p in labeled_polys(obj.base):
            yield "field" + lab, p
    elif isinstance(obj, JetSection):
        for lab, p in labeled_polys(obj.hom):
            yield "hom" + lab, p
        for lab, p in labeled_polys(obj.val):
            yield "val" + lab, p
    elif isinstance(obj, (list, tuple)):
        for i, item in enumerate(obj):
            for lab, p in labeled_polys(item):
                yield f"<{i + 1}>{lab}", p
    else:
        raise TypeError(f"cannot flatten {type(obj).__name__}")


def is_zero(obj) -> bool:
    return all(p.is_zero() for _, p in labeled_polys(obj))


def first_defect(obj, names: Sequence[str]) -> str | None:
    """Canonical string of the first nonzero component, or None if ``obj`` vanishes."""
    for lab, p in labeled_polys(obj):
        if not p.is_zero():
            return f"{lab}: {p.to_str(names)}" if lab else p.to_str(names)
    return None


def witness(sections, defect: str | None) -> dict:
    if isinstance(sections, str):
        sections = [sections]
    return {"sections": list(sections), "defect": defect}


def zero_check(name: str, tag: str, cases: Iterable[tuple[object, object]],
               names: Sequence[str]) -> Check:
    """Pass iff every defect vanishes; the first nonzero one becomes the witness.

    ``cases`` yields ``(description, defect)``; it is consumed lazily so a
    failing check stops at its first witness.
    """
    count = 0
    for desc, defect in cases:
        count += 1
        d = first_defect(defect, names)
        if d is not None:
            return Check(name, tag, False, witness(desc, d))
    return Check(name, tag, True, note=f"{count} cases")


def fmt_poly(p: Poly, names: Sequence[str]) -> str:
    return p.to_str(names)


def fmt_matrix(m: PolyMatrix, names: Sequence[str]) -> list[list[str]]:
    return [[m[i, j].to_str(names) for j in range(m.cols)] for i in range(m.rows)]
