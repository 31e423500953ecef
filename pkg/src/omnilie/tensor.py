"""Structure tensors ``T^c_ab`` antisymmetric in ``a, b``."""
from __future__ import annotations

from typing import Mapping, Sequence

from .bundle import SectionE
from .errors import InputError
from .poly import Poly, PolyMatrix


class StructureTensor:
    """Entries ``t[c][a][b]``; acts on sections by ``T(u, v)^c = sum T^c_ab u_a v_b``."""

    __slots__ = ("rank", "nvars", "_t")

    def __init__(self, entries: Sequence[Sequence[Sequence[Poly]]], rank: int, nvars: int):
        t = tuple(tuple(tuple(row) for row in mat) for mat in entries)
        if len(t) != rank or any(len(m) != rank or any(len(r) != rank for r in m) for m in t):
            raise InputError(f"structure tensor must be {rank}x{rank}x{rank}")
        if any(p.nvars != nvars for m in t for r in m for p in r):
            raise InputError("structure tensor entries live on different patches")
        self.rank, self.nvars, self._t = rank, nvars, t

    @classmethod
    def zero(cls, rank: int, nvars: int) -> "StructureTensor":
        z = Poly.zero(nvars)
        return cls([[[z] * rank for _ in range(rank)] for _ in range(rank)], rank, nvars)

    @classmethod
    def from_pairs(cls, rank: int, nvars: int,
                   pairs: Mapping[tuple[int, int], Sequence[Poly]]) -> "StructureTensor":
        """Build from ``{(a, b): components}`` with ``a < b``; antisymmetry is filled in."""
        z = Poly.zero(nvars)
        t = [[[z] * rank for _ in range(rank)] for _ in range(rank)]
        for (a, b), comps in pairs.items():
            if not 0 <= a < b < rank:
                raise InputError(f"structure pair ({a + 1},{b + 1}) must satisfy a < b <= rank")
            if len(comps) != rank:
                raise InputError(f"structure pair ({a + 1},{b + 1}) needs {rank} components")
            for c, p in enumerate(comps):
                t[c][a][b] = p
                t[c][b][a] = -p
        return cls(t, rank, nvars)

    @classmethod
    def from_function(cls, rank: int, nvars: int, fn) -> "StructureTensor":
        return cls([[[fn(c, a, b) for b in range(rank)] for a in range(rank)]
                    for c in range(rank)], rank, nvars)

    def __getitem__(self, cab) -> Poly:
        c, a, b = cab
        return self._t[c][a][b]

    def is_antisymmetric(self) -> bool:
        r = self.rank
        return all((self._t[c][a][b] + self._t[c][b][a]).is_zero()
                   for c in range(r) for a in range(r) for b in range(a, r))

    def pairs(self) -> dict[tuple[int, int], tuple[Poly, ...]]:
        r = self.rank
        return {(a, b): tuple(self._t[c][a][b] for c in range(r))
                for a in range(r) for b in range(a + 1, r)}

    def pair(self, u: Sequence[Poly], v: Sequence[Poly]) -> SectionE:
        r = self.rank
        out = []
        for c in range(r):
            acc = Poly.zero(self.nvars)
            for a in range(r):
                if u[a].is_zero():
                    continue
                for b in range(r):
                    t = self._t[c][a][b]
                    if not t.is_zero() and not v[b].is_zero():
                        acc = acc + t * u[a] * v[b]
            out.append(acc)
        return SectionE(tuple(out), self.nvars)

    def endo(self, u: Sequence[Poly]) -> PolyMatrix:
        """The endomorphism ``T(u, .)``: entry (c, b) is ``sum_a T^c_ab u_a``."""
        r = self.rank
        rows = []
        for c in range(r):
            row = []
            for b in range(r):
                acc = Poly.zero(self.nvars)
                for a in range(r):
                    if not u[a].is_zero():
                        acc = acc + self._t[c][a][b] * u[a]
                row.append(acc)
            rows.append(row)
        return PolyMatrix(rows, r, r, self.nvars)

    def __eq__(self, other):
        if not isinstance(other, StructureTensor):
            return NotImplemented
        return self.rank == other.rank and self.nvars == other.nvars and self._t == other._t

    def __hash__(self):
        return hash(self._t)

    def __repr__(self):
        return f"StructureTensor({ {k: [str(p) for p in v] for k, v in self.pairs().items()} })"
