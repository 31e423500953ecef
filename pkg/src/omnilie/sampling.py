"""Seeded random polynomial sections used by the sample-based checks."""
from __future__ import annotations

import random

from .bundle import DerivationDE, JetSection, SectionE, VectorField
from .poly import Patch, Poly, PolyMatrix, monomials_up_to


class Sampler:
    """Draws sparse random polynomials with small integer coefficients."""

    def __init__(self, patch: Patch, degree: int = 2, seed: int = 0, max_terms: int = 3,
                 coeff_range: int = 3):
        self.patch = patch
        self.degree = degree
        self.rng = random.Random(seed)
        self.max_terms = max_terms
        self.coeff_range = coeff_range
        self._monos = monomials_up_to(patch.dim_m, degree)

    def poly(self, allow_zero: bool = True) -> Poly:
        n = self.patch.dim_m
        while True:
            count = self.rng.randint(0 if allow_zero else 1, min(self.max_terms, len(self._monos)))
            terms = {}
            for e in self.rng.sample(self._monos, count):
                terms[e] = self.rng.choice([c for c in range(-self.coeff_range,
                                                              self.coeff_range + 1) if c])
            p = Poly(terms, n)
            if allow_zero or not p.is_zero():
                return p

    def section(self) -> SectionE:
        return SectionE(tuple(self.poly() for _ in range(self.patch.rank_e)), self.patch.dim_m)

    def vector_field(self) -> VectorField:
        n = self.patch.dim_m
        return VectorField(tuple(self.poly() for _ in range(n)), n)

    def matrix(self, rows: int, cols: int) -> PolyMatrix:
        return PolyMatrix([[self.poly() for _ in range(cols)] for _ in range(rows)],
                          rows, cols, self.patch.dim_m)

    def derivation(self) -> DerivationDE:
        k = self.patch.rank_e
        return DerivationDE(self.matrix(k, k), self.vector_field())

    def jet(self) -> JetSection:
        return JetSection(self.matrix(self.patch.rank_e, self.patch.dim_m), self.section())

    def one_form(self) -> tuple[Poly, ...]:
        return tuple(self.poly() for _ in range(self.patch.dim_m))
