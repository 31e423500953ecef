"""The omni-Lie algebroid DE + JE: symmetric pairing, Dorfman bracket, axiom suite."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bundle import (DerivationDE, JetSection, SectionE, apply_derivation, bracket_de,
                     derivation_frame, jet_frame, jet_lift, lie_derivative, pairing_e)
from .errors import InputError
from .poly import Patch, PolyMatrix
from .report import Report, zero_check
from .sampling import Sampler

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class OmniSection:
    de: DerivationDE
    jet: JetSection

    def __post_init__(self):
        if self.de.rank != self.jet.rank or self.de.nvars != self.jet.nvars:
            raise InputError("omni section parts live on different bundles")

    @classmethod
    def zero(cls, rank: int, nvars: int) -> "OmniSection":
        return cls(DerivationDE.zero(rank, nvars), JetSection.zero(rank, nvars))

    def __add__(self, other: "OmniSection") -> "OmniSection":
        return OmniSection(self.de + other.de, self.jet + other.jet)

    def __sub__(self, other: "OmniSection") -> "OmniSection":
        return OmniSection(self.de - other.de, self.jet - other.jet)

    def scale(self, f) -> "OmniSection":
        return OmniSection(self.de.scale(f), self.jet.scale(f))

    def parts(self) -> tuple[DerivationDE, JetSection]:
        return self.de, self.jet


def sym_pairing(x: OmniSection, y: OmniSection) -> SectionE:
    return (pairing_e(y.jet, x.de) + pairing_e(x.jet, y.de)).scale(HALF)


def dorfman(x: OmniSection, y: OmniSection) -> OmniSection:
    """Non-skew Dorfman bracket."""
    jet = (lie_derivative(x.de, y.jet) - lie_derivative(y.de, x.jet)
           + jet_lift(pairing_e(x.jet, y.de)))
    return OmniSection(bracket_de(x.de, y.de), jet)


def omni_anchor(x: OmniSection) -> DerivationDE:
    return x.de


def weinstein_bracket(x: OmniSection, y: OmniSection) -> OmniSection:
    """Weinstein's skew bracket on gl(V) + V; point base only."""
    if x.de.nvars != 0:
        raise InputError("Weinstein's bracket is defined over a point base only")
    val = (x.de.endo.apply(y.jet.val.comps), y.de.endo.apply(x.jet.val.comps))
    v = SectionE(tuple((a - b) * HALF for a, b in zip(*val)), 0)
    return OmniSection(bracket_de(x.de, y.de), JetSection(PolyMatrix.zeros(len(v), 0, 0), v))


def skew_dorfman(x: OmniSection, y: OmniSection) -> OmniSection:
    d1, d2 = dorfman(x, y), dorfman(y, x)
    return OmniSection((d1.de - d2.de).scale(HALF), (d1.jet - d2.jet).scale(HALF))


def random_omni_samples(patch: Patch, count: int, degree: int = 2, seed: int = 0):
    """``count`` tuples ``(X, Y, Z, f)`` of random polynomial sections."""
    s = Sampler(patch, degree=degree, seed=seed)
    out = []
    for _ in range(count):
        xs = [OmniSection(s.derivation(), s.jet()) for _ in range(3)]
        out.append((*xs, s.poly()))
    return out


def check_omni_axioms(patch: Patch, samples) -> Report:
    """Evaluate the five omni-Lie algebroid properties on every sample."""
    if not samples:
        raise InputError("check_omni_axioms needs at least one sample")
    names = patch.var_names
    k, n = patch.rank_e, patch.dim_m
    rep = Report("omni-Lie algebroid axioms")

    def label(i):
        return f"sample {i + 1}"

    def leibniz():
        for i, (x, y, z, _) in enumerate(samples):
            lhs = dorfman(x, dorfman(y, z))
            rhs = dorfman(dorfman(x, y), z) + dorfman(y, dorfman(x, z))
            yield label(i), (lhs - rhs).parts()

    def anchor_hom():
        for i, (x, y, _, _) in enumerate(samples):
            yield label(i), dorfman(x, y).de - bracket_de(x.de, y.de)

    def module_rule():
        for i, (x, y, _, f) in enumerate(samples):
            lhs = dorfman(x, y.scale(f))
            rhs = dorfman(x, y).scale(f) + y.scale(x.de.base.apply(f))
            yield label(i), (lhs - rhs).parts()

    def square():
        for i, (x, _, _, _) in enumerate(samples):
            sq = dorfman(x, x)
            target = OmniSection(DerivationDE.zero(k, n), jet_lift(sym_pairing(x, x)))
            yield label(i), (sq - target).parts()

    def invariance():
        for i, (x, y, z, _) in enumerate(samples):
            lhs = apply_derivation(x.de, sym_pairing(y, z))
            rhs = sym_pairing(dorfman(x, y), z) + sym_pairing(y, dorfman(x, z))
            yield label(i), lhs - rhs

    rep.add(zero_check("omni-prop-1-leibniz", "omni-prop-1", leibniz(), names))
    rep.add(zero_check("omni-prop-2-anchor", "omni-prop-2", anchor_hom(), names))
    rep.add(zero_check("omni-prop-3-module", "omni-prop-3", module_rule(), names))
    rep.add(zero_check("omni-prop-4-square", "omni-prop-4", square(), names))
    rep.add(zero_check("omni-prop-5-invariance", "omni-prop-5", invariance(), names))
    rep.data["samples"] = len(samples)
    return rep


def omni_frame(patch: Patch) -> list[tuple[str, OmniSection]]:
    k, n = patch.rank_e, patch.dim_m
    out = [(lab, OmniSection(d, JetSection.zero(k, n))) for lab, d in derivation_frame(patch)]
    out += [(lab, OmniSection(DerivationDE.zero(k, n), j)) for lab, j in jet_frame(patch)]
    return out
