"""Skew bundle maps ``pi: JE -> DE`` and the integrability of their graphs.

Three encodings are supported:

``TrivialForm(theta, omega)``
    any rank; ``pi(y, v) = (omega(v) - y theta, theta v)``.
``LineForm(lam, y)``
    rank one; ``pi(xi, t) = (-<xi, Y>, t Y + lam#(xi))`` with
    ``lam#(xi)^j = sum_i xi_i lam[i][j]``.
``FrameForm(matrix)``
    raw ``(k^2 + n) x (k n + k)`` matrix from jet-frame coordinates
    ``(y_11..y_1n, ..., y_kn, w_1..w_k)`` to derivation coordinates
    ``(Phi_11..Phi_kk, x_1..x_n)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Sequence

from .bundle import (DerivationDE, JetSection, SectionE, VectorField, anchor, bracket_de,
                     jet_frame, jet_lift, lie_derivative, pairing_e)
from .errors import InputError, StructuralError
from .omni import OmniSection
from .poly import Patch, Poly, PolyMatrix, monomials_up_to
from .report import Check, Report, zero_check
from .sampling import Sampler
from .tensor import StructureTensor


class PiMap:
    patch: Patch

    def apply(self, mu: JetSection) -> DerivationDE:
        raise NotImplementedError

    def _check_jet(self, mu: JetSection):
        if mu.rank != self.patch.rank_e or mu.nvars != self.patch.dim_m:
            raise InputError("jet does not live on the map's bundle")

    def to_frame(self) -> "FrameForm":
        cols = [deriv_coords(self.apply(mu)) for _, mu in jet_frame(self.patch)]
        rows = len(cols[0]) if cols else 0
        n = self.patch.dim_m
        return FrameForm(self.patch, PolyMatrix([[cols[j][i] for j in range(len(cols))]
                                                 for i in range(rows)], rows, len(cols), n))


@dataclass(frozen=True, eq=False)
class TrivialForm(PiMap):
    patch: Patch
    theta: PolyMatrix
    omega: StructureTensor

    def __post_init__(self):
        k, n = self.patch.rank_e, self.patch.dim_m
        if self.theta.shape != (n, k) or self.theta.nvars != n:
            raise InputError(f"theta must be {n}x{k}, got {self.theta.shape}")
        if self.omega.rank != k or self.omega.nvars != n:
            raise InputError("omega does not match the patch")
        if not self.omega.is_antisymmetric():
            raise InputError("omega must be antisymmetric in its lower indices")

    def apply(self, mu: JetSection) -> DerivationDE:
        self._check_jet(mu)
        w = mu.val.comps
        endo = self.omega.endo(w) - mu.hom @ self.theta
        return DerivationDE(endo, VectorField(self.theta.apply(w), self.patch.dim_m))

    def __eq__(self, other):
        return (isinstance(other, TrivialForm) and self.patch == other.patch
                and self.theta == other.theta and self.omega == other.omega)


@dataclass(frozen=True, eq=False)
class LineForm(PiMap):
    patch: Patch
    lam: PolyMatrix
    y: VectorField

    def __post_init__(self):
        n = self.patch.dim_m
        if self.patch.rank_e != 1:
            raise InputError("LineForm requires a line bundle")
        if self.lam.shape != (n, n) or not self.lam.is_antisymmetric():
            raise InputError("lambda must be an antisymmetric n x n matrix")
        if len(self.y) != n or self.y.nvars != n:
            raise InputError("y must be a vector field on the patch")

    def sharp(self, xi: Sequence[Poly]) -> VectorField:
        n = self.patch.dim_m
        return VectorField(tuple(_sum((xi[i] * self.lam[i, j] for i in range(n)), n)
                                 for j in range(n)), n)

    def apply(self, mu: JetSection) -> DerivationDE:
        self._check_jet(mu)
        n = self.patch.dim_m
        xi = mu.hom.row(0)
        t = mu.val[0]
        scalar = -_sum((xi[j] * self.y[j] for j in range(n)), n)
        base = self.y.scale(t) + self.sharp(xi)
        return DerivationDE(PolyMatrix([[scalar]], 1, 1, n), base)

    def __eq__(self, other):
        return (isinstance(other, LineForm) and self.patch == other.patch
                and self.lam == other.lam and self.y == other.y)


@dataclass(frozen=True, eq=False)
class FrameForm(PiMap):
    patch: Patch
    matrix: PolyMatrix

    def __post_init__(self):
        k, n = self.patch.rank_e, self.patch.dim_m
        if self.matrix.shape != (k * k + n, k * n + k):
            raise InputError(f"frame matrix must be {k * k + n}x{k * n + k}, "
                             f"got {self.matrix.shape}")

    def apply(self, mu: JetSection) -> DerivationDE:
        self._check_jet(mu)
        return derivation_from_coords(self.patch, self.matrix.apply(jet_coords(mu)))

    def to_frame(self) -> "FrameForm":
        return self

    def to_trivial(self) -> TrivialForm:
        """Read off ``(theta, omega)``; only exact when the map is skew and rank >= 2."""
        k, n = self.patch.rank_e, self.patch.dim_m
        consts = [self.apply(JetSection(PolyMatrix.zeros(k, n, n), SectionE.basis(k, a, n)))
                  for a in range(k)]
        theta = PolyMatrix([[consts[b].base[i] for b in range(k)] for i in range(n)], n, k, n)
        omega = StructureTensor.from_function(k, n, lambda c, a, b: consts[a].endo[c, b])
        if not omega.is_antisymmetric():
            raise StructuralError("frame map has a symmetric constant-jet block")
        out = TrivialForm(self.patch, theta, omega)
        if out.to_frame().matrix != self.matrix:
            raise StructuralError("frame map is not of the (theta, omega) form")
        return out

    def to_line(self) -> LineForm:
        n = self.patch.dim_m
        if self.patch.rank_e != 1:
            raise InputError("to_line requires a line bundle")
        one = self.apply(JetSection(PolyMatrix.zeros(1, n, n), SectionE.basis(1, 0, n)))
        rows = [self.apply(JetSection.from_hom(PolyMatrix.unit(1, n, 0, i, n))).base
                for i in range(n)]
        lam = PolyMatrix([[rows[i][j] for j in range(n)] for i in range(n)], n, n, n)
        if not lam.is_antisymmetric():
            raise StructuralError("frame map has a symmetric Hom block")
        out = LineForm(self.patch, lam, one.base)
        if out.to_frame().matrix != self.matrix:
            raise StructuralError("frame map is not of the (lambda, Y) form")
        return out

    def __eq__(self, other):
        return (isinstance(other, FrameForm) and self.patch == other.patch
                and self.matrix == other.matrix)


def _sum(polys, nvars: int) -> Poly:
    acc = Poly.zero(nvars)
    for p in polys:
        acc = acc + p
    return acc


def jet_coords(mu: JetSection) -> tuple[Poly, ...]:
    return tuple(mu.hom[a, j] for a in range(mu.hom.rows) for j in range(mu.hom.cols)) \
        + mu.val.comps


def deriv_coords(d: DerivationDE) -> tuple[Poly, ...]:
    k = d.rank
    return tuple(d.endo[a, b] for a in range(k) for b in range(k)) + d.base.comps


def derivation_from_coords(patch: Patch, coords: Sequence[Poly]) -> DerivationDE:
    k, n = patch.rank_e, patch.dim_m
    endo = PolyMatrix([[coords[a * k + b] for b in range(k)] for a in range(k)], k, k, n)
    return DerivationDE(endo, VectorField(tuple(coords[k * k:]), n))


def pi_apply(pi: PiMap, mu: JetSection) -> DerivationDE:
    return pi.apply(mu)


def graph_section(pi: PiMap, mu: JetSection) -> OmniSection:
    return OmniSection(pi.apply(mu), mu)


def check_skew(pi: PiMap) -> Check:
    """``<pi(mu), nu> + <pi(nu), mu> = 0`` on all pairs of jet-frame elements."""
    frame = jet_frame(pi.patch)
    images = [pi.apply(mu) for _, mu in frame]

    def cases():
        for i, j in combinations(range(len(frame)), 2):
            yield ((frame[i][0], frame[j][0]),
                   pairing_e(frame[j][1], images[i]) + pairing_e(frame[i][1], images[j]))
        for i in range(len(frame)):
            yield (frame[i][0], frame[i][0]), pairing_e(frame[i][1], images[i])

    return zero_check("skew", "pi-skew", cases(), pi.patch.var_names)


def _pi_bracket(mu, nu, pmu: DerivationDE, pnu: DerivationDE) -> JetSection:
    return lie_derivative(pmu, nu) - lie_derivative(pnu, mu) - jet_lift(pairing_e(nu, pmu))


def pi_bracket(pi: PiMap, mu: JetSection, nu: JetSection) -> JetSection:
    """``L_{pi mu} nu - L_{pi nu} mu - d<pi(mu), nu>_E``."""
    return _pi_bracket(mu, nu, pi.apply(mu), pi.apply(nu))


def integrability_defect(pi: PiMap, mu: JetSection, nu: JetSection) -> DerivationDE:
    pmu, pnu = pi.apply(mu), pi.apply(nu)
    return pi.apply(_pi_bracket(mu, nu, pmu, pnu)) - bracket_de(pmu, pnu)


def normalize(pi: PiMap) -> PiMap:
    """Bring a skew frame map into its trivial (rank >= 2) or line (rank 1) encoding."""
    if isinstance(pi, FrameForm):
        return pi.to_line() if pi.patch.rank_e == 1 else pi.to_trivial()
    return pi


def fadf_checks(pi: TrivialForm) -> list[Check]:
    """Anchor condition on basis pairs and cyclic Jacobi condition on basis triples."""
    k, n = pi.patch.rank_e, pi.patch.dim_m
    names = pi.patch.var_names
    basis = [SectionE.basis(k, a, n).comps for a in range(k)]
    th = [VectorField(pi.theta.col(a), n) for a in range(k)]

    def theta_of(s: SectionE) -> VectorField:
        return VectorField(pi.theta.apply(s.comps), n)

    def fadf1():
        for a, b in product(range(k), repeat=2):
            lhs = theta_of(pi.omega.pair(basis[a], basis[b]))
            yield f"pair ({a + 1},{b + 1})", lhs - th[a].bracket(th[b])

    def fadf2():
        for a, b, c in product(range(k), repeat=3):
            acc = SectionE.zero(k, n)
            for p, q, r in ((a, b, c), (b, c, a), (c, a, b)):
                inner = pi.omega.pair(basis[q], basis[r])
                acc = acc + pi.omega.pair(basis[p], inner.comps)
                acc = acc + SectionE(tuple(th[p].apply(s) for s in inner.comps), n)
            yield f"triple ({a + 1},{b + 1},{c + 1})", acc

    return [zero_check("fadf1", "fadf1", fadf1(), names),
            zero_check("fadf2", "fadf2", fadf2(), names)]


def generating_family(patch: Patch, degree_cap: int) -> list[tuple[str, JetSection]]:
    """Jets ``f d(x^alpha e_a)`` with monomials f, x^alpha of total degree <= degree_cap."""
    k, n = patch.rank_e, patch.dim_m
    monos = monomials_up_to(n, degree_cap)
    out = []

    for a in range(k):
        for al in monos:
            xa = Poly.monomial(al)
            base = jet_lift(SectionE(tuple(xa if b == a else Poly.zero(n) for b in range(k)), n))
            for f in monos:
                if sum(f) + sum(al) > degree_cap:
                    continue
                fp = Poly.monomial(f)
                label = f"{fp.to_str(patch.var_names)}*d({xa.to_str(patch.var_names)}*e{a + 1})"
                out.append((label, base.scale(fp)))
    return out


def sampled_integrability(pi: PiMap, degree_cap: int = 2, samples: int = 16,
                          seed: int = 0) -> Check:
    family = generating_family(pi.patch, degree_cap)
    sampler = Sampler(pi.patch, degree=max(degree_cap, 0), seed=seed)
    randoms = [(f"random jet {i + 1}", sampler.jet()) for i in range(2 * samples)]
    images = [pi.apply(mu) for _, mu in family]

    def cases():
        for i, j in combinations(range(len(family)), 2):
            mu, nu = family[i][1], family[j][1]
            defect = pi.apply(_pi_bracket(mu, nu, images[i], images[j])) \
                - bracket_de(images[i], images[j])
            yield (family[i][0], family[j][0]), defect
        for i in range(samples):
            (l1, mu), (l2, nu) = randoms[2 * i], randoms[2 * i + 1]
            yield (l1, l2), integrability_defect(pi, mu, nu)

    return zero_check("sampled-integrability", "integrability", cases(), pi.patch.var_names)


def check_integrability(pi: PiMap, mode: str = "finite", degree_cap: int = 2,
                        samples: int = 16, seed: int = 0) -> Report:
    """Decide whether the graph of ``pi`` is a Dirac structure.

    A non-skew map is reported as a structural failure with no further checks.
    """
    if mode not in ("finite", "sampled"):
        raise InputError(f"unknown mode {mode!r}")
    rep = Report(f"Dirac integrability ({mode})")
    skew = rep.add(check_skew(pi))
    if not skew.passed:
        skew.note = "graph is not isotropic; Dirac condition undefined"
        rep.data["structural"] = True
        return rep
    if mode == "sampled":
        rep.add(sampled_integrability(pi, degree_cap, samples, seed))
        return rep
    try:
        form = normalize(pi)
    except StructuralError as exc:
        rep.add(Check("encoding", "pi-encoding", False, note=str(exc)))
        return rep
    if isinstance(form, TrivialForm):
        for c in fadf_checks(form):
            rep.add(c)
    else:
        from .jacobi import JacobiData, check_jacobi_structure
        sub = check_jacobi_structure(JacobiData(form.patch, form.lam, form.y),
                                     degree_cap=max(degree_cap, 1))
        rep.extend(sub)
    return rep


def _alpha_pi_d(pi: PiMap, u: SectionE) -> VectorField:
    return anchor(pi.apply(jet_lift(u)))


def four_conditions(pi: PiMap, samples: int = 16, seed: int = 0, degree: int = 2) -> Report:
    """The four equivalent conditions for the quotient E = JE / Hom(TM, E) to be an algebroid."""
    patch = pi.patch
    k, n = patch.rank_e, patch.dim_m
    names = patch.var_names
    sampler = Sampler(patch, degree=degree, seed=seed)
    hom_frame = [(lab, mu) for lab, mu in jet_frame(patch) if mu.val.is_zero()]
    basis = [SectionE.basis(k, a, n) for a in range(k)]
    rand = [(sampler.poly(), sampler.section(), sampler.section(), sampler.jet())
            for _ in range(samples)]
    rep = Report("four equivalent conditions")

    def cond1():
        for a, j in product(range(k), range(n)):
            f = Poly.var(j, n)
            yield (f"f={names[j]}", f"u=e{a + 1}"), \
                _alpha_pi_d(pi, basis[a].scale(f)) - _alpha_pi_d(pi, basis[a]).scale(f)
        for i, (f, u, _, _) in enumerate(rand):
            yield f"random (f, u) {i + 1}", \
                _alpha_pi_d(pi, u.scale(f)) - _alpha_pi_d(pi, u).scale(f)

    def cond2():
        for lab, y in hom_frame:
            yield lab, anchor(pi.apply(y))

    def cond3():
        jets = [(lab, mu) for lab, mu in jet_frame(patch)]
        jets += [(f"random jet {i + 1}", r[3]) for i, r in enumerate(rand)]
        for (ly, y), (lm, mu) in product(hom_frame, jets):
            yield (ly, lm), pi_bracket(pi, y, mu).val

    frame_anchor = [_alpha_pi_d(pi, e) for e in basis]

    def rho_e(u: SectionE) -> VectorField:
        acc = VectorField.zero(n, n)
        for a in range(k):
            acc = acc + frame_anchor[a].scale(u[a])
        return acc

    def qbracket(u: SectionE, v: SectionE) -> SectionE:
        return pi.apply(jet_lift(u))(v)

    def cond4():
        for i, (f, u, v, _) in enumerate(rand):
            lhs = qbracket(u, v.scale(f))
            rhs = qbracket(u, v).scale(f) + v.scale(rho_e(u).apply(f))
            yield f"anchor rule, random {i + 1}", lhs - rhs
            yield f"p[du,dv], random {i + 1}", \
                pi_bracket(pi, jet_lift(u), jet_lift(v)).val - qbracket(u, v)
        for a, j in product(range(k), range(n)):
            f = Poly.var(j, n)
            for b in range(k):
                lhs = qbracket(basis[b], basis[a].scale(f))
                rhs = qbracket(basis[b], basis[a]).scale(f) + basis[a].scale(
                    rho_e(basis[b]).apply(f))
                yield f"anchor rule u=e{b + 1}, v={names[j]}*e{a + 1}", lhs - rhs
                u = basis[b].scale(f)
                lhs = qbracket(u, basis[a].scale(f))
                rhs = qbracket(u, basis[a]).scale(f) + basis[a].scale(rho_e(u).apply(f))
                yield f"anchor rule u={names[j]}*e{b + 1}, v={names[j]}*e{a + 1}", lhs - rhs

    checks = [zero_check("cond1-bundle-map", "four-1", cond1(), names),
              zero_check("cond2-hom-anchor-zero", "hom-anchor-zero", cond2(), names),
              zero_check("cond3-ideal", "four-3", cond3(), names),
              zero_check("cond4-quotient", "quotient-bracket", cond4(), names)]
    for c in checks:
        rep.add(c)
    values = {c.passed for c in checks}
    rep.add(Check("agreement", "four-equivalent", len(values) == 1,
                  note=None if len(values) == 1 else
                  ", ".join(f"{c.name}={c.passed}" for c in checks)))
    rep.data["conditions"] = {c.name: c.passed for c in checks}
    return rep


LOCAL_ONLY = "quotient is a local Lie algebra only, not an algebroid"


def dirac_to_algebroid(pi: PiMap, samples: int = 16, seed: int = 0):
    """Reduce a Dirac graph to the quotient algebroid data ``(rho, c)``."""
    from .algebroid import AlgebroidData
    integ = check_integrability(pi, "finite")
    if not integ.passed:
        bad = integ.failures()[0]
        raise StructuralError(f"graph of pi is not a Dirac structure ({bad.name} fails)",
                              bad.witness)
    four = four_conditions(pi, samples=samples, seed=seed)
    if not four.passed:
        bad = next((c for c in four.failures() if c.name != "agreement"), four.failures()[0])
        raise StructuralError(LOCAL_ONLY, bad.witness)
    patch = pi.patch
    k, n = patch.rank_e, patch.dim_m
    basis = [SectionE.basis(k, a, n) for a in range(k)]
    images = [pi.apply(jet_lift(e)) for e in basis]
    c = StructureTensor.from_function(k, n, lambda cc, a, b: images[a](basis[b])[cc])
    rho = PolyMatrix([[images[a].base[i] for a in range(k)] for i in range(n)], n, k, n)
    return AlgebroidData(patch, rho, c)


def check_graph_isotropy(pi: PiMap) -> Check:
    from .omni import sym_pairing
    frame = jet_frame(pi.patch)

    def cases():
        for (l1, mu), (l2, nu) in product(frame, repeat=2):
            yield (l1, l2), sym_pairing(graph_section(pi, mu), graph_section(pi, nu))

    return zero_check("graph-isotropic", "maximal-isotropic", cases(), pi.patch.var_names)

