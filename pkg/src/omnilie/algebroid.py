"""Lie algebroid data on a trivialized bundle and its Dirac graph.

The anchor is stored as an ``n x k`` matrix, ``rho(e_a) = sum_i rho[i, a] d/dx_i``,
and the bracket of frame sections as ``[e_a, e_b] = sum_c c[c, a, b] e_c``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Sequence

from .bundle import (DerivationDE, JetSection, SectionE, VectorField, apply_derivation,
                     bracket_de, dual_operator, jet_frame, jet_lift, one_form_lie_derivative,
                     tensor_jet)
from .dirac import TrivialForm, check_integrability, pi_bracket
from .errors import InputError, StructuralError
from .poly import Patch, Poly, PolyMatrix, det
from .report import Check, Report, zero_check
from .sampling import Sampler
from .tensor import StructureTensor


@dataclass(frozen=True, eq=False)
class AlgebroidData:
    patch: Patch
    rho: PolyMatrix
    c: StructureTensor

    def __post_init__(self):
        k, n = self.patch.rank_e, self.patch.dim_m
        if self.rho.shape != (n, k) or self.rho.nvars != n:
            raise InputError(f"anchor must be {n}x{k}, got {self.rho.shape}")
        if self.c.rank != k or self.c.nvars != n:
            raise InputError("structure tensor does not match the patch")

    def anchor_of(self, u: Sequence[Poly]) -> VectorField:
        return VectorField(self.rho.apply(tuple(u)), self.patch.dim_m)

    def basis(self) -> list[SectionE]:
        k, n = self.patch.rank_e, self.patch.dim_m
        return [SectionE.basis(k, a, n) for a in range(k)]

    def __eq__(self, other):
        return (isinstance(other, AlgebroidData) and self.patch == other.patch
                and self.rho == other.rho and self.c == other.c)

    def __hash__(self):
        return hash((self.patch, self.rho, self.c))


@dataclass(frozen=True)
class NijenhuisOp:
    n_matrix: PolyMatrix


def bracket_sections(a: AlgebroidData, u: SectionE, v: SectionE) -> SectionE:
    """``[u, v]^c = c^c_ab u_a v_b + rho(u)(v_c) - rho(v)(u_c)``."""
    k = a.patch.rank_e
    if len(u) != k or len(v) != k:
        raise InputError("sections do not match the algebroid rank")
    ru, rv = a.anchor_of(u.comps), a.anchor_of(v.comps)
    alg = a.c.pair(u.comps, v.comps)
    return SectionE(tuple(alg[c] + ru.apply(v[c]) - rv.apply(u[c]) for c in range(k)),
                    a.patch.dim_m)


def jacobiator(bracket: Callable[[SectionE, SectionE], SectionE],
               u: SectionE, v: SectionE, w: SectionE) -> SectionE:
    return bracket(u, bracket(v, w)) + bracket(v, bracket(w, u)) + bracket(w, bracket(u, v))


def structure_from_bracket(patch: Patch, bracket) -> StructureTensor:
    k, n = patch.rank_e, patch.dim_m
    basis = [SectionE.basis(k, a, n) for a in range(k)]
    vals = {(a, b): bracket(basis[a], basis[b]) for a in range(k) for b in range(k)}
    return StructureTensor.from_function(k, n, lambda c, a, b: vals[a, b][c])


def check_axioms(a: AlgebroidData, samples: int = 3, seed: int = 0, degree: int = 1) -> Report:
    """Anchor homomorphism and Jacobi identity on the frame, plus random spot checks."""
    patch = a.patch
    k = patch.rank_e
    names = patch.var_names
    rep = Report("Lie algebroid axioms")
    rep.add(Check("structure-antisymmetric", "antisymmetry", a.c.is_antisymmetric()))
    basis = a.basis()
    anchors = [a.anchor_of(e.comps) for e in basis]

    def br(u, v):
        return bracket_sections(a, u, v)

    def anchor_hom():
        for i, j in product(range(k), repeat=2):
            yield f"pair ({i + 1},{j + 1})", \
                a.anchor_of(br(basis[i], basis[j]).comps) - anchors[i].bracket(anchors[j])

    def jacobi_frame():
        for i, j, l in product(range(k), repeat=3):
            yield f"triple ({i + 1},{j + 1},{l + 1})", \
                jacobiator(br, basis[i], basis[j], basis[l])

    sampler = Sampler(patch, degree=degree, seed=seed)
    rand = [(sampler.section(), sampler.section(), sampler.section()) for _ in range(samples)]

    def jacobi_random():
        for i, (u, v, w) in enumerate(rand):
            yield f"random triple {i + 1}", jacobiator(br, u, v, w)

    rep.add(zero_check("anchor-homomorphism", "fadf1", anchor_hom(), names))
    rep.add(zero_check("jacobi-frame", "fadf2", jacobi_frame(), names))
    rep.add(zero_check("jacobi-random", "jacobi", jacobi_random(), names))
    return rep


def algebroid_to_pi(a: AlgebroidData, strict: bool = True) -> TrivialForm:
    """The Dirac map with ``pi([u]) = [u, .]``: ``theta = rho`` and ``omega = c``."""
    if strict:
        rep = check_axioms(a)
        if not rep.passed:
            bad = rep.failures()[0]
            raise StructuralError(f"not a Lie algebroid ({bad.name} fails)", bad.witness)
    return TrivialForm(a.patch, a.rho, a.c)


def check_pi_bracket_props(a: AlgebroidData, pi: TrivialForm, samples: int = 4,
                           seed: int = 0, degree: int = 1) -> Report:
    """The three bracket formulas for jets ``[u]`` and ``omega (x) u``."""
    patch = a.patch
    names = patch.var_names
    s = Sampler(patch, degree=degree, seed=seed)
    data = [(s.section(), s.section(), s.one_form(), s.one_form()) for _ in range(samples)]
    rep = Report("pi-bracket properties")

    def br(u, v):
        return bracket_sections(a, u, v)

    def item1():
        for i, (u1, u2, _, _) in enumerate(data):
            yield f"sample {i + 1}", \
                pi_bracket(pi, jet_lift(u1), jet_lift(u2)) - jet_lift(br(u1, u2))

    def item2():
        for i, (u1, u2, w, _) in enumerate(data):
            lhs = pi_bracket(pi, jet_lift(u1), tensor_jet(w, u2))
            rhs = tensor_jet(one_form_lie_derivative(a.anchor_of(u1.comps), w), u2) \
                + tensor_jet(w, br(u1, u2))
            yield f"sample {i + 1}", lhs - rhs

    def item3():
        for i, (u1, u2, w1, w2) in enumerate(data):
            lhs = pi_bracket(pi, tensor_jet(w1, u1), tensor_jet(w2, u2))
            p21 = _pair(w2, a.anchor_of(u1.comps))
            p12 = _pair(w1, a.anchor_of(u2.comps))
            rhs = tensor_jet(w1, u2).scale(p21) - tensor_jet(w2, u1).scale(p12)
            yield f"sample {i + 1}", lhs - rhs

    rep.add(zero_check("item1-jet-lifts", "jet-bracket-1", item1(), names))
    rep.add(zero_check("item2-mixed", "jet-bracket-2", item2(), names))
    rep.add(zero_check("item3-hom", "jet-bracket-3", item3(), names))
    return rep


def _pair(omega: Sequence[Poly], x: VectorField) -> Poly:
    acc = Poly.zero(x.nvars)
    for w, xi in zip(omega, x.comps):
        acc = acc + w * xi
    return acc


# -- the lift of the anchor ----------------------------------------------

def rho_hat(a: AlgebroidData, mu: JetSection) -> DerivationDE:
    """Derivation of TM: ``[rho(u), .]`` on ``[u]``, ``-rho o y`` on Hom(TM, E)."""
    k, n = a.patch.rank_e, a.patch.dim_m
    w = mu.val.comps
    ry = a.rho @ mu.hom
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = -ry[i, j]
            for b in range(k):
                acc = acc - a.rho[i, b].diff(j) * w[b]
            row.append(acc)
        rows.append(row)
    return DerivationDE(PolyMatrix(rows, n, n, n), a.anchor_of(w))


def tangent_patch(patch: Patch) -> Patch:
    return Patch(patch.dim_m, max(patch.dim_m, 1), patch.var_names)


def rho_hat_matrix(a: AlgebroidData) -> PolyMatrix:
    """Frame matrix of ``rho_hat``: jet-frame coordinates to DE(TM) coordinates."""
    from .dirac import deriv_coords
    frame = jet_frame(a.patch)
    cols = [deriv_coords(rho_hat(a, mu)) for _, mu in frame]
    n = a.patch.dim_m
    rows = n * n + n
    return PolyMatrix([[cols[j][i] for j in range(len(cols))] for i in range(rows)],
                      rows, len(cols), n)


def check_diagram(a: AlgebroidData, samples: int = 4, seed: int = 0, degree: int = 1) -> Report:
    """Commutativity of the three-row jet diagram and the morphism property of its arrows."""
    patch = a.patch
    k, n = patch.rank_e, patch.dim_m
    names = patch.var_names
    pi = algebroid_to_pi(a, strict=False)
    frame = jet_frame(patch)
    hom_frame = [(lab, mu) for lab, mu in frame if mu.val.is_zero()]
    rep = Report("jet diagram")
    s = Sampler(patch, degree=degree, seed=seed)
    jets = [(lab, mu) for lab, mu in frame]
    jets += [(f"random jet {i + 1}", s.jet()) for i in range(samples)]
    jets += [(f"jet lift {i + 1}", jet_lift(s.section())) for i in range(samples)]

    def left_pi():
        for idx, (lab, y) in enumerate(hom_frame):
            aa, j = divmod(idx, n)
            # -(rho^* (x) 1)(dx_j (x) e_a): v -> -<dx_j, rho v> e_a
            target = PolyMatrix([[(-a.rho[j, b]) if r == aa else Poly.zero(n)
                                  for b in range(k)] for r in range(k)], k, k, n)
            yield lab, pi.apply(y) - DerivationDE.from_endo(target)

    def left_rho_hat():
        for idx, (lab, y) in enumerate(hom_frame):
            aa, j = divmod(idx, n)
            # -(1 (x) rho)(dx_j (x) e_a): Z -> -dx_j(Z) rho(e_a)
            target = PolyMatrix([[(-a.rho[i, aa]) if l == j else Poly.zero(n)
                                  for l in range(n)] for i in range(n)], n, n, n)
            yield lab, rho_hat(a, y) - DerivationDE(target, VectorField.zero(n, n))

    def right():
        for lab, mu in jets:
            rp = a.anchor_of(mu.val.comps)
            yield (lab, "pi"), pi.apply(mu).base - rp
            yield (lab, "rho_hat"), rho_hat(a, mu).base - rp

    pairs = list(zip(jets[::2], jets[1::2]))

    def morph_pi():
        for (l1, mu), (l2, nu) in pairs:
            yield (l1, l2), pi.apply(pi_bracket(pi, mu, nu)) - bracket_de(pi.apply(mu),
                                                                          pi.apply(nu))

    def morph_rho_hat():
        for (l1, mu), (l2, nu) in pairs:
            yield (l1, l2), rho_hat(a, pi_bracket(pi, mu, nu)) - bracket_de(rho_hat(a, mu),
                                                                            rho_hat(a, nu))

    def lift_rule():
        for i in range(samples):
            u, z = s.section(), s.vector_field()
            ru = a.anchor_of(u.comps)
            moved = apply_derivation(rho_hat(a, jet_lift(u)), SectionE(z.comps, n))
            yield f"sample {i + 1}", VectorField(moved.comps, n) - ru.bracket(z)

    rep.add(zero_check("left-pi", "jet-diagram-left", left_pi(), names))
    rep.add(zero_check("left-rho-hat", "jet-diagram-left", left_rho_hat(), names))
    rep.add(zero_check("right-anchor", "jet-diagram-right", right(), names))
    rep.add(zero_check("morphism-pi", "jet-diagram-morphism", morph_pi(), names))
    rep.add(zero_check("morphism-rho-hat", "jet-diagram-morphism", morph_rho_hat(), names))
    rep.add(zero_check("rho-hat-on-lifts", "rho-hat", lift_rule(), names))
    return rep


def check_rep_equivalence(a: AlgebroidData, samples: int = 4, seed: int = 0,
                          degree: int = 1) -> Report:
    """Adjoint action of JE on Hom(TM, E) equals the tensor action of ``(rho_hat, pi)``."""
    patch = a.patch
    n = patch.dim_m
    names = patch.var_names
    pi = algebroid_to_pi(a, strict=False)
    s = Sampler(patch, degree=degree, seed=seed)
    frame = jet_frame(patch)
    cases_in = [(f"random {i + 1}", s.jet(), s.one_form(), s.section()) for i in range(samples)]
    cases_in += [(f"lift {i + 1}", jet_lift(s.section()), s.one_form(), s.section())
                 for i in range(samples)]
    cases_in += [(lab, mu, s.one_form(), s.section()) for lab, mu in frame]
    rep = Report("representation equivalence")

    def cases():
        for lab, mu, w, u in cases_in:
            adj = pi_bracket(pi, mu, tensor_jet(w, u))
            dual = apply_derivation(dual_operator(rho_hat(a, mu)), SectionE(tuple(w), n))
            tens = tensor_jet(dual.comps, u) + tensor_jet(w, pi.apply(mu)(u))
            yield lab, adj - tens

    rep.add(zero_check("adjoint-equals-tensor", "representations", cases(), names))
    return rep


# -- builders ------------------------------------------------------------

def abelian(patch: Patch) -> AlgebroidData:
    k, n = patch.rank_e, patch.dim_m
    return AlgebroidData(patch, PolyMatrix.zeros(n, k, n), StructureTensor.zero(k, n))


def tangent_algebroid(patch: Patch) -> AlgebroidData:
    if patch.rank_e != patch.dim_m:
        raise InputError("the tangent algebroid needs rank_e == dim_m")
    n = patch.dim_m
    return AlgebroidData(patch, PolyMatrix.identity(n, n), StructureTensor.zero(n, n))


def poisson_cotangent(patch: Patch, bivector: PolyMatrix) -> AlgebroidData:
    """Cotangent algebroid of a Poisson bivector in the frame ``dx_1..dx_n``.

    ``rho(dx_i) = sum_j P[i, j] d/dx_j`` and ``[dx_i, dx_j] = d P[i, j]``.
    """
    from .jacobi import Multivector, schouten
    n = patch.dim_m
    if patch.rank_e != n:
        raise InputError("the cotangent algebroid needs rank_e == dim_m")
    if bivector.shape != (n, n) or not bivector.is_antisymmetric():
        raise InputError("Poisson bivector must be an antisymmetric n x n matrix")
    lam = Multivector.bivector(bivector)
    pp = schouten(lam, lam)
    bad = pp.first_nonzero()
    if bad is not None:
        idx, p = bad
        raise StructuralError("bivector is not Poisson: [P,P] != 0",
                              {"sections": [f"[P,P]{tuple(i + 1 for i in idx)}"],
                               "defect": p.to_str(patch.var_names)})
    c = StructureTensor.from_function(n, n, lambda kk, i, j: bivector[i, j].diff(kk))
    return AlgebroidData(patch, bivector.T, c)


# -- Nijenhuis deformations ---------------------------------------------

def _nmul(N: PolyMatrix, u: SectionE) -> SectionE:
    return SectionE(N.apply(u.comps), u.nvars)


def deformed_bracket(a: AlgebroidData, N: PolyMatrix, u: SectionE, v: SectionE) -> SectionE:
    """``[Nu, v] + [u, Nv] - N[u, v]``."""
    return (bracket_sections(a, _nmul(N, u), v) + bracket_sections(a, u, _nmul(N, v))
            - _nmul(N, bracket_sections(a, u, v)))


def torsion(a: AlgebroidData, N: PolyMatrix, u: SectionE, v: SectionE) -> SectionE:
    return _nmul(N, deformed_bracket(a, N, u, v)) - bracket_sections(a, _nmul(N, u), _nmul(N, v))


def n_hat(N: PolyMatrix, mu: JetSection) -> JetSection:
    """Lift of N to jets: ``(N y + (dN) w, N w)``."""
    n = mu.nvars
    k = mu.rank
    ny = N @ mu.hom
    cols = [N.diff(j).apply(mu.val.comps) for j in range(n)]
    hom = PolyMatrix([[ny[r, j] + cols[j][r] for j in range(n)] for r in range(k)], k, n, n)
    return JetSection(hom, _nmul(N, mu.val))


def twisted_pi(a: AlgebroidData, N: PolyMatrix):
    """Frame form of ``pi o N_hat - ad_N o pi`` with ``ad_N(d) = [N, d]``."""
    from .dirac import FrameForm, deriv_coords
    pi = algebroid_to_pi(a, strict=False)
    dn = DerivationDE.from_endo(N)
    frame = jet_frame(a.patch)
    cols = [deriv_coords(pi.apply(n_hat(N, mu)) - bracket_de(dn, pi.apply(mu)))
            for _, mu in frame]
    k, n = a.patch.rank_e, a.patch.dim_m
    rows = k * k + n
    return FrameForm(a.patch, PolyMatrix([[cols[j][i] for j in range(len(cols))]
                                          for i in range(rows)], rows, len(cols), n))


def deformed_algebroid(a: AlgebroidData, N: PolyMatrix) -> AlgebroidData:
    c = structure_from_bracket(a.patch, lambda u, v: deformed_bracket(a, N, u, v))
    return AlgebroidData(a.patch, a.rho @ N, c)


def nijenhuis_suite(a: AlgebroidData, nop: NijenhuisOp, samples: int = 3, seed: int = 0,
                    degree: int = 1) -> Report:
    patch = a.patch
    k, n = patch.rank_e, patch.dim_m
    names = patch.var_names
    N = nop.n_matrix
    if N.shape != (k, k) or N.nvars != n:
        raise InputError(f"Nijenhuis operator must be {k}x{k} on the patch")
    rep = Report("Nijenhuis deformation")
    s = Sampler(patch, degree=degree, seed=seed)
    rand = [(s.section(), s.section(), s.section()) for _ in range(samples)]
    basis = a.basis()
    triples = [(f"triple ({i + 1},{j + 1},{l + 1})", basis[i], basis[j], basis[l])
               for i, j, l in product(range(k), repeat=3)]
    triples += [(f"random triple {i + 1}", *t) for i, t in enumerate(rand)]

    tw = twisted_pi(a, N)

    def acts_as_deformed():
        for lab, u, v, _ in triples:
            yield lab, tw.apply(jet_lift(u))(v) - deformed_bracket(a, N, u, v)

    rep.add(zero_check("twisted-acts-as-deformed-bracket", "twisted-map", acts_as_deformed(), names))

    dirac = check_integrability(tw, "finite")
    b1 = Check("1-twisted-graph-dirac", "nijenhuis-1", dirac.passed,
               next((c.witness for c in dirac.failures()), None))
    b2rep = check_axioms(deformed_algebroid(a, N), seed=seed)
    b2 = Check("2-deformed-algebroid", "nijenhuis-2", b2rep.passed,
               next((c.witness for c in b2rep.failures()), None))

    def tors(u, v):
        return torsion(a, N, u, v)

    def br(u, v):
        return bracket_sections(a, u, v)

    def cyclic():
        for lab, u, v, w in triples:
            acc = SectionE.zero(k, n)
            for p, q, r in ((u, v, w), (v, w, u), (w, u, v)):
                acc = acc + br(tors(p, q), r) + tors(br(p, q), r)
            yield lab, acc

    b3 = zero_check("3-torsion-cyclic", "nijenhuis-3", cyclic(), names)
    for c in (b1, b2, b3):
        rep.add(c)
    agree = len({b1.passed, b2.passed, b3.passed}) == 1
    rep.add(Check("agreement", "nijenhuis-equivalent", agree))

    def torsion_cases():
        for lab, u, v, _ in triples:
            yield lab, tors(u, v)

    tz = zero_check("torsion-zero", "nijenhuis-torsion", torsion_cases(), names)
    rep.data.update({"dirac": b1.passed, "algebroid": b2.passed, "cyclic": b3.passed,
                     "torsion_zero": tz.passed})
    return rep


def frame_determinants(m: PolyMatrix, points) -> list:
    return [det(m.evaluate(p)) for p in points]
