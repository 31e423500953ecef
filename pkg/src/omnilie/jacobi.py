"""Jacobi pairs ``(Lambda, X)`` on a trivial line bundle.

Multivectors are stored by their components on strictly increasing index
tuples.  The Schouten bracket is normalized so that for a bivector
``[L, L](df, dg, dh)`` is minus twice the Jacobiator of ``{f, g} = L(df, dg)``;
with this sign ``[L, L] = 2 X ^ L`` and ``[L, X] = 0`` are exactly the Jacobi
identity of ``L(df, dg) + f X(g) - g X(f)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Mapping

from .bundle import SectionE, VectorField, jet_lift
from .dirac import LineForm, PiMap, check_integrability, normalize, pi_bracket
from .errors import InputError, StructuralError
from .poly import Patch, Poly, PolyMatrix, monomials_up_to
from .report import Check, Report, zero_check
from .sampling import Sampler


def _perm_sign(idx: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    """Sign of the sorting permutation and the sorted tuple (sign 0 on repeats)."""
    arr = list(idx)
    sign = 1
    for i in range(len(arr)):
        for j in range(len(arr) - 1 - i):
            if arr[j] > arr[j + 1]:
                arr[j], arr[j + 1] = arr[j + 1], arr[j]
                sign = -sign
    if len(set(arr)) != len(arr):
        return 0, tuple(arr)
    return sign, tuple(arr)


class Multivector:
    """A ``p``-vector field on an ``n``-dimensional patch."""

    __slots__ = ("degree", "nvars", "_c")

    def __init__(self, degree: int, nvars: int, comps: Mapping[tuple[int, ...], Poly]):
        if not 0 <= degree <= 3:
            raise InputError("multivector degree must be between 0 and 3")
        c = {}
        for idx, p in comps.items():
            if len(idx) != degree or any(not 0 <= i < nvars for i in idx):
                raise InputError(f"bad multivector index {idx}")
            if list(idx) != sorted(set(idx)):
                raise InputError("multivector components are keyed by increasing indices")
            if not p.is_zero():
                c[tuple(idx)] = p
        self.degree, self.nvars, self._c = degree, nvars, c

    @classmethod
    def function(cls, f: Poly) -> "Multivector":
        return cls(0, f.nvars, {(): f})

    @classmethod
    def vector(cls, x: VectorField) -> "Multivector":
        return cls(1, x.nvars, {(i,): p for i, p in enumerate(x.comps)})

    @classmethod
    def bivector(cls, lam: PolyMatrix) -> "Multivector":
        if lam.rows != lam.cols or not lam.is_antisymmetric():
            raise InputError("bivector must be an antisymmetric square matrix")
        n = lam.rows
        return cls(2, lam.nvars, {(i, j): lam[i, j] for i in range(n) for j in range(i + 1, n)})

    @classmethod
    def from_function(cls, degree: int, nvars: int, fn) -> "Multivector":
        """Antisymmetrize nothing: ``fn`` is sampled on increasing index tuples."""
        dim = nvars if degree else 0
        return cls(degree, nvars, {idx: fn(*idx) for idx in combinations(range(dim), degree)})

    def __getitem__(self, idx) -> Poly:
        if isinstance(idx, int):
            idx = (idx,)
        sign, key = _perm_sign(tuple(idx))
        if sign == 0:
            return Poly.zero(self.nvars)
        p = self._c.get(key)
        if p is None:
            return Poly.zero(self.nvars)
        return p if sign > 0 else -p

    def items(self):
        return sorted(self._c.items())

    def is_zero(self) -> bool:
        return not self._c

    def first_nonzero(self):
        items = self.items()
        return items[0] if items else None

    def __add__(self, other: "Multivector") -> "Multivector":
        self._same(other)
        keys = set(self._c) | set(other._c)
        return Multivector(self.degree, self.nvars, {k: self[k] + other[k] for k in keys})

    def __sub__(self, other: "Multivector") -> "Multivector":
        return self + other.scale(-1)

    def scale(self, f) -> "Multivector":
        return Multivector(self.degree, self.nvars, {k: p * f for k, p in self._c.items()})

    def _same(self, other):
        if self.degree != other.degree or self.nvars != other.nvars:
            raise InputError("multivectors of different type")

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        return (self.degree, self.nvars, self._c) == (other.degree, other.nvars, other._c)

    def __hash__(self):
        return hash((self.degree, self.nvars, tuple(self.items())))

    def to_dict(self, names) -> dict:
        return {",".join(str(i + 1) for i in k): p.to_str(names) for k, p in self.items()}


def wedge_vector_bivector(x: Multivector, lam: Multivector) -> Multivector:
    """``(X ^ L)^{ijk} = X^i L^{jk} + X^j L^{ki} + X^k L^{ij}``."""
    if x.degree != 1 or lam.degree != 2:
        raise InputError("wedge expects a vector field and a bivector")
    return Multivector.from_function(
        3, x.nvars, lambda i, j, k: x[i] * lam[j, k] + x[j] * lam[k, i] + x[k] * lam[i, j])


def schouten(a: Multivector, b: Multivector) -> Multivector:
    """Schouten-Nijenhuis bracket for degree pairs (1,1), (1,2), (2,1) and (2,2)."""
    n = a.nvars
    if a.nvars != b.nvars:
        raise InputError("multivectors live on different patches")
    pair = (a.degree, b.degree)
    if pair == (1, 1):
        return Multivector.from_function(1, n, lambda i: sum(
            (a[l] * b[i].diff(l) - b[l] * a[i].diff(l) for l in range(n)), Poly.zero(n)))
    if pair == (1, 2):
        def lie(i, j):
            acc = Poly.zero(n)
            for k in range(n):
                acc = acc + a[k] * b[i, j].diff(k) - b[k, j] * a[i].diff(k) \
                    - b[i, k] * a[j].diff(k)
            return acc
        return Multivector.from_function(2, n, lie)
    if pair == (2, 1):
        return schouten(b, a).scale(-1)
    if pair == (2, 2):
        def term(p, q, i, j, k):
            return sum((p[i, l] * q[j, k].diff(l) for l in range(n)), Poly.zero(n))

        def comp(i, j, k):
            acc = Poly.zero(n)
            for r, s, t in ((i, j, k), (j, k, i), (k, i, j)):
                acc = acc - term(a, b, r, s, t) - term(b, a, r, s, t)
            return acc
        return Multivector.from_function(3, n, comp)
    raise InputError(f"unsupported Schouten degree pair {pair}")


@dataclass(frozen=True, eq=False)
class JacobiData:
    patch: Patch
    lam: PolyMatrix
    x_field: VectorField

    def __post_init__(self):
        n = self.patch.dim_m
        if self.lam.shape != (n, n) or self.lam.nvars != n:
            raise InputError(f"lambda must be {n}x{n}")
        if not self.lam.is_antisymmetric():
            raise InputError("lambda must be antisymmetric")
        if len(self.x_field) != n or self.x_field.nvars != n:
            raise InputError("x must be a vector field on the patch")

    def __eq__(self, other):
        return (isinstance(other, JacobiData) and self.patch == other.patch
                and self.lam == other.lam and self.x_field == other.x_field)

    def __hash__(self):
        return hash((self.patch, self.lam, self.x_field))


def lambda_pair(lam: PolyMatrix, f: Poly, g: Poly) -> Poly:
    n = lam.rows
    acc = Poly.zero(f.nvars)
    for i, j in product(range(n), repeat=2):
        if not lam[i, j].is_zero():
            acc = acc + lam[i, j] * f.diff(i) * g.diff(j)
    return acc


def jacobi_bracket(j: JacobiData, f: Poly, g: Poly) -> Poly:
    """``L(df, dg) + f X(g) - g X(f)``."""
    x = j.x_field
    return lambda_pair(j.lam, f, g) + f * x.apply(g) - g * x.apply(f)


def bracket_jacobiator(bracket, f: Poly, g: Poly, h: Poly) -> Poly:
    return bracket(f, bracket(g, h)) + bracket(g, bracket(h, f)) + bracket(h, bracket(f, g))


def monomial_triples(nvars: int, degree_cap: int):
    monos = [Poly.monomial(e) for e in monomials_up_to(nvars, degree_cap)]
    return combinations(monos, 3)


def check_bracket_jacobi(bracket, patch: Patch, degree_cap: int, name: str = "bracket-jacobi",
                         tag: str = "local-lie") -> Check:
    """Jacobi identity of ``bracket`` on all triples of distinct monomials up to ``degree_cap``."""
    names = patch.var_names

    def cases():
        for f, g, h in monomial_triples(patch.dim_m, degree_cap):
            yield f"({f.to_str(names)}, {g.to_str(names)}, {h.to_str(names)})", \
                bracket_jacobiator(bracket, f, g, h)

    return zero_check(name, tag, cases(), names)


def _tensor_check(name: str, tag: str, mv: Multivector, names) -> Check:
    bad = mv.first_nonzero()
    if bad is None:
        return Check(name, tag, True)
    idx, p = bad
    return Check(name, tag, False, {"sections": [f"component {tuple(i + 1 for i in idx)}"],
                                    "defect": p.to_str(names)})


def check_jacobi_structure(j: JacobiData, degree_cap: int = 2) -> Report:
    """``[L, L] = 2 X ^ L`` and ``[L, X] = 0``, cross-checked by the bracket's Jacobi identity."""
    names = j.patch.var_names
    lam = Multivector.bivector(j.lam)
    x = Multivector.vector(j.x_field)
    rep = Report("Jacobi structure")
    rep.add(_tensor_check("lambda-lambda", "jacobi-LL",
                          schouten(lam, lam) - wedge_vector_bivector(x, lam).scale(2), names))
    rep.add(_tensor_check("lambda-x", "jacobi-LX", schouten(lam, x), names))
    rep.add(check_bracket_jacobi(lambda f, g: jacobi_bracket(j, f, g), j.patch, degree_cap))
    return rep


def jacobi_to_pi(j: JacobiData) -> LineForm:
    return LineForm(j.patch, j.lam, j.x_field)


def local_bracket(pi: PiMap, u: Poly, v: Poly) -> Poly:
    """``p [du, dv]_pi`` for functions viewed as sections of the trivial line bundle."""
    n = pi.patch.dim_m
    return pi_bracket(pi, jet_lift(SectionE((u,), n)), jet_lift(SectionE((v,), n))).val[0]


def line_dirac_to_local_lie(pi: PiMap, degree_cap: int = 2) -> JacobiData:
    """Recover ``(Lambda, X)`` from an integrable skew map on a line bundle."""
    if pi.patch.rank_e != 1:
        raise InputError("line-bundle correspondence needs rank 1")
    rep = check_integrability(pi, "finite", degree_cap=degree_cap)
    if not rep.passed:
        bad = rep.failures()[0]
        raise StructuralError(f"graph of pi is not a Dirac structure ({bad.name} fails)",
                              bad.witness)
    form = normalize(pi)
    jac = check_bracket_jacobi(lambda f, g: local_bracket(pi, f, g), pi.patch, degree_cap,
                               name="recovered-bracket-jacobi")
    if not jac.passed:
        raise StructuralError("recovered bracket violates the Jacobi identity", jac.witness)
    return JacobiData(form.patch, form.lam, form.y)


def anchor_like(j: JacobiData, u: Poly) -> VectorField:
    """``alpha(pi(du)) = Lambda#(du) + u X``."""
    n = j.patch.dim_m
    return jacobi_to_pi(j).apply(jet_lift(SectionE((u,), n))).base


def check_anchor_like(j: JacobiData, samples: int = 8, seed: int = 0, degree: int = 2) -> Report:
    """The anchor rule with the anchor-like map, and its failure to be C-infinity linear."""
    patch = j.patch
    n = patch.dim_m
    names = patch.var_names
    pi = jacobi_to_pi(j)
    s = Sampler(patch, degree=degree, seed=seed)
    rand = [(s.poly(), s.poly(), s.poly()) for _ in range(samples)]
    rep = Report("anchor-like map")

    def br(f, g):
        return jacobi_bracket(j, f, g)

    def rule():
        for i, (u, f, v) in enumerate(rand):
            yield f"sample {i + 1}", br(u, f * v) - f * br(u, v) - anchor_like(j, u).apply(f) * v

    def formula():
        for i, (u, _, _) in enumerate(rand):
            du = [u.diff(l) for l in range(n)]
            expect = pi.sharp(du) + j.x_field.scale(u)
            yield f"sample {i + 1}", anchor_like(j, u) - expect

    rep.add(zero_check("anchor-rule", "anchor-like", rule(), names))
    rep.add(zero_check("anchor-like-formula", "anchor-like", formula(), names))

    one = Poly.const(1, n)
    defect_cases = [(f"u=1, f={names[i]}", one, Poly.var(i, n)) for i in range(n)]
    defect_cases += [(f"sample {i + 1}", u, f) for i, (u, f, _) in enumerate(rand)]
    found = None
    for lab, u, f in defect_cases:
        d = anchor_like(j, f * u) - anchor_like(j, u).scale(f)
        if not d.is_zero():
            found = (lab, d)
            break
    expect_defect = not j.lam.is_zero()
    wit = None
    if found is not None:
        lab, d = found
        comp = next(i for i, p in enumerate(d.comps) if not p.is_zero())
        wit = {"sections": [lab], "defect": f"[{comp + 1}]: {d[comp].to_str(names)}"}
    rep.add(Check("bundle-map-defect", "not-bundle-map", (found is not None) == expect_defect,
                  wit, note="alpha(pi(d(fu))) - f alpha(pi(du)) = u Lambda#(df)"))
    rep.data["c_inf_linear"] = found is None
    return rep
