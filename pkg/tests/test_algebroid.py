from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import jacobi_violations, so3_constants
from omnilie.algebroid import (AlgebroidData, NijenhuisOp, abelian, algebroid_to_pi,
                               bracket_sections, check_axioms, check_diagram,
                               check_pi_bracket_props, check_rep_equivalence, deformed_bracket,
                               frame_determinants, n_hat, nijenhuis_suite, poisson_cotangent,
                               rho_hat, rho_hat_matrix, tangent_algebroid, torsion, twisted_pi)
from omnilie.bundle import SectionE, jet_lift, tensor_jet
from omnilie.dirac import check_integrability, dirac_to_algebroid, pi_bracket
from omnilie.errors import InputError, StructuralError
from omnilie.fixtures import (correspondence_fixtures, so3_action, so3_point, so3_tensor,
                              symplectic_bivector, symplectic_plane, tangent_plane)
from omnilie.poly import Patch, Poly, PolyMatrix
from omnilie.sampling import Sampler
from omnilie.tensor import StructureTensor

seeds = st.integers(0, 10 ** 6)


def tensor_from_lists(c, nvars=0):
    k = len(c)
    return StructureTensor.from_function(k, nvars, lambda d, a, b: Poly.const(c[d][a][b], nvars))


def random_algebroid(patch, seed):
    s = Sampler(patch, degree=1, seed=seed, max_terms=2, coeff_range=1)
    k, n = patch.rank_e, patch.dim_m
    c = StructureTensor.from_pairs(k, n, {(a, b): tuple(s.poly() for _ in range(k))
                                          for a in range(k) for b in range(a + 1, k)})
    return AlgebroidData(patch, s.matrix(n, k), c)


def test_bracket_examples():
    a = abelian(Patch(2, 2))
    u, v = SectionE.basis(2, 0, 2), SectionE.basis(2, 1, 2)
    assert bracket_sections(a, u, v).is_zero()
    e = so3_point().basis()
    assert bracket_sections(so3_point(), e[0], e[1]) == e[2]
    assert tensor_from_lists(so3_constants()) == so3_tensor(0)


@given(seeds)
def test_anchor_rule(seed):
    a = so3_action()
    s = Sampler(a.patch, degree=1, seed=seed)
    u, v, f = s.section(), s.section(), s.poly()
    lhs = bracket_sections(a, u, v.scale(f))
    rhs = bracket_sections(a, u, v).scale(f) + v.scale(a.anchor_of(u.comps).apply(f))
    assert lhs == rhs


def test_shape_errors():
    with pytest.raises(InputError):
        AlgebroidData(Patch(2, 2), PolyMatrix.zeros(2, 3, 2), StructureTensor.zero(2, 2))
    with pytest.raises(InputError):
        tangent_algebroid(Patch(2, 3))


@pytest.mark.parametrize("name", sorted(correspondence_fixtures()))
def test_fixtures_are_algebroids(name):
    assert check_axioms(correspondence_fixtures()[name]).passed


def test_perturbed_action_fails_anchor_homomorphism():
    rep = check_axioms(so3_action(c312=2))
    assert not rep["anchor-homomorphism"].passed
    assert rep["anchor-homomorphism"].witness == {"sections": ["pair (1,2)"], "defect": "[1]: x2"}


def test_perturbed_point_constants_match_brute_force():
    c = so3_constants(c112=1)
    assert jacobi_violations(c)
    a = AlgebroidData(Patch(0, 3), PolyMatrix.zeros(0, 3, 0), tensor_from_lists(c))
    rep = check_axioms(a)
    assert not rep["jacobi-frame"].passed
    triple = rep["jacobi-frame"].witness["sections"][0]
    assert triple == "triple ({},{},{})".format(*jacobi_violations(c)[0])


def test_algebroid_to_pi():
    a = abelian(Patch(2, 2))
    pi = algebroid_to_pi(a)
    assert pi.theta.is_zero() and pi.omega == StructureTensor.zero(2, 2)
    with pytest.raises(StructuralError):
        algebroid_to_pi(so3_action(c312=2))


@given(seeds)
def test_pi_of_lift_is_bracket_and_df_tensor_rule(seed):
    a = so3_action()
    pi = algebroid_to_pi(a, strict=False)
    s = Sampler(a.patch, degree=1, seed=seed)
    u, v, f = s.section(), s.section(), s.poly()
    assert pi.apply(jet_lift(u))(v) == bracket_sections(a, u, v)
    df = tuple(f.diff(j) for j in range(3))
    lhs = pi.apply(tensor_jet(df, u))(v)
    assert lhs == bracket_sections(a, u.scale(f), v) - bracket_sections(a, u, v).scale(f)


@pytest.mark.parametrize("a", [abelian(Patch(2, 2)), so3_action()])
def test_pi_bracket_properties(a):
    assert check_pi_bracket_props(a, algebroid_to_pi(a), samples=3).passed


def test_item3_vanishes_on_equal_arguments():
    a = so3_action()
    pi = algebroid_to_pi(a)
    s = Sampler(a.patch, degree=1, seed=3)
    y = tensor_jet(s.one_form(), s.section())
    assert pi_bracket(pi, y, y).is_zero()


def test_rho_hat_examples():
    ab = abelian(Patch(2, 2))
    s = Sampler(ab.patch, seed=2)
    assert rho_hat(ab, s.jet()).is_zero()
    a = so3_action()
    s = Sampler(a.patch, degree=1, seed=5)
    u = s.section()
    assert rho_hat(a, jet_lift(u)).base == a.anchor_of(u.comps)


def test_tangent_rho_hat_is_invertible():
    m = rho_hat_matrix(tangent_plane())
    assert m.shape == (6, 6)
    assert all(d != 0 for d in frame_determinants(m, [(0, 0), (1, 2), (Fraction(1, 3), -1)]))


@pytest.mark.parametrize("a", [abelian(Patch(2, 2)), so3_action(), symplectic_plane(),
                               tangent_plane()])
def test_diagram_and_representations(a):
    assert check_diagram(a, samples=2).passed
    assert check_rep_equivalence(a, samples=2).passed


def test_symplectic_rho_hat_unimodular():
    m = rho_hat_matrix(symplectic_plane())
    dets = frame_determinants(m, [(0, 0), (1, -1), (Fraction(2, 3), 5)])
    assert all(abs(d) == 1 for d in dets)


def test_poisson_builder():
    patch = Patch(2, 2)
    a = poisson_cotangent(patch, PolyMatrix.zeros(2, 2, 2))
    assert a == abelian(patch)
    sp = poisson_cotangent(patch, symplectic_bivector())
    one, z = Poly.const(1, 2), Poly.zero(2)
    assert sp.rho == PolyMatrix([[z, -one], [one, z]], 2, 2, 2)
    assert sp.c == StructureTensor.zero(2, 2)
    x1 = Poly.var(0, 2)
    lin = poisson_cotangent(patch, PolyMatrix([[z, x1], [-x1, z]], 2, 2, 2))
    assert lin.c[0, 0, 1] == one and lin.c[1, 0, 1] == z
    assert check_axioms(lin).passed


def test_non_poisson_bivector_rejected_with_witness():
    patch = Patch(3, 3)
    one, z, x1 = Poly.const(1, 3), Poly.zero(3), Poly.var(0, 3)
    lam = PolyMatrix([[z, one, x1], [-one, z, z], [-x1, z, z]], 3, 3, 3)
    with pytest.raises(StructuralError) as info:
        poisson_cotangent(patch, lam)
    assert info.value.witness == {"sections": ["[P,P](1, 2, 3)"], "defect": "-2"}


@pytest.mark.parametrize("patch", [Patch(1, 1), Patch(1, 2), Patch(2, 2), Patch(0, 2)])
@given(seed=seeds)
def test_checkers_agree_on_random_data(patch, seed):
    a = random_algebroid(patch, seed)
    ax = check_axioms(a).passed
    assert ax == check_integrability(algebroid_to_pi(a, strict=False)).passed
    if ax:
        assert dirac_to_algebroid(algebroid_to_pi(a), samples=2) == a


@given(seeds)
def test_dorfman_compatibility(seed):
    a = so3_action()
    pi = algebroid_to_pi(a)
    s = Sampler(a.patch, degree=1, seed=seed)
    u, v = s.section(), s.section()
    assert pi_bracket(pi, jet_lift(u), jet_lift(v)).val == bracket_sections(a, u, v)


# -- Nijenhuis ----------------------------------------------------------

def _const_matrix(rows, n):
    k = len(rows)
    return PolyMatrix([[Poly.const(v, n) for v in row] for row in rows], k, k, n)


@pytest.mark.parametrize("a", [so3_point(), so3_action()])
@pytest.mark.parametrize("rows", [[[1, 0, 0], [0, 1, 0], [0, 0, 1]], [[0] * 3] * 3])
def test_nijenhuis_trivial_cases(a, rows):
    rep = nijenhuis_suite(a, NijenhuisOp(_const_matrix(rows, a.patch.dim_m)))
    assert rep.passed
    assert rep.data["torsion_zero"]


def test_identity_leaves_bracket_unchanged():
    a = so3_action()
    s = Sampler(a.patch, degree=1, seed=4)
    u, v = s.section(), s.section()
    N = PolyMatrix.identity(3, 3)
    assert deformed_bracket(a, N, u, v) == bracket_sections(a, u, v)
    assert torsion(a, N, u, v).is_zero()


def test_point_so3_projection_against_brute_force():
    a = so3_point()
    N = _const_matrix([[1, 0, 0], [0, 1, 0], [0, 0, 0]], 0)
    rep = nijenhuis_suite(a, NijenhuisOp(N))
    # brute force: the deformed constants of a point algebra and their Jacobi identity
    c = so3_constants()
    nm = [[1, 0, 0], [0, 1, 0], [0, 0, 0]]

    def br(u, v):
        return [sum(c[d][i][j] * u[i] * v[j] for i in range(3) for j in range(3))
                for d in range(3)]

    def nmul(u):
        return [sum(nm[i][j] * u[j] for j in range(3)) for i in range(3)]

    e = [[int(i == a_) for i in range(3)] for a_ in range(3)]
    cn = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    for i in range(3):
        for j in range(3):
            val = [p + q - r for p, q, r in zip(br(nmul(e[i]), e[j]), br(e[i], nmul(e[j])),
                                               nmul(br(e[i], e[j])))]
            for d in range(3):
                cn[d][i][j] = val[d]
    assert rep.data["algebroid"] == (not jacobi_violations(cn))
    assert rep["agreement"].passed


@given(seeds)
def test_n_hat_lifts_jets(seed):
    a = so3_action()
    s = Sampler(a.patch, degree=1, seed=seed)
    N, u = s.matrix(3, 3), s.section()
    assert n_hat(N, jet_lift(u)) == jet_lift(SectionE(N.apply(u.comps), 3))


@given(seeds)
def test_twisted_map_acts_as_deformed_bracket(seed):
    a = so3_point()
    s = Sampler(a.patch, seed=seed)
    N = s.matrix(3, 3)
    tw = twisted_pi(a, N)
    u, v = s.section(), s.section()
    assert tw.apply(jet_lift(u))(v) == deformed_bracket(a, N, u, v)


@pytest.mark.parametrize("a", [so3_point(), tangent_plane()])
@given(seed=seeds)
def test_nijenhuis_booleans_agree(a, seed):
    s = Sampler(a.patch, degree=0, seed=seed, coeff_range=1)
    N = s.matrix(a.patch.rank_e, a.patch.rank_e)
    rep = nijenhuis_suite(a, NijenhuisOp(N), samples=2)
    assert rep["agreement"].passed
    assert rep["twisted-acts-as-deformed-bracket"].passed
