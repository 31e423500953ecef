import pytest
from hypothesis import given
from hypothesis import strategies as st

from omnilie.bundle import SectionE, VectorField, jet_lift
from omnilie.dirac import check_integrability, four_conditions
from omnilie.errors import InputError, StructuralError
from omnilie.fixtures import contact_line, lambda_sharp, poisson_plane_jacobi
from omnilie.jacobi import (JacobiData, Multivector, bracket_jacobiator, check_anchor_like,
                            check_jacobi_structure, jacobi_bracket, jacobi_to_pi, lambda_pair,
                            line_dirac_to_local_lie, local_bracket, schouten,
                            wedge_vector_bivector)
from omnilie.poly import Patch, Poly, PolyMatrix
from omnilie.sampling import Sampler

seeds = st.integers(0, 10 ** 6)


def random_bivector(n, s):
    rows = [[Poly.zero(n)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            p = s.poly()
            rows[i][j], rows[j][i] = p, -p
    return PolyMatrix(rows, n, n, n)


def random_jacobi(n, seed):
    s = Sampler(Patch(n, 1), degree=1, seed=seed, max_terms=2, coeff_range=1)
    return JacobiData(Patch(n, 1), random_bivector(n, s), s.vector_field())


def test_schouten_vanishes_in_dimension_two():
    s = Sampler(Patch(2, 1), degree=2, seed=1)
    lam = Multivector.bivector(random_bivector(2, s))
    assert schouten(lam, lam).is_zero()


@given(seeds)
def test_vector_fields_commute_with_themselves(seed):
    s = Sampler(Patch(3, 1), seed=seed)
    x = Multivector.vector(s.vector_field())
    assert schouten(x, x).is_zero()


def test_schouten_of_frozen_bivector():
    n = 3
    one, z, x1 = Poly.const(1, n), Poly.zero(n), Poly.var(0, n)
    lam = PolyMatrix([[z, one, x1], [-one, z, z], [-x1, z, z]], 3, 3, 3)
    ll = schouten(Multivector.bivector(lam), Multivector.bivector(lam))
    assert ll.items() == [((0, 1, 2), Poly.const(-2, n))]
    # the Jacobiator of {f, g} = lam(df, dg) on the coordinates is 1
    coords = [Poly.var(i, n) for i in range(n)]
    jac = bracket_jacobiator(lambda f, g: lambda_pair(lam, f, g), *coords)
    assert jac == one


@given(seeds)
def test_schouten_sign_pin(seed):
    """[L, L](dx_i, dx_j, dx_k) = -2 * Jacobiator of the coordinate functions."""
    n = 3
    s = Sampler(Patch(n, 1), degree=2, seed=seed)
    lam = random_bivector(n, s)
    ll = schouten(Multivector.bivector(lam), Multivector.bivector(lam))
    coords = [Poly.var(i, n) for i in range(n)]
    jac = bracket_jacobiator(lambda f, g: lambda_pair(lam, f, g), *coords)
    assert ll[0, 1, 2] == jac * -2


@given(seeds)
def test_vector_bivector_bracket_is_lie_derivative(seed):
    n = 3
    s = Sampler(Patch(n, 1), degree=2, seed=seed)
    lam, x, f, g = random_bivector(n, s), s.vector_field(), s.poly(), s.poly()
    xl = schouten(Multivector.vector(x), Multivector.bivector(lam))
    lhs = sum((xl[i, j] * f.diff(i) * g.diff(j) for i in range(n) for j in range(n)),
              Poly.zero(n))
    rhs = x.apply(lambda_pair(lam, f, g)) - lambda_pair(lam, x.apply(f), g) \
        - lambda_pair(lam, f, x.apply(g))
    assert lhs == rhs


def test_multivector_api():
    x = Multivector.vector(VectorField((Poly.const(1, 3),) * 3, 3))
    with pytest.raises(InputError):
        schouten(x, Multivector(3, 3, {}))
    lam = Multivector.bivector(PolyMatrix([[Poly.zero(3), Poly.const(1, 3), Poly.zero(3)],
                                           [Poly.const(-1, 3), Poly.zero(3), Poly.zero(3)],
                                           [Poly.zero(3)] * 3], 3, 3, 3))
    assert lam[1, 0] == Poly.const(-1, 3)
    assert wedge_vector_bivector(x, lam)[2, 0, 1] == Poly.const(1, 3)


def test_jacobi_structure_examples():
    patch = Patch(2, 1)
    s = Sampler(patch, seed=3)
    zero_lam = JacobiData(patch, PolyMatrix.zeros(2, 2, 2), s.vector_field())
    assert check_jacobi_structure(zero_lam).passed
    assert check_jacobi_structure(poisson_plane_jacobi()).passed
    # in dimension 2 every 3-vector vanishes, so X = d/dx1 is also a Jacobi pair
    j = JacobiData(patch, poisson_plane_jacobi().lam, VectorField.basis(2, 0, 2))
    assert check_jacobi_structure(j, degree_cap=3).passed


def test_contact_structure_in_dimension_three():
    n = 3
    one, z, y = Poly.const(1, n), Poly.zero(n), Poly.var(1, n)
    lam = PolyMatrix([[z, one, z], [-one, z, -y], [z, y, z]], 3, 3, 3)
    good = JacobiData(Patch(3, 1), lam, VectorField((z, z, one), 3))
    bad = JacobiData(Patch(3, 1), lam, VectorField((z, z, -one), 3))
    assert check_jacobi_structure(good).passed
    rep = check_jacobi_structure(bad)
    assert not rep["lambda-lambda"].passed and not rep["bracket-jacobi"].passed


def test_bracket_examples():
    j = contact_line()
    t = Poly.var(0, 1)
    assert jacobi_bracket(j, t, t * t) == t * t
    s = Sampler(j.patch, seed=2)
    f, g = s.poly(), s.poly()
    assert jacobi_bracket(j, f, f).is_zero()
    assert jacobi_bracket(j, Poly.const(1, 1), g) == j.x_field.apply(g)


def test_jacobi_to_pi_examples():
    zero = JacobiData(Patch(2, 1), PolyMatrix.zeros(2, 2, 2), VectorField.zero(2, 2))
    pi0 = jacobi_to_pi(zero)
    s = Sampler(zero.patch, seed=4)
    assert pi0.apply(s.jet()).is_zero()
    c = jacobi_to_pi(contact_line())
    u = Sampler(contact_line().patch, seed=8).poly()
    d = c.apply(jet_lift(SectionE((u,), 1)))
    assert d.endo[0, 0] == -u.diff(0)
    assert d.base == VectorField((u,), 1)
    assert jacobi_to_pi(poisson_plane_jacobi()) == lambda_sharp()


@given(seeds)
def test_pi_of_lift_is_jacobi_bracket(seed):
    n = 3
    j = random_jacobi(n, seed)
    s = Sampler(j.patch, seed=seed)
    u, v = s.poly(), s.poly()
    pi = jacobi_to_pi(j)
    assert pi.apply(jet_lift(SectionE((u,), n)))(SectionE((v,), n)).comps[0] == \
        jacobi_bracket(j, u, v)
    assert local_bracket(pi, u, v) == jacobi_bracket(j, u, v)


def test_line_dirac_to_local_lie():
    zero = JacobiData(Patch(1, 1), PolyMatrix.zeros(1, 1, 1), VectorField.zero(1, 1))
    assert line_dirac_to_local_lie(jacobi_to_pi(zero)) == zero
    assert line_dirac_to_local_lie(jacobi_to_pi(contact_line()), 3) == contact_line()
    rec = line_dirac_to_local_lie(lambda_sharp())
    assert rec == poisson_plane_jacobi()
    assert not four_conditions(lambda_sharp(), samples=2)["cond2-hom-anchor-zero"].passed
    with pytest.raises(StructuralError):
        n = 3
        one, z, y = Poly.const(1, n), Poly.zero(n), Poly.var(1, n)
        lam = PolyMatrix([[z, one, z], [-one, z, -y], [z, y, z]], 3, 3, 3)
        line_dirac_to_local_lie(jacobi_to_pi(JacobiData(Patch(3, 1), lam,
                                                        VectorField((z, z, -one), 3))))


def test_anchor_like_examples():
    zero = JacobiData(Patch(2, 1), PolyMatrix.zeros(2, 2, 2), VectorField.zero(2, 2))
    rep = check_anchor_like(zero, samples=3)
    assert rep.passed and rep.data["c_inf_linear"]
    c = contact_line()
    t, one = Poly.var(0, 1), Poly.const(1, 1)
    from omnilie.jacobi import anchor_like
    lhs = jacobi_bracket(c, t, t * one)
    assert lhs == t * jacobi_bracket(c, t, one) + anchor_like(c, t).apply(t) * one
    assert check_anchor_like(c, samples=3).passed
    rep = check_anchor_like(poisson_plane_jacobi(), samples=3)
    assert rep.passed and not rep.data["c_inf_linear"]
    assert rep["bundle-map-defect"].witness == {"sections": ["u=1, f=x1"], "defect": "[2]: 1"}


@pytest.mark.parametrize("n", [1, 2, 3])
@given(seed=seeds)
def test_structure_equivalent_to_dirac(n, seed):
    j = random_jacobi(n, seed)
    ok = check_jacobi_structure(j, degree_cap=2)
    assert ok.passed == check_integrability(jacobi_to_pi(j), "sampled", degree_cap=1,
                                            samples=3, seed=seed).passed
    tensors = ok["lambda-lambda"].passed and ok["lambda-x"].passed
    assert tensors == ok["bracket-jacobi"].passed
