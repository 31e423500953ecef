import pytest
from hypothesis import given
from hypothesis import strategies as st

from omnilie.algebroid import algebroid_to_pi
from omnilie.bundle import JetSection, SectionE, VectorField, jet_frame, jet_lift
from omnilie.dirac import (LOCAL_ONLY, FrameForm, LineForm, TrivialForm, check_graph_isotropy,
                           check_integrability, check_skew, dirac_to_algebroid, four_conditions,
                           generating_family, integrability_defect, pi_bracket)
from omnilie.errors import InputError, StructuralError
from omnilie.fixtures import correspondence_fixtures, lambda_sharp, so3_action, so3_point
from omnilie.poly import Patch, Poly, PolyMatrix
from omnilie.sampling import Sampler
from omnilie.tensor import StructureTensor

seeds = st.integers(0, 10 ** 6)


def random_trivial(patch, seed, degree=1):
    s = Sampler(patch, degree=degree, seed=seed)
    k, n = patch.rank_e, patch.dim_m
    omega = StructureTensor.from_pairs(k, n, {(a, b): tuple(s.poly() for _ in range(k))
                                              for a in range(k) for b in range(a + 1, k)})
    return TrivialForm(patch, s.matrix(n, k), omega)


def random_line(patch, seed, degree=1):
    s = Sampler(patch, degree=degree, seed=seed)
    n = patch.dim_m
    rows = [[Poly.zero(n)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            p = s.poly()
            rows[i][j], rows[j][i] = p, -p
    return LineForm(patch, PolyMatrix(rows, n, n, n), s.vector_field())


def test_trivial_form_by_hand():
    patch = Patch(1, 2)
    x = Poly.var(0, 1)
    one, z = Poly.const(1, 1), Poly.zero(1)
    theta = PolyMatrix([[x, one]], 1, 2, 1)
    omega = StructureTensor.from_pairs(2, 1, {(0, 1): (one, x)})
    pi = TrivialForm(patch, theta, omega)
    # mu = (y, v) with y = (1, 0)^T dx and v = e2
    mu = JetSection(PolyMatrix([[one], [z]], 2, 1, 1), SectionE.basis(2, 1, 1))
    d = pi.apply(mu)
    # Omega(v, .) sends e1 to Omega(e2, e1) = -e1 - x e2 and e2 to 0
    # y theta = [[x, 1], [0, 0]]
    assert d.endo == PolyMatrix([[-one - x, -one], [-x, z]], 2, 2, 1)
    assert d.base == VectorField((one,), 1)


def test_lambda_sharp_map():
    pi = lambda_sharp()
    n = 2
    xi = JetSection.from_hom(PolyMatrix([[Poly.const(2, n), Poly.const(5, n)]], 1, 2, n))
    d = pi.apply(xi)
    assert d.endo.is_zero()
    # lam#(xi)^j = sum_i xi_i lam[i][j]: (2*0 + 5*(-1), 2*1 + 5*0)
    assert d.base == VectorField((Poly.const(-5, n), Poly.const(2, n)), n)
    t = JetSection(PolyMatrix.zeros(1, 2, 2), SectionE.basis(1, 0, 2))
    assert pi.apply(t).is_zero()


def test_shape_validation():
    with pytest.raises(InputError):
        TrivialForm(Patch(2, 2), PolyMatrix.zeros(2, 3, 2), StructureTensor.zero(2, 2))
    with pytest.raises(InputError):
        LineForm(Patch(2, 2), PolyMatrix.zeros(2, 2, 2), VectorField.zero(2, 2))
    with pytest.raises(InputError):
        FrameForm(Patch(1, 1), PolyMatrix.zeros(2, 3, 1))
    with pytest.raises(InputError):
        check_integrability(lambda_sharp(), mode="exhaustive")


@pytest.mark.parametrize("patch", [Patch(1, 2), Patch(2, 2), Patch(0, 3)])
@given(seed=seeds)
def test_trivial_forms_are_skew_and_round_trip(patch, seed):
    pi = random_trivial(patch, seed)
    assert check_skew(pi).passed
    assert check_graph_isotropy(pi).passed
    assert pi.to_frame().to_trivial() == pi


@pytest.mark.parametrize("patch", [Patch(1, 1), Patch(2, 1), Patch(3, 1)])
@given(seed=seeds)
def test_line_forms_are_skew_and_round_trip(patch, seed):
    pi = random_line(patch, seed)
    assert check_skew(pi).passed
    assert pi.to_frame().to_line() == pi


def test_rank_one_trivial_form_has_no_room_for_lambda():
    # Omega is antisymmetric, so at rank 1 it vanishes and the Hom block is -y theta
    patch = Patch(2, 1)
    frame = lambda_sharp().to_frame()
    with pytest.raises(StructuralError):
        FrameForm(patch, frame.matrix).to_trivial()
    assert StructureTensor.zero(1, 2).is_antisymmetric()


def test_non_skew_frame_map_is_structural_failure():
    patch = Patch(1, 1)
    one = Poly.const(1, 1)
    m = PolyMatrix([[one, Poly.zero(1)], [Poly.zero(1), Poly.zero(1)]], 2, 2, 1)
    rep = check_integrability(FrameForm(patch, m))
    assert not rep.passed
    assert rep.data["structural"] is True
    assert [c.name for c in rep.checks] == ["skew"]
    assert rep["skew"].witness["sections"]


@pytest.mark.parametrize("name", sorted(correspondence_fixtures()))
def test_finite_and_sampled_modes_agree_on_fixtures(name):
    pi = algebroid_to_pi(correspondence_fixtures()[name])
    assert check_integrability(pi, "finite").passed
    assert check_integrability(pi, "sampled", degree_cap=1, samples=4).passed


def test_perturbed_constant_fails_with_triple_witness():
    from omnilie.fixtures import so3_tensor
    z, o = Poly.zero(0), Poly.const(1, 0)
    omega = StructureTensor.from_pairs(3, 0, {(0, 1): (o, z, o), (0, 2): (z, -o, z),
                                              (1, 2): (o, z, z)})
    pi = TrivialForm(Patch(0, 3), PolyMatrix.zeros(0, 3, 0), omega)
    rep = check_integrability(pi)
    assert not rep["fadf2"].passed
    assert rep["fadf2"].witness["sections"] == ["triple (1,2,3)"]
    assert check_integrability(pi, "sampled", samples=2).passed is False
    assert so3_tensor(0) != omega


def test_sampled_mode_finds_defect_on_perturbed_action():
    pi = algebroid_to_pi(so3_action(c312=2), strict=False)
    rep = check_integrability(pi, "sampled", degree_cap=1, samples=2)
    assert not rep.passed


def test_generating_family_degree_cap():
    fam = generating_family(Patch(1, 1), 1)
    labels = [lab for lab, _ in fam]
    assert labels == ["1*d(1*e1)", "x1*d(1*e1)", "1*d(x1*e1)"]


@given(seed=seeds)
def test_defect_vanishes_for_algebroid_maps(seed):
    pi = algebroid_to_pi(so3_action())
    s = Sampler(pi.patch, degree=1, seed=seed)
    assert integrability_defect(pi, s.jet(), s.jet()).is_zero()


def test_four_conditions_on_algebroid_and_lambda_sharp():
    good = four_conditions(algebroid_to_pi(so3_action()), samples=3)
    assert good.passed
    bad = four_conditions(lambda_sharp(), samples=3)
    assert bad["agreement"].passed
    assert not bad["cond2-hom-anchor-zero"].passed
    assert set(bad.data["conditions"].values()) == {False}


def test_dirac_to_algebroid():
    for a in correspondence_fixtures().values():
        assert dirac_to_algebroid(algebroid_to_pi(a), samples=3) == a
    with pytest.raises(StructuralError) as info:
        dirac_to_algebroid(lambda_sharp(), samples=3)
    assert str(info.value) == LOCAL_ONLY
    with pytest.raises(StructuralError):
        dirac_to_algebroid(algebroid_to_pi(so3_action(c312=2), strict=False))


def test_pi_bracket_on_lifts_projects_to_bracket():
    pi = algebroid_to_pi(so3_point())
    e = [SectionE.basis(3, a, 0) for a in range(3)]
    assert pi_bracket(pi, jet_lift(e[0]), jet_lift(e[1])).val == e[2]


def test_frame_of_so3_point_matches_structure_constants():
    pi = algebroid_to_pi(so3_point())
    frame = jet_frame(pi.patch)
    assert len(frame) == 3
    # pi([e1]) = [e1, .]: e2 -> e3, e3 -> -e2
    d = pi.apply(frame[0][1])
    assert d.endo[2, 1] == Poly.const(1, 0) and d.endo[1, 2] == Poly.const(-1, 0)
