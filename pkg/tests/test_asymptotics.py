import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import (
    ORBIT_FORMS,
    a2_perturb,
    asymptotic_example,
    elliptic_region,
    orbit_jet,
    random_orthogonal,
    roman_steiner,
    sing_cubic,
)
from locusmith import _kernels
from locusmith.asymptotics import (
    ORBITS,
    a_matrix,
    alpha_matrix,
    asymptotic_cubic,
    binary_form_roots,
    classify_orbit,
    classify_surface_jet,
    cubic_coefficients,
    equivalence_check,
    eta_at_infinity,
    is_asymptotic,
    normal_form_jet,
    section_asymptotic_comparison,
)
from locusmith.errors import NonConvergentLimit, UndefinedForType, WrongManifoldClass, ZeroDirection
from locusmith.jet import make_jet, projective_angle, random_jet, zero_jet
from locusmith.sections import normal_section


def _eval(jet, u):
    return float(_kernels.cubic_eval(cubic_coefficients(jet), np.atleast_2d(u))[0])


@pytest.mark.parametrize("dims", [(3, 6, 0), (3, 5, 1)])
def test_cubic_matches_determinant(dims):
    rng = np.random.default_rng(3)
    for _ in range(5):
        jet = random_jet(rng, *dims)
        for u in rng.normal(size=(20, 3)):
            det = np.linalg.det(a_matrix(jet, u))
            assert abs(_eval(jet, u) - det) <= 1e-10 * max(1.0, abs(det))


@pytest.mark.parametrize("dims", [(3, 6, 0), (3, 5, 1), (2, 4, 0)])
def test_binormal_residuals(dims):
    rng = np.random.default_rng(11)
    for _ in range(4):
        jet = random_jet(rng, *dims)
        cub = asymptotic_cubic(jet)
        assert len(cub.roots) > 0
        assert np.max(cub.binormal_residuals) < 1e-8
        for u, nu in zip(cub.roots[:20], cub.binormals[:20]):
            assert np.linalg.norm(nu @ a_matrix(jet, u)) < 1e-8 * np.max(np.abs(jet.hessians))


def test_root_set_rotates_with_source():
    rng = np.random.default_rng(5)
    jet = random_jet(rng, 3, 6, 0)
    r = random_orthogonal(rng, 3)
    moved = jet.with_quad(np.einsum("ap,iab,bq->ipq", r, jet.quad, r))
    roots = asymptotic_cubic(jet).roots
    cub = asymptotic_cubic(moved)
    for u in roots[::25]:
        assert cub.is_root(r.T @ u, tol=1e-9)


def test_roots_invariant_under_normal_frame_rotation():
    rng = np.random.default_rng(6)
    jet = random_jet(rng, 3, 5, 1)
    t = random_orthogonal(rng, 3)
    moved = jet.with_quad(np.einsum("ij,jab->iab", t, jet.quad))
    a, b = asymptotic_cubic(jet), asymptotic_cubic(moved)
    for u in a.roots[::25]:
        assert b.is_root(u, tol=1e-9)


def test_surface_in_r4_binary_form():
    jet = make_jet([(3, "x^2", 1), (4, "y^2", 1)], source_dim=2, ambient_dim=4, corank=0)
    cub = asymptotic_cubic(jet)
    assert cub.degree == 2
    got = sorted(round(projective_angle(r, [1, 0]), 6) for r in cub.roots)
    assert got == [0.0, round(np.pi / 2, 6)]


def test_binary_form_roots():
    roots = binary_form_roots([0.0, 1.0, 0.0])  # xy
    assert len(roots) == 2
    assert len(binary_form_roots([1.0, 0.0, 1.0])) == 0


def test_zero_jet_reports_all_directions():
    cub = asymptotic_cubic(zero_jet(3, 5, 1))
    assert cub.all_directions and len(cub.roots) == 0


def test_wrong_class():
    with pytest.raises(WrongManifoldClass):
        asymptotic_cubic(elliptic_region())


def test_is_asymptotic_examples():
    ok, nu = is_asymptotic(asymptotic_example(), (0, 0, 1))
    assert ok and projective_angle(nu, [0, 0, 1]) < 1e-12
    best = orbit_jet("x*z", "y*z", "z^2")
    assert is_asymptotic(best, (1, 0, 0)).asymptotic
    assert not is_asymptotic(best, (0, 0, 1)).asymptotic
    with pytest.raises(ZeroDirection):
        is_asymptotic(best, (0, 0, 0))


def test_degenerate_direction_on_section():
    sec = normal_section(sing_cubic(), (1, 0))
    res = is_asymptotic(sec, (1, -1))
    assert not res and res.kind == "degenerate"
    assert projective_angle(res.witness, [-1, 1, 1]) < 1e-12


def test_equivalence_on_fixtures():
    for jet in (sing_cubic(), orbit_jet("z^2", "x*z", None), random_jet(np.random.default_rng(1), 3, 5, 1)):
        assert equivalence_check(jet, probes=60).ok


@pytest.mark.parametrize("label", ORBITS)
def test_normal_forms_fixed(label):
    assert classify_orbit(normal_form_jet(label)).label == label
    assert classify_orbit(orbit_jet(*ORBIT_FORMS[label])).label == label


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(ORBITS), st.integers(0, 2**31 - 1))
def test_orbit_invariant_under_perturbation(label, seed):
    jet = a2_perturb(orbit_jet(*ORBIT_FORMS[label]), np.random.default_rng(seed))
    assert classify_orbit(jet).label == label


def test_alpha_and_det():
    a = alpha_matrix(orbit_jet("x*z", "y*z", "z^2"))
    assert abs(np.linalg.det(a)) == pytest.approx(1.0)
    assert classify_orbit(orbit_jet("x*z", "y*z", "z^2")).is_best
    with pytest.raises(WrongManifoldClass):
        classify_orbit(roman_steiner())


@pytest.mark.parametrize(
    "table, m, label",
    [
        ([(3, "x*y", 1), (4, "y^2", 1)], 4, "(x,xy,y^2,0)"),
        ([(3, "y^2", 1)], 4, "(x,y^2,0,0)"),
        ([(3, "x*y", 1)], 4, "(x,xy,0,0)"),
        ([], 4, "(x,0,0,0)"),
        ([(2, "x*y", 1), (3, "y^2", 1)], 3, "(x,xy,y^2)"),
    ],
)
def test_surface_orbits(table, m, label):
    jet = make_jet(table, source_dim=2, ambient_dim=m, corank=1)
    assert classify_surface_jet(jet).label == label


def test_eta_at_infinity_surfaces():
    with pytest.raises(UndefinedForType):
        eta_at_infinity(make_jet([(3, "x*y", 1), (4, "y^2", 1)], source_dim=2, ambient_dim=4, corank=1))
    half = eta_at_infinity(make_jet([(3, "y^2", 1)], source_dim=2, ambient_dim=4, corank=1))
    assert half.kind == "half-line"
    np.testing.assert_allclose(half.eta, [0, 1, 0])
    pt = eta_at_infinity(make_jet([(2, "x^2", 3)], source_dim=2, ambient_dim=4, corank=1))
    np.testing.assert_allclose(pt.eta, [6, 0, 0])
    np.testing.assert_allclose(pt.d_theta, 0)


def test_eta_at_infinity_threefolds():
    planar = eta_at_infinity(orbit_jet("z^2", "x*z", None))
    assert planar.kind == "planar-region"
    np.testing.assert_allclose(planar.eta, [1, 0, 0], atol=1e-6)
    assert abs(planar.d_theta @ planar.d_phi) < 1e-12
    curve = eta_at_infinity(orbit_jet("z^2", None, None))
    np.testing.assert_allclose(curve.eta, [1, 0, 0])
    best = eta_at_infinity(orbit_jet("x*z", "y*z", "z^2"))
    assert best.kind == "nonplanar-surface" and not best.infinite_asymptotic
    np.testing.assert_allclose(best.eta, [0, 0, 1], atol=1e-6)
    assert eta_at_infinity(orbit_jet("x*z", None, None)).infinite_asymptotic


def test_eta_at_infinity_not_convergent():
    with pytest.raises(NonConvergentLimit):
        eta_at_infinity(orbit_jet("x*z", "y*z", None).with_quad(
            orbit_jet("x*z", "y*z", "x^2").quad
        ))


def test_section_roots_match_parent_when_aff_is_ep():
    jet = orbit_jet("x*z", "y*z", "z^2")
    sec_roots, parent_roots, aff_eq = section_asymptotic_comparison(jet, (0, 1))
    assert aff_eq
    assert len(sec_roots) == len(parent_roots) > 0
    for r in sec_roots:
        assert min(projective_angle(r, p) for p in parent_roots) < 1e-8
