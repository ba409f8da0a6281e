import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import diagram_jet, elliptic_region, orbit_jet, random_orthogonal, roman_steiner, sing_cubic
from locusmith.errors import (
    DimensionMismatch,
    KernelDirection,
    NonTangentDirection,
    PoleOnlyGrid,
    WrongManifoldClass,
    ZeroDirection,
)
from locusmith.forms import evaluate_II
from locusmith.jet import random_jet
from locusmith.loci import GridSpec, classify_locus, eta
from locusmith.sections import (
    FamilySpec,
    curve_hausdorff,
    drop_zero_coordinates,
    normal_section,
    project_along,
    projection_first_form,
    rotation_to_last_axis,
    section_basis,
    section_family_classifier,
    verify_diagram,
)

unit3 = st.tuples(*[st.floats(-1, 1)] * 3).filter(lambda v: np.linalg.norm(v) > 0.1)


def test_section_shapes():
    sec = normal_section(roman_steiner(), (1, 1, 1))
    assert sec.manifold_class == "reg-surface" and sec.ambient_dim == 5
    sing = normal_section(sing_cubic(), (1, 2))
    assert sing.manifold_class == "sing-surface" and sing.ambient_dim == 4
    assert sing.coord_names[0] == "X"


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**31 - 1), unit3)
def test_section_restricts_second_form(seed, normal):
    rng = np.random.default_rng(seed)
    jet = random_jet(rng, 3, 6, 0)
    basis, _, _ = section_basis(jet, normal)
    np.testing.assert_allclose(basis.T @ basis, np.eye(2), atol=1e-12)
    np.testing.assert_allclose(basis.T @ np.asarray(normal, float), 0.0, atol=1e-12)
    sec = normal_section(jet, normal)
    s = rng.normal(size=2)
    np.testing.assert_allclose(evaluate_II(sec, s), evaluate_II(jet, basis @ s), atol=1e-10)


def test_section_errors():
    with pytest.raises(ZeroDirection):
        normal_section(roman_steiner(), (0, 0, 0))
    with pytest.raises(NonTangentDirection):
        normal_section(roman_steiner(), (1, 0, 0, 1, 0, 0))
    with pytest.raises(KernelDirection):
        normal_section(sing_cubic(), (0, 0, 1))
    with pytest.raises(DimensionMismatch):
        normal_section(sing_cubic(), (1, 0, 0, 0))
    with pytest.raises(WrongManifoldClass):
        normal_section(normal_section(roman_steiner(), (1, 0, 0)), (1, 0))


@settings(max_examples=40, deadline=None)
@given(unit3)
def test_rotation_to_last_axis(u):
    u = np.asarray(u) / np.linalg.norm(u)
    r = rotation_to_last_axis(u)
    np.testing.assert_allclose(r @ r.T, np.eye(3), atol=1e-12)
    assert np.linalg.det(r) == pytest.approx(1.0)
    np.testing.assert_allclose(r[:, -1], u, atol=1e-12)


def test_rotation_antipodal():
    r = rotation_to_last_axis(np.array([0.0, 0.0, -1.0]))
    np.testing.assert_allclose(r[:, -1], [0, 0, -1])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31 - 1), unit3)
def test_projection_keeps_second_form(seed, u):
    rng = np.random.default_rng(seed)
    jet = random_jet(rng, 3, 6, 0)
    proj = project_along(jet, u)
    assert proj.manifold_class == "sing-3manifold" and proj.ambient_dim == 5
    r = rotation_to_last_axis(np.asarray(u) / np.linalg.norm(u))
    s = rng.normal(size=3)
    np.testing.assert_allclose(evaluate_II(proj, s), evaluate_II(jet, r @ s), atol=1e-10)
    uu = np.asarray(u) / np.linalg.norm(u)
    assert abs(uu @ projection_first_form(jet, u) @ uu) < 1e-12


def test_projection_errors():
    with pytest.raises(WrongManifoldClass):
        project_along(sing_cubic(), (0, 0, 1))
    with pytest.raises(WrongManifoldClass):
        project_along(random_jet(np.random.default_rng(0), 2, 3, 0), (0, 1))


def test_diagram_fixture():
    rep = verify_diagram(diagram_jet())
    assert rep.passed(1e-12) and not rep.rotated
    c = np.linspace(-2, 2, 9)
    np.testing.assert_allclose(
        eta(rep.section_from_singular, np.stack([np.ones_like(c), c], 1)),
        np.stack([2 + c**2, 2 * c, 0 * c], 1),
        atol=1e-13,
    )


@pytest.mark.parametrize("seed", range(5))
def test_diagram_rotated_configuration(seed):
    rng = np.random.default_rng(seed)
    q = random_orthogonal(rng, 3)
    rep = verify_diagram(random_jet(rng, 3, 6, 0), u=q[:, 2], section_normal=q[:, 1])
    assert rep.rotated and rep.passed(1e-9)


def test_diagram_errors():
    with pytest.raises(PoleOnlyGrid):
        verify_diagram(diagram_jet(), grid=GridSpec(4, 1, phi_range=(0.0, 0.0)))
    with pytest.raises(ValueError):
        verify_diagram(diagram_jet(), u=(0, 0, 1), section_normal=(0, 1, 1))
    with pytest.raises(WrongManifoldClass):
        verify_diagram(sing_cubic())


def test_family_spec():
    fam = FamilySpec.midpoints()
    assert len(fam.a_values) == 41
    assert fam.a_values[0] == pytest.approx(-5 + 5 / 41)
    assert 0.0 in [round(a, 12) for a in fam.a_values]
    assert [lbl for lbl, _ in fam.directions()[:2]] == ["X=0", "Y=0"]
    with pytest.raises(ValueError):
        FamilySpec.midpoints(0)


def test_family_types_sing_cubic():
    rep = section_family_classifier(sing_cubic())
    assert rep.types == {"nondegenerate-parabola"}
    with pytest.raises(WrongManifoldClass):
        section_family_classifier(roman_steiner())


@pytest.mark.parametrize(
    "comps, axis_kind",
    [(("z^2", "x*z", None), "half-line"), (("x*z", None, None), "point")],
)
def test_family_axis_sections(comps, axis_kind):
    rep = section_family_classifier(orbit_jet(*comps))
    assert dict((lbl, k) for lbl, _, k in rep.entries)["X=0"] == axis_kind


def test_sections_generate_locus():
    # every section ellipse lies in the parent's locus: points of the section are parent points
    jet = elliptic_region()
    for normal in [(1, 2, 0), (0.3, -1, 2)]:
        basis, _, _ = section_basis(jet, normal)
        sec = normal_section(jet, normal)
        t = np.linspace(0, 2 * np.pi, 17)
        d = np.stack([np.cos(t), np.sin(t)], 1)
        np.testing.assert_allclose(eta(sec, d), eta(jet, d @ basis.T), atol=1e-12)


def test_drop_zero_coordinates():
    sec = normal_section(elliptic_region(), (0, 1, 0))
    assert classify_locus(sec).degenerate_type == "point"
    small = drop_zero_coordinates(sec)
    assert small.ambient_dim == 3


def test_curve_hausdorff_detects_offset():
    f = lambda t: np.stack([np.cos(t), np.sin(t)], 1)  # noqa: E731
    g = lambda t: np.stack([np.cos(t) + 1e-6, np.sin(t)], 1)  # noqa: E731
    assert curve_hausdorff(f, f, 0, 2 * np.pi) < 1e-14
    assert curve_hausdorff(f, g, 0, 2 * np.pi) == pytest.approx(1e-6, rel=1e-6)
