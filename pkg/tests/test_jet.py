import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from helpers import random_orthogonal
from locusmith.errors import DimensionMismatch, NonFiniteEntry, NonMongeLinearPart, ZeroDirection
from locusmith.jet import (
    MongeJet,
    ProjectiveDirection,
    canonical_sign,
    default_tol,
    make_jet,
    monomial_exponents,
    projective_angle,
    random_jet,
    rank_with_tolerance,
)

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def test_quad_is_symmetrized():
    q = np.zeros((3, 3, 3))
    q[0, 0, 1] = 2.0
    jet = MongeJet(3, 6, 0, q)
    assert jet.quad[0, 0, 1] == jet.quad[0, 1, 0] == 1.0
    assert not jet.quad.flags.writeable


def test_table_entries_and_hessians():
    jet = make_jet([(4, "x^2", 1), (4, "z^2", "1/2"), (5, "x*z", 1), (6, "y*z", 1)], source_dim=3, ambient_dim=6, corank=0)
    assert jet.hessians[0, 0, 0] == 2.0
    assert jet.hessians[0, 2, 2] == 1.0
    assert jet.hessians[1, 0, 2] == jet.hessians[1, 2, 0] == 1.0
    assert jet.polynomial_strings() == ["x", "y", "z", "x^2 + 0.5*z^2", "x*z", "y*z"]


def test_identity_terms_are_accepted_and_cubics_truncated():
    jet = make_jet([(1, "x", 1), (3, "x^3", 5), (3, "x*y", 1)], source_dim=2, ambient_dim=4, corank=1)
    assert jet.manifold_class == "sing-surface"
    assert jet.quad[1, 0, 1] == 0.5
    assert np.count_nonzero(jet.quad) == 2


@pytest.mark.parametrize(
    "table, err",
    [
        ([(1, "y", 1)], NonMongeLinearPart),
        ([(1, "x", 2)], NonMongeLinearPart),
        ([(4, "x", 1)], NonMongeLinearPart),
        ([(4, "1", 1)], NonMongeLinearPart),
        ([(7, "x^2", 1)], DimensionMismatch),
        ([(4, "w^2", 1)], ValueError),
        ([(4, "x^2")], DimensionMismatch),
    ],
)
def test_make_jet_rejects(table, err):
    with pytest.raises(err):
        make_jet(table, source_dim=3, ambient_dim=6, corank=0)


def test_dimension_checks():
    with pytest.raises(DimensionMismatch):
        MongeJet(3, 3, 0, np.zeros((0, 3, 3)))
    with pytest.raises(DimensionMismatch):
        MongeJet(3, 6, 0, np.zeros((2, 3, 3)))
    with pytest.raises(NonFiniteEntry):
        MongeJet(2, 4, 0, np.full((2, 2, 2), np.nan))


def test_monomial_exponents():
    assert monomial_exponents("x*z", ("x", "y", "z")) == (1, 0, 1)
    assert monomial_exponents("y^2", ("x", "y", "z")) == (0, 2, 0)
    assert monomial_exponents("x * x * y", ("x", "y", "z")) == (2, 1, 0)


def test_rank_examples():
    assert rank_with_tolerance(np.zeros((3, 3))) == 0
    assert rank_with_tolerance(np.diag([1.0, 1e-12, 0.0])) == 1
    assert rank_with_tolerance(np.diag([1.0, 1e-6, 0.0])) == 2
    assert rank_with_tolerance([[1.0, 2.0], [2.0, 4.0]]) == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 4), st.integers(0, 2**31 - 1))
def test_rank_invariant_under_orthogonal_factors(r, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(5, r)) @ rng.normal(size=(r, 4)) if r else np.zeros((5, 4))
    b = random_orthogonal(rng, 5) @ a @ random_orthogonal(rng, 4)
    assert rank_with_tolerance(a) == rank_with_tolerance(b) == min(r, 4)


def test_tol_env(monkeypatch):
    monkeypatch.setenv("LOCUSMITH_TOL", "1e-3")
    assert default_tol() == 1e-3
    assert rank_with_tolerance(np.diag([1.0, 1e-4])) == 1
    monkeypatch.setenv("LOCUSMITH_TOL", "nan")
    with pytest.raises(ValueError):
        default_tol()


@given(arrays(float, 3, elements=finite), st.floats(0.1, 5) | st.floats(-5, -0.1))
def test_projective_angle_scale_invariant(v, lam):
    if np.linalg.norm(v) < 1e-3:
        return
    assert projective_angle(v, lam * v) < 1e-7
    assert ProjectiveDirection(v) == ProjectiveDirection(lam * v)


def test_projective_angle_zero():
    with pytest.raises(ZeroDirection):
        projective_angle([0, 0, 0], [1, 0, 0])
    assert projective_angle([1, 0], [0, 1]) == pytest.approx(np.pi / 2)


def test_canonical_sign():
    assert np.array_equal(canonical_sign(np.array([0.0, -1.0, 2.0])), [0.0, 1.0, -2.0])


def test_random_jet_shapes():
    rng = np.random.default_rng(0)
    for n, m, c in [(2, 4, 0), (2, 4, 1), (3, 5, 1), (3, 6, 0), (2, 5, 0)]:
        jet = random_jet(rng, n, m, c)
        assert jet.quad.shape == (m - n + c, n, n)
        assert jet.linear_part().shape == (m, n)
