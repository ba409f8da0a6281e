"""Shared fixtures and reference constructions for the test-suite."""
from __future__ import annotations

import numpy as np

from locusmith.jet import MongeJet, make_jet

S2 = np.sqrt(2.0)


def jet3(table, m, corank=0):
    return make_jet(table, source_dim=3, ambient_dim=m, corank=corank)


def roman_steiner():
    c = S2 / 2
    return jet3([(4, "x*y", c), (5, "x*z", c), (6, "y*z", c)], 6)


def elliptic_region():
    return jet3([(4, "x^2", 1), (4, "z^2", 1), (5, "x*y", 1)], 5)


def diagram_jet():
    return jet3([(4, "x^2", 1), (4, "z^2", 0.5), (5, "x*z", 1), (6, "y*z", 1)], 6)


def asymptotic_example():
    return jet3([(4, "x^2", 1), (4, "z^2", 1), (5, "x*y", 1), (5, "x*z", 1), (6, "y^2", 1)], 6)


def sing_cubic():
    return jet3(
        [(3, "x^2", 1), (3, "y*z", -2), (4, "y^2", 1), (4, "x*z", -2), (5, "z^2", 1), (5, "x*y", -2)], 5, 1
    )


def orbit_jet(*components):
    """Corank-1 (3,5) jet from the three normal components, e.g. ``orbit_jet("z^2", "x*z", None)``."""
    return jet3([(i + 3, c, 1) for i, c in enumerate(components) if c], 5, 1)


ORBIT_FORMS = {
    "(x,y,xz,yz,z^2)": ("x*z", "y*z", "z^2"),
    "(x,y,z^2,xz,0)": ("z^2", "x*z", None),
    "(x,y,xz,yz,0)": ("x*z", "y*z", None),
    "(x,y,z^2,0,0)": ("z^2", None, None),
    "(x,y,xz,0,0)": ("x*z", None, None),
    "(x,y,0,0,0)": (None, None, None),
}


def random_orthogonal(rng, n):
    q, r = np.linalg.qr(rng.normal(size=(n, n)))
    return q * np.sign(np.diag(r))


def a2_perturb(jet: MongeJet, rng) -> MongeJet:
    """Random A^2-equivalent corank-1 (3,5) jet in normal form.

    Source: (x, y) -> M (x, y), z -> lam z + a x + b y. Target: the inverse
    of M on (X, Y), an invertible mix of the normal coordinates, and added
    quadratic terms in X, Y alone.
    """
    while True:
        m = rng.normal(size=(2, 2))
        if abs(np.linalg.det(m)) > 0.2:
            break
    lam = rng.uniform(0.3, 2.0) * rng.choice([-1.0, 1.0])
    a, b = rng.normal(size=2)
    s = np.zeros((3, 3))
    s[:2, :2] = m
    s[2] = (a, b, lam)
    while True:
        t = rng.normal(size=(3, 3))
        if abs(np.linalg.det(t)) > 0.2:
            break
    q = np.einsum("ap,iab,bq->ipq", s, jet.quad, s)
    q = np.einsum("ij,jab->iab", t, q)
    extra = rng.normal(size=(3, 2, 2))
    q[:, :2, :2] += extra + extra.transpose(0, 2, 1)
    return jet.with_quad(q)


def parabola_coefficients(points_at):
    """(l, 2m, n) of a parabola t -> l + 2 m t + n t^2 from three samples."""
    p0, p1, pm = points_at(0.0), points_at(1.0), points_at(-1.0)
    return p0, 0.5 * (p1 - pm), 0.5 * (p1 + pm) - p0
