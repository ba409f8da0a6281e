"""First and second fundamental forms at the origin of a Monge-form jet."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .jet import MongeJet, as_vector

# column order of the coefficient matrix, as (a, b) index pairs
MONOMIAL_PAIRS = {
    2: ((0, 0), (0, 1), (1, 1)),
    3: ((0, 0), (0, 1), (1, 1), (2, 2), (0, 2), (1, 2)),
}
COEFFICIENT_LABELS = {2: ("l", "m", "n"), 3: ("l", "m", "n", "p", "q", "r")}


@dataclass(frozen=True, eq=False)
class FirstForm:
    matrix: np.ndarray
    signature: str

    def __call__(self, u, v=None) -> float:
        u = np.asarray(u, dtype=float)
        v = u if v is None else np.asarray(v, dtype=float)
        return float(u @ self.matrix @ v)


@dataclass(frozen=True, eq=False)
class SecondForm:
    """Coefficient matrix: one row per normal-frame vector, one column per monomial."""

    matrix: np.ndarray
    labels: tuple
    var_names: tuple = field(default=())

    @property
    def source_dim(self) -> int:
        return 2 if self.matrix.shape[1] == 3 else 3

    def column(self, label: str) -> np.ndarray:
        return self.matrix[:, self.labels.index(label)]

    def quadratic(self, u) -> np.ndarray:
        """II(u, u) assembled from the coefficient matrix."""
        u = np.asarray(u, dtype=float)
        weights = np.array([
            (1.0 if a == b else 2.0) * u[a] * u[b] for a, b in MONOMIAL_PAIRS[self.source_dim]
        ])
        return self.matrix @ weights

    def hessians(self) -> np.ndarray:
        n = self.source_dim
        h = np.zeros((self.matrix.shape[0], n, n))
        for col, (a, b) in enumerate(MONOMIAL_PAIRS[n]):
            h[:, a, b] = self.matrix[:, col]
            h[:, b, a] = self.matrix[:, col]
        return h


@dataclass(frozen=True)
class UnitTangentSet:
    """The set C_q of unit tangent vectors that the curvature locus is the image of."""

    kind: str  # "circle", "sphere", "line-pair" or "cylinder"
    descriptor: dict


def first_form(jet: MongeJet) -> FirstForm:
    d = jet.linear_part()
    e = d.T @ d
    return FirstForm(e, "riemannian" if jet.corank == 0 else "degenerate-pseudo")


def second_form(jet: MongeJet) -> SecondForm:
    h = jet.hessians
    cols = [h[:, a, b] for a, b in MONOMIAL_PAIRS[jet.source_dim]]
    return SecondForm(np.stack(cols, axis=1), COEFFICIENT_LABELS[jet.source_dim], jet.var_names)


def evaluate_II(jet: MongeJet, u, v=None) -> np.ndarray:
    """Symmetric bilinear second fundamental form, valued in the normal frame."""
    u = as_vector(u, jet.source_dim)
    v = u if v is None else as_vector(v, jet.source_dim)
    return np.einsum("a,iab,b->i", u, jet.hessians, v)


def unit_tangent_set(jet: MongeJet) -> UnitTangentSet:
    if jet.corank == 0:
        if jet.source_dim == 2:
            return UnitTangentSet("circle", {"theta": (0.0, 2 * np.pi)})
        return UnitTangentSet("sphere", {"theta": (0.0, 2 * np.pi), "phi": (0.0, np.pi)})
    if jet.source_dim == 2:
        return UnitTangentSet("line-pair", {"branches": (1.0, -1.0), "height": (-np.inf, np.inf)})
    return UnitTangentSet("cylinder", {"theta": (0.0, 2 * np.pi), "height": (-np.inf, np.inf), "axis": 2})
