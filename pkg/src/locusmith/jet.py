"""Monge-form 2-jets and the small linear algebra shared by the other modules.

A jet is stored as the quadratic parts of its non-trivial ambient coordinates.
For coordinate ``i`` the polynomial is ``u @ quad[i] @ u``, so the second
derivative matrix of that coordinate is ``2 * quad[i]``.
"""
from __future__ import annotations

import logging
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, NonFiniteEntry, NonMongeLinearPart, ZeroDirection

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-9
ANGLE_TOL = 1e-8

MANIFOLD_CLASSES = {
    (2, 0): "reg-surface",
    (3, 0): "reg-3manifold",
    (2, 1): "sing-surface",
    (3, 1): "sing-3manifold",
}

_DEFAULT_VARS = {2: ("x", "y"), 3: ("x", "y", "z")}
_NORMAL_LABELS = ("W", "T", "S", "U", "V")


def default_tol() -> float:
    """Rank tolerance, overridable through ``LOCUSMITH_TOL``."""
    raw = os.environ.get("LOCUSMITH_TOL")
    if raw is None or not raw.strip():
        return DEFAULT_TOL
    value = float(raw)
    if not math.isfinite(value) or value < 0:
        raise ValueError(f"LOCUSMITH_TOL must be a finite non-negative number, got {raw!r}")
    return value


def _check_finite(a: np.ndarray) -> None:
    if not np.all(np.isfinite(a)):
        raise NonFiniteEntry("matrix contains NaN or infinite entries")


def rank_with_tolerance(matrix, tol: float | None = None) -> int:
    """Numerical rank: number of singular values >= tol * largest singular value."""
    a = np.atleast_2d(np.asarray(matrix, dtype=float))
    _check_finite(a)
    if tol is None:
        tol = default_tol()
    if tol < 0:
        raise ValueError("tol must be non-negative")
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s >= tol * s[0]))


def column_basis(matrix, tol: float | None = None) -> np.ndarray:
    """Orthonormal basis (as columns) of the column span of ``matrix``."""
    a = np.atleast_2d(np.asarray(matrix, dtype=float))
    _check_finite(a)
    if a.size == 0:
        return np.zeros((a.shape[0], 0))
    r = rank_with_tolerance(a, tol)
    if r == 0:
        return np.zeros((a.shape[0], 0))
    u, _, _ = np.linalg.svd(a, full_matrices=False)
    return u[:, :r]


def in_span(vector, basis: np.ndarray, tol: float | None = None) -> bool:
    """True when ``vector`` lies in the span of the orthonormal columns of ``basis``."""
    v = np.asarray(vector, dtype=float)
    scale = np.linalg.norm(v)
    if scale == 0.0:
        return True
    if basis.shape[1] == 0:
        return False
    if tol is None:
        tol = default_tol()
    resid = v - basis @ (basis.T @ v)
    return bool(np.linalg.norm(resid) <= tol * max(scale, 1.0))


def left_null_vector(a: np.ndarray):
    """Unit vector minimizing ``|a.T @ nu|`` and the relative residual sigma_min / sigma_max."""
    u, s, _ = np.linalg.svd(a)
    nu = u[:, -1]
    smax = s[0] if s.size else 0.0
    smin = s[-1] if s.size == a.shape[0] else 0.0
    rel = 0.0 if smax == 0.0 else smin / smax
    return canonical_sign(nu), rel


def canonical_sign(v: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Flip ``v`` so its first component of non-negligible size is positive."""
    v = np.asarray(v, dtype=float)
    scale = np.max(np.abs(v)) if v.size else 0.0
    for c in v:
        if abs(c) > tol * max(scale, 1e-300):
            return v if c > 0 else -v
    return v


def projective_angle(u, v) -> float:
    """Angle in [0, pi/2] between the lines spanned by ``u`` and ``v``."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ZeroDirection("zero vector has no projective class")
    c = abs(float(u @ v)) / (nu * nv)
    # the sine form keeps precision for nearly parallel vectors
    cross = np.linalg.norm(np.outer(u, v) - np.outer(v, u)) / (math.sqrt(2.0) * nu * nv)
    return math.atan2(cross, c)


@dataclass(frozen=True, eq=False)
class ProjectiveDirection:
    """Tangent direction up to nonzero scale."""

    components: np.ndarray
    scale_class: str = "affine"

    def __post_init__(self):
        c = np.array(self.components, dtype=float).reshape(-1)
        _check_finite(c)
        if not np.any(c):
            raise ZeroDirection("direction must be nonzero")
        if self.scale_class not in ("affine", "infinite"):
            raise ValueError(f"unknown scale class {self.scale_class!r}")
        c.setflags(write=False)
        object.__setattr__(self, "components", c)

    @property
    def unit(self) -> np.ndarray:
        return self.components / np.linalg.norm(self.components)

    def equivalent(self, other, tol: float = ANGLE_TOL) -> bool:
        o = other.components if isinstance(other, ProjectiveDirection) else np.asarray(other, dtype=float)
        if o.shape != self.components.shape:
            return False
        return projective_angle(self.components, o) < tol

    def __eq__(self, other):
        if not isinstance(other, ProjectiveDirection):
            return NotImplemented
        return self.scale_class == other.scale_class and self.equivalent(other)

    __hash__ = None

    def __repr__(self):
        comps = ", ".join(f"{c:.6g}" for c in self.components)
        return f"ProjectiveDirection(({comps}), {self.scale_class})"


@dataclass(frozen=True, eq=False)
class NormalDirection:
    components: np.ndarray

    def __post_init__(self):
        c = np.array(self.components, dtype=float).reshape(-1)
        _check_finite(c)
        if not np.any(c):
            raise ZeroDirection("normal direction must be nonzero")
        c.setflags(write=False)
        object.__setattr__(self, "components", c)

    @property
    def unit(self) -> np.ndarray:
        return self.components / np.linalg.norm(self.components)

    def __repr__(self):
        comps = ", ".join(f"{c:.6g}" for c in self.components)
        return f"NormalDirection(({comps}))"


def as_vector(u, length: int | None = None) -> np.ndarray:
    """Accept a ProjectiveDirection, NormalDirection or array-like."""
    if isinstance(u, (ProjectiveDirection, NormalDirection)):
        v = np.array(u.components, dtype=float)
    else:
        v = np.asarray(u, dtype=float).reshape(-1)
    if length is not None and v.shape != (length,):
        raise DimensionMismatch(f"expected a vector of length {length}, got shape {v.shape}")
    _check_finite(v)
    return v


@dataclass(frozen=True, eq=False)
class MongeJet:
    """Second-order jet of a parametrization in Monge / corank-1 normal form.

    The first ``source_dim - corank`` ambient coordinates are the identity on
    the first source variables; ``quad[i]`` holds the quadratic part of the
    ``i``-th remaining ambient coordinate. For corank 1 the last source
    variable spans the kernel of the differential.
    """

    source_dim: int
    ambient_dim: int
    corank: int
    quad: np.ndarray
    var_names: tuple = field(default=())
    coord_names: tuple = field(default=())

    def __post_init__(self):
        n, m, c = self.source_dim, self.ambient_dim, self.corank
        if n not in (2, 3):
            raise DimensionMismatch(f"source_dim must be 2 or 3, got {n}")
        if c not in (0, 1):
            raise DimensionMismatch(f"corank must be 0 or 1, got {c}")
        if m not in (3, 4, 5, 6):
            raise DimensionMismatch(f"ambient_dim must be in 3..6, got {m}")
        k = m - (n - c)
        if k < 1:
            raise DimensionMismatch(f"no normal directions for source_dim={n}, ambient_dim={m}, corank={c}")
        q = np.array(self.quad, dtype=float)
        if q.shape != (k, n, n):
            raise DimensionMismatch(f"quadratic tensor must have shape {(k, n, n)}, got {q.shape}")
        _check_finite(q)
        q = 0.5 * (q + np.transpose(q, (0, 2, 1)))
        q.setflags(write=False)
        object.__setattr__(self, "quad", q)
        if not self.var_names:
            object.__setattr__(self, "var_names", _DEFAULT_VARS[n])
        if len(self.var_names) != n:
            raise DimensionMismatch("var_names must name every source variable")
        object.__setattr__(self, "var_names", tuple(self.var_names))
        if not self.coord_names:
            tangent = tuple(v.upper() for v in self.var_names[: n - c])
            object.__setattr__(self, "coord_names", tangent + _NORMAL_LABELS[:k])
        if len(self.coord_names) != m:
            raise DimensionMismatch("coord_names must label every ambient coordinate")
        object.__setattr__(self, "coord_names", tuple(self.coord_names))

    @property
    def n_tangent(self) -> int:
        """Number of ambient coordinates carrying the identity linear part."""
        return self.source_dim - self.corank

    @property
    def normal_dim(self) -> int:
        return self.ambient_dim - self.n_tangent

    @property
    def manifold_class(self) -> str:
        return MANIFOLD_CLASSES[(self.source_dim, self.corank)]

    @property
    def is_regular(self) -> bool:
        return self.corank == 0

    @property
    def hessians(self) -> np.ndarray:
        """Second derivative matrices of the normal coordinates, shape (k, n, n)."""
        return 2.0 * self.quad

    def linear_part(self) -> np.ndarray:
        """Differential at the origin, shape (ambient_dim, source_dim)."""
        d = np.zeros((self.ambient_dim, self.source_dim))
        for a in range(self.n_tangent):
            d[a, a] = 1.0
        return d

    def kernel_direction(self) -> ProjectiveDirection:
        if self.corank != 1:
            raise DimensionMismatch("regular jets have no kernel direction")
        e = np.zeros(self.source_dim)
        e[-1] = 1.0
        return ProjectiveDirection(e, "infinite")

    def is_zero(self) -> bool:
        return not np.any(self.quad)

    def allclose(self, other: "MongeJet", atol: float = 1e-15) -> bool:
        return (
            (self.source_dim, self.ambient_dim, self.corank)
            == (other.source_dim, other.ambient_dim, other.corank)
            and np.allclose(self.quad, other.quad, rtol=0.0, atol=atol)
        )

    def __eq__(self, other):
        if not isinstance(other, MongeJet):
            return NotImplemented
        return (
            (self.source_dim, self.ambient_dim, self.corank)
            == (other.source_dim, other.ambient_dim, other.corank)
            and np.array_equal(self.quad, other.quad)
        )

    __hash__ = None

    def with_quad(self, quad, **changes) -> "MongeJet":
        kw = dict(
            source_dim=self.source_dim,
            ambient_dim=self.ambient_dim,
            corank=self.corank,
            var_names=self.var_names,
            coord_names=self.coord_names,
        )
        kw.update(changes)
        return MongeJet(quad=quad, **kw)

    def table(self) -> list:
        """Coefficient table ``(coordinate, monomial, coefficient)``, 1-based coordinates."""
        rows = []
        n = self.source_dim
        for i in range(self.normal_dim):
            coord = self.n_tangent + i + 1
            for a in range(n):
                for b in range(a, n):
                    if a == b:
                        coeff = float(self.quad[i, a, a])
                        mono = f"{self.var_names[a]}^2"
                    else:
                        coeff = float(2.0 * self.quad[i, a, b])
                        mono = f"{self.var_names[a]}*{self.var_names[b]}"
                    if coeff != 0.0:
                        rows.append((coord, mono, coeff))
        return rows

    def polynomial_strings(self) -> list:
        """Human-readable component list, e.g. ``['x', 'y', 'x^2 + 0.5*z^2', ...]``."""
        parts = list(self.var_names[: self.n_tangent])
        for i in range(self.normal_dim):
            terms = []
            for coord, mono, coeff in self.table():
                if coord == self.n_tangent + i + 1:
                    terms.append(mono if coeff == 1.0 else f"{coeff!r}*{mono}")
            parts.append(" + ".join(terms) if terms else "0")
        return parts

    def __repr__(self):
        return f"MongeJet({self.manifold_class}, R^{self.ambient_dim}: ({', '.join(self.polynomial_strings())}))"


def _parse_number(value) -> float:
    if isinstance(value, str):
        s = value.strip()
        if "/" in s:
            return float(Fraction(s))
        return float(s)
    return float(value)


def monomial_exponents(monomial, var_names: Sequence[str]) -> tuple:
    """Exponent vector of a monomial string such as ``'x*z'``, ``'y^2'`` or ``'x*x*y'``."""
    exps = [0] * len(var_names)
    text = "".join(str(monomial).split())
    if text in ("", "1"):
        return tuple(exps)
    for factor in text.split("*"):
        if not factor:
            raise ValueError(f"empty factor in monomial {monomial!r}")
        name, _, power = factor.partition("^")
        if name not in var_names:
            raise ValueError(f"unknown variable {name!r} in monomial {monomial!r}")
        p = int(power) if power else 1
        if p < 0:
            raise ValueError(f"negative power in monomial {monomial!r}")
        exps[var_names.index(name)] += p
    return tuple(exps)


def _is_tensor(table) -> bool:
    if isinstance(table, np.ndarray):
        return True
    try:
        return np.asarray(table, dtype=float).ndim == 3
    except (TypeError, ValueError):
        return False


def make_jet(
    table,
    *,
    source_dim: int,
    ambient_dim: int,
    corank: int,
    var_names: Sequence[str] | None = None,
    coord_names: Sequence[str] | None = None,
) -> MongeJet:
    """Build a jet from a coefficient table or a raw quadratic tensor.

    ``table`` is either an array of shape ``(k, n, n)`` (symmetrized on
    construction) or an iterable of ``(coordinate, monomial, coefficient)``
    triples with 1-based ambient coordinate indices. Linear monomials are
    accepted only where they reproduce the Monge identity part; terms of
    degree three or more are truncated.
    """
    n, m = source_dim, ambient_dim
    names = tuple(var_names) if var_names else _DEFAULT_VARS.get(n, ())
    if len(names) != n:
        raise DimensionMismatch(f"need {n} variable names, got {names}")
    k = m - (n - corank)
    if k < 1:
        raise DimensionMismatch(f"no normal directions for source_dim={n}, ambient_dim={m}, corank={corank}")
    cnames = tuple(coord_names) if coord_names else ()

    if _is_tensor(table):
        quad = np.asarray(table, dtype=float)
        if quad.shape != (k, n, n):
            raise DimensionMismatch(f"quadratic tensor must have shape {(k, n, n)}, got {quad.shape}")
        return MongeJet(n, m, corank, quad, names, cnames)

    n_tan = n - corank
    quad = np.zeros((k, n, n))
    for entry in table:
        if len(entry) != 3:
            raise DimensionMismatch(f"table entries are (coordinate, monomial, coefficient), got {entry!r}")
        coord, mono, coeff = entry
        coord = int(coord)
        coeff = _parse_number(coeff)
        if not 1 <= coord <= m:
            raise DimensionMismatch(f"coordinate index {coord} outside 1..{m}")
        exps = monomial_exponents(mono, names)
        deg = sum(exps)
        if coeff == 0.0:
            continue
        if deg >= 3:
            log.debug("truncating degree-%d term %s on coordinate %d", deg, mono, coord)
            continue
        if coord <= n_tan:
            # identity coordinates: only the matching linear term with coefficient 1 is allowed
            if deg == 1 and exps[coord - 1] == 1 and coeff == 1.0:
                continue
            raise NonMongeLinearPart(
                f"coordinate {coord} must equal {names[coord - 1]}; got term {coeff!r}*{mono}"
            )
        if deg == 0:
            raise NonMongeLinearPart(f"constant term on coordinate {coord}: the jet must pass through the origin")
        if deg == 1:
            raise NonMongeLinearPart(f"coordinate {coord} must have zero linear part; got term {coeff!r}*{mono}")
        i = coord - n_tan - 1
        idx = [a for a, e in enumerate(exps) for _ in range(e)]
        a, b = idx
        if a == b:
            quad[i, a, a] += coeff
        else:
            quad[i, a, b] += 0.5 * coeff
            quad[i, b, a] += 0.5 * coeff
    return MongeJet(n, m, corank, quad, names, cnames)


def jet_from_hessians(hessians, *, corank: int, ambient_dim: int | None = None, **kw) -> MongeJet:
    """Jet whose normal coordinates have the given second derivative matrices."""
    h = np.asarray(hessians, dtype=float)
    k, n, _ = h.shape
    if ambient_dim is None:
        ambient_dim = k + n - corank
    return MongeJet(n, ambient_dim, corank, 0.5 * h, **kw)


def random_jet(rng: np.random.Generator, source_dim: int, ambient_dim: int, corank: int, scale: float = 1.0) -> MongeJet:
    k = ambient_dim - (source_dim - corank)
    q = rng.normal(scale=scale, size=(k, source_dim, source_dim))
    return MongeJet(source_dim, ambient_dim, corank, q)


def zero_jet(source_dim: int, ambient_dim: int, corank: int) -> MongeJet:
    k = ambient_dim - (source_dim - corank)
    return MongeJet(source_dim, ambient_dim, corank, np.zeros((k, source_dim, source_dim)))


def unit(v: Iterable[float]) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    nrm = np.linalg.norm(v)
    if nrm == 0.0:
        raise ZeroDirection("cannot normalize the zero vector")
    return v / nrm
