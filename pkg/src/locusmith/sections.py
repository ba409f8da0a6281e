"""Normal sections, projections along tangent directions and the diagram relating them."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    KernelDirection,
    NonTangentDirection,
    PoleOnlyGrid,
    WrongManifoldClass,
    ZeroDirection,
)
from .jet import MongeJet, as_vector, default_tol
from .loci import GridSpec, classify_locus, cylinder_directions, eta, sphere_directions

_NORMAL_LABELS = ("W", "T", "S", "U", "V")


def _transform(jet: MongeJet, basis: np.ndarray) -> np.ndarray:
    """Quadratic parts after the linear source substitution ``u = basis @ s``."""
    return np.einsum("ap,iab,bq->ipq", basis, jet.quad, basis)


def section_basis(jet: MongeJet, u):
    """Orthonormal source frame of the section ``{u = 0}`` and the bookkeeping for it.

    Returns ``(basis, solved, kept)``: ``basis`` is a ``source_dim x 2`` matrix
    whose columns span the section's tangent plane in source coordinates,
    ``solved`` is the ambient tangent coordinate eliminated by the section and
    ``kept`` the indices of the variables that name the section's coordinates.
    """
    if jet.source_dim != 3:
        raise WrongManifoldClass("normal sections are taken of 3-manifolds")
    v = as_vector(u)
    if not np.any(v):
        raise ZeroDirection("section direction must be nonzero")
    if jet.corank == 0:
        if v.shape == (jet.ambient_dim,):
            if np.linalg.norm(v[3:]) > default_tol() * np.linalg.norm(v):
                raise NonTangentDirection("section direction has a normal component")
            v = v[:3]
        if v.shape != (3,):
            raise DimensionMismatch(f"section direction needs 3 components, got {v.shape}")
        alpha = v / np.linalg.norm(v)
        j = int(np.argmax(np.abs(alpha)))
        kept = [i for i in range(3) if i != j]
        p = np.zeros((3, 2))
        p[kept[0], 0] = 1.0
        p[kept[1], 1] = 1.0
        p[j, :] = -alpha[kept] / alpha[j]
        q, r = np.linalg.qr(p)
        q = q * np.sign(np.diag(r))[None, :]
        return q, j, kept

    if v.shape == (3,):
        image = v[:2]
    elif v.shape == (2,):
        image = v
    else:
        raise DimensionMismatch(f"section direction needs 2 or 3 components, got {v.shape}")
    if np.linalg.norm(image) <= default_tol() * np.linalg.norm(v):
        raise KernelDirection("section direction lies in the kernel of the differential")
    alpha = image / np.linalg.norm(image)
    j = int(np.argmax(np.abs(alpha)))
    other = 1 - j
    b = np.zeros(2)
    b[other] = 1.0
    b[j] = -alpha[other] / alpha[j]
    b /= np.linalg.norm(b)
    basis = np.zeros((3, 2))
    basis[:2, 0] = b
    basis[2, 1] = 1.0
    return basis, j, [other, 2]


def normal_section(jet: MongeJet, u) -> MongeJet:
    """Surface jet cut out by the hyperplane orthogonal to the tangent direction ``u``.

    The eliminated variable is the one with the largest coefficient in ``u``;
    the remaining ones are orthonormalized so the result is again in Monge
    (or corank-1 normal) form. Terms above degree two never arise.
    """
    basis, solved, kept = section_basis(jet, u)
    quad = _transform(jet, basis)
    coords = tuple(c for i, c in enumerate(jet.coord_names) if i != solved)
    return MongeJet(
        source_dim=2,
        ambient_dim=jet.ambient_dim - 1,
        corank=jet.corank,
        quad=quad,
        var_names=tuple(jet.var_names[i] for i in kept),
        coord_names=coords,
    )


def rotation_to_last_axis(u: np.ndarray) -> np.ndarray:
    """Proper rotation ``R`` with ``R @ e_last = u`` (identity when u is e_last)."""
    u = u / np.linalg.norm(u)
    n = u.shape[0]
    if n == 2:
        return np.array([[u[1], u[0]], [-u[0], u[1]]])
    if u[2] < 0:
        # half-turn about x keeps Rodrigues away from the antipode
        flip = np.diag([1.0, -1.0, -1.0])
        return flip @ rotation_to_last_axis(flip @ u)
    e = np.zeros(n)
    e[-1] = 1.0
    c = float(e @ u)
    v = np.cross(e, u)
    vx = np.array([[0.0, -v[2], v[1]], [v[2], 0.0, -v[0]], [-v[1], v[0], 0.0]])
    return np.eye(3) + vx + vx @ vx / (1.0 + c)


def _tangent_direction(jet: MongeJet, u) -> np.ndarray:
    v = as_vector(u)
    if v.shape == (jet.ambient_dim,):
        if np.linalg.norm(v[jet.source_dim:]) > default_tol() * max(np.linalg.norm(v), 1e-300):
            raise NonTangentDirection("projection direction has a normal component")
        v = v[: jet.source_dim]
    if v.shape != (jet.source_dim,):
        raise DimensionMismatch(f"direction needs {jet.source_dim} components, got {v.shape}")
    if not np.any(v):
        raise ZeroDirection("projection direction must be nonzero")
    return v / np.linalg.norm(v)


def projection_rotation(jet: MongeJet, u) -> np.ndarray:
    """Source rotation carrying the kernel axis of the projection to ``u``."""
    return rotation_to_last_axis(_tangent_direction(jet, u))


def project_along(jet: MongeJet, u) -> MongeJet:
    """Corank-1 jet in one ambient dimension less, obtained by projecting along ``u``.

    Source coordinates are rotated so that ``u`` becomes the last variable;
    the Hessians of the normal coordinates are carried over unchanged in that
    rotated frame.
    """
    if jet.corank != 0:
        raise WrongManifoldClass("only regular jets can be projected along a tangent direction")
    if jet.ambient_dim - 1 < 3:
        raise WrongManifoldClass("projection would leave fewer than three ambient dimensions")
    rot = projection_rotation(jet, u)
    quad = _transform(jet, rot)
    n = jet.source_dim
    tangent = tuple(name.upper() for name in jet.var_names[: n - 1])
    return MongeJet(
        source_dim=n,
        ambient_dim=jet.ambient_dim - 1,
        corank=1,
        quad=quad,
        var_names=jet.var_names,
        coord_names=tangent + jet.coord_names[n:],
    )


def projection_first_form(jet: MongeJet, u) -> np.ndarray:
    """First fundamental form of ``f - <f, u> u`` in the original source coordinates."""
    if jet.corank != 0:
        raise WrongManifoldClass("projection needs a regular jet")
    d = jet.linear_part()
    w = d @ _tangent_direction(jet, u)
    w /= np.linalg.norm(w)
    proj = np.eye(jet.ambient_dim) - np.outer(w, w)
    dp = proj @ d
    return dp.T @ dp


# --------------------------------------------------------------------------
# families of sections

@dataclass(frozen=True)
class FamilySpec:
    """Sections ``{Y + a X = 0}`` for each ``a`` plus optionally ``{X = 0}`` and ``{Y = 0}``."""

    a_values: tuple
    include_axes: bool = True

    @classmethod
    def midpoints(cls, steps: int = 41, lo: float = -5.0, hi: float = 5.0, include_axes: bool = True):
        if steps < 1:
            raise ValueError("need at least one family step")
        width = (hi - lo) / steps
        return cls(tuple(lo + (k + 0.5) * width for k in range(steps)), include_axes)

    def directions(self):
        out = []
        if self.include_axes:
            out.append(("X=0", np.array([1.0, 0.0])))
            out.append(("Y=0", np.array([0.0, 1.0])))
        for a in self.a_values:
            out.append((f"Y{a:+.6g}X=0", np.array([float(a), 1.0])))
        return out


@dataclass
class FamilyReport:
    entries: list  # (label, direction, degenerate_type)
    counts: Counter = field(default_factory=Counter)

    @property
    def types(self) -> set:
        return set(self.counts)


def section_family_classifier(jet: MongeJet, family: FamilySpec | None = None, tol: float | None = None) -> FamilyReport:
    if jet.manifold_class != "sing-3manifold":
        raise WrongManifoldClass("section families are classified for corank-1 3-manifolds")
    family = family or FamilySpec.midpoints()
    entries = []
    for label, direction in family.directions():
        sec = normal_section(jet, direction)
        kind = classify_locus(sec, tol).degenerate_type
        entries.append((label, direction, kind))
    return FamilyReport(entries, Counter(k for _, _, k in entries))


# --------------------------------------------------------------------------
# commutative diagram

@dataclass
class DiagramReport:
    dev_projection_section: float
    dev_blowup: float
    dev_section_parabola: float
    rotated: bool
    section_from_regular: MongeJet
    section_from_singular: MongeJet
    projected: MongeJet

    @property
    def max_deviation(self) -> float:
        return max(self.dev_projection_section, self.dev_blowup, self.dev_section_parabola)

    def passed(self, tol: float = 1e-9) -> bool:
        return self.max_deviation < tol


def canonical_frame(u, section_normal) -> np.ndarray:
    """Rotation whose columns are (w, section_normal, u); identity for the canonical setup."""
    u = np.asarray(u, dtype=float)
    s = np.asarray(section_normal, dtype=float)
    u = u / np.linalg.norm(u)
    s = s / np.linalg.norm(s)
    if abs(u @ s) > 1e-12:
        raise ValueError("projection direction must lie in the section hyperplane")
    w = np.cross(s, u)
    return np.stack([w, s, u], axis=1)


def verify_diagram(jet: MongeJet, u=(0.0, 0.0, 1.0), section_normal=(0.0, 1.0, 0.0), grid: GridSpec | None = None) -> DiagramReport:
    """Compare both paths around the projection / section square.

    (a) section-then-project against project-then-section coefficients,
    (b) the blow-up relation between the regular and singular loci,
    (c) the section parabola against the parent loci restricted to theta = 0.
    """
    if jet.manifold_class != "reg-3manifold":
        raise WrongManifoldClass("the diagram starts from a regular 3-manifold")
    grid = grid or GridSpec(36, 17, phi_range=(0.1, np.pi - 0.1))
    phis = grid.phis()
    keep = np.abs(np.sin(phis)) > 1e-12
    if not np.any(keep):
        raise PoleOnlyGrid("every polar angle sits on a pole of the tangent sphere")
    phis = phis[keep]
    thetas = grid.thetas()

    rot = canonical_frame(as_vector(u, 3), as_vector(section_normal, 3))
    rotated = not np.allclose(rot, np.eye(3), atol=0.0, rtol=0.0)
    work = jet.with_quad(_transform(jet, rot)) if rotated else jet

    e_y = np.array([0.0, 1.0, 0.0])
    sec_reg = normal_section(work, e_y)
    path_a = project_along(sec_reg, np.array([0.0, 1.0]))
    sing = project_along(work, np.array([0.0, 0.0, 1.0]))
    path_b = normal_section(sing, e_y)
    dev_a = float(np.max(np.abs(path_a.quad - path_b.quad)))

    sph = sphere_directions(thetas, phis)
    eta_e = eta(work, sph)
    t, p = np.meshgrid(thetas, phis, indexing="ij")
    cyl = np.stack([np.cos(t), np.sin(t), np.cos(p) / np.sin(p)], axis=-1).reshape(-1, 3)
    eta_p = eta(sing, cyl)
    sin2 = (np.sin(p) ** 2).reshape(-1, 1)
    dev_b = float(np.max(np.abs(eta_p * sin2 - eta_e)))

    c = np.cos(phis) / np.sin(phis)
    par_a = eta(path_a, np.stack([np.ones_like(c), c], axis=1))
    par_b = eta(path_b, np.stack([np.ones_like(c), c], axis=1))
    parent_sing = eta(sing, cylinder_directions(np.array([0.0]), c))
    ell = eta(sec_reg, np.stack([np.sin(phis), np.cos(phis)], axis=1))
    blown = ell / (np.sin(phis) ** 2)[:, None]
    dev_c = float(max(
        np.max(np.abs(par_a - parent_sing)),
        np.max(np.abs(par_b - parent_sing)),
        np.max(np.abs(blown - parent_sing)),
    ))
    return DiagramReport(dev_a, dev_b, dev_c, rotated, sec_reg, path_b, sing)


# --------------------------------------------------------------------------
# helpers

def drop_zero_coordinates(jet: MongeJet, tol: float = 0.0) -> MongeJet:
    """Re-embed a jet in fewer ambient dimensions by removing identically zero normal coordinates."""
    keep = [i for i in range(jet.normal_dim) if np.max(np.abs(jet.quad[i])) > tol]
    if not keep:
        keep = [0]
    if len(keep) == jet.normal_dim:
        return jet
    m = jet.n_tangent + len(keep)
    if m < 3:
        raise WrongManifoldClass("re-embedding would leave fewer than three ambient dimensions")
    names = jet.coord_names[: jet.n_tangent] + tuple(jet.coord_names[jet.n_tangent + i] for i in keep)
    return MongeJet(jet.source_dim, m, jet.corank, jet.quad[keep], jet.var_names, names)


def curve_hausdorff(f, g, lo: float, hi: float, samples: int = 721, periodic: bool = True, iters: int = 80) -> float:
    """Hausdorff distance between two parametrized curves over the same interval.

    ``f`` and ``g`` map an array of parameters to an ``(N, k)`` array. Each
    sample of one curve is matched to its nearest sample on the other and
    then refined by a vectorized golden-section search on the unsquared
    distance, which keeps full precision when the curves coincide.
    """
    ts = np.linspace(lo, hi, samples, endpoint=not periodic)
    step = ts[1] - ts[0]
    ratio = (np.sqrt(5.0) - 1.0) / 2.0

    def one_way(a, b):
        pa, pb = a(ts), b(ts)
        d = np.linalg.norm(pa[:, None, :] - pb[None, :, :], axis=2)
        k = np.argmin(d, axis=1)
        coarse = d[np.arange(len(ts)), k]
        left, right = ts[k] - step, ts[k] + step

        def dist(t):
            return np.linalg.norm(b(t) - pa, axis=1)

        c = right - ratio * (right - left)
        e = left + ratio * (right - left)
        fc, fe = dist(c), dist(e)
        for _ in range(iters):
            go_left = fc < fe
            right = np.where(go_left, e, right)
            left = np.where(go_left, left, c)
            e_new = np.where(go_left, c, left + ratio * (right - left))
            c_new = np.where(go_left, right - ratio * (right - left), e)
            fe_new = np.where(go_left, fc, np.nan)
            fc_new = np.where(go_left, np.nan, fe)
            c, e = c_new, e_new
            need_c, need_e = np.isnan(fc_new), np.isnan(fe_new)
            fc_new[need_c] = dist(c)[need_c]
            fe_new[need_e] = dist(e)[need_e]
            fc, fe = fc_new, fe_new
        return float(np.max(np.minimum(coarse, np.minimum(fc, fe))))

    return max(one_way(f, g), one_way(g, f))
