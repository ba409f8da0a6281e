"""Curvature loci: sampling over the unit tangent set and rank-based classification.

Degeneracy is decided from coefficient ranks, never from sampled points.
All ranks are taken relative to the largest second-derivative entry of the
jet, so "zero" means negligible compared to the jet's own scale.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import EmptyGrid, WrongManifoldClass
from .forms import second_form
from .jet import MongeJet, default_tol


@dataclass(frozen=True)
class GridSpec:
    """Parameter grid: ``n_theta`` azimuths, ``n_phi`` polar angles or cylinder heights.

    Cylinder and line-pair heights run over ``[-height, height]``; sphere
    polar angles over ``phi_range``.
    """

    n_theta: int = 72
    n_phi: int = 36
    height: float = 3.0
    phi_range: tuple = (0.0, np.pi)

    def thetas(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.n_theta) / self.n_theta

    def phis(self) -> np.ndarray:
        lo, hi = self.phi_range
        if self.n_phi == 1:
            return np.array([0.5 * (lo + hi)])
        return np.linspace(lo, hi, self.n_phi)

    def heights(self) -> np.ndarray:
        if self.n_phi == 1:
            return np.array([0.0])
        return np.linspace(-self.height, self.height, self.n_phi)


@dataclass(frozen=True, eq=False)
class LocusSample:
    points: np.ndarray  # (N, k) normal-space vectors
    params: np.ndarray  # (N, 2): (theta, phi) / (theta, c); unused slots hold 0
    manifold_class: str
    shape: tuple  # (rows, cols) of the parameter grid
    periodic_theta: bool


@dataclass(frozen=True, eq=False)
class LocusInvariants:
    manifold_class: str
    dim_first_normal: int
    dim_affine_hull: int
    degenerate_type: str
    tag: str
    affine_point: np.ndarray
    ep_basis: np.ndarray  # orthonormal columns spanning E_p
    mean_curvature: np.ndarray | None = None
    H_in_Ep: bool | None = None
    radial: bool | None = None
    extra: dict = field(default_factory=dict)


def jet_scale(jet: MongeJet) -> float:
    s = float(np.max(np.abs(jet.hessians))) if jet.hessians.size else 0.0
    return s if s > 0.0 else 1.0


def scaled_rank(vectors, scale: float, tol: float | None = None) -> int:
    """Rank of the columns, counting singular values above ``tol * scale``."""
    a = np.asarray(vectors, dtype=float)
    if a.size == 0:
        return 0
    if tol is None:
        tol = default_tol()
    s = np.linalg.svd(a, compute_uv=False)
    return int(np.count_nonzero(s > tol * scale))


def _span_basis(vectors: np.ndarray, scale: float, tol: float | None = None) -> np.ndarray:
    if vectors.size == 0:
        return np.zeros((vectors.shape[0], 0))
    r = scaled_rank(vectors, scale, tol)
    if r == 0:
        return np.zeros((vectors.shape[0], 0))
    u, _, _ = np.linalg.svd(vectors, full_matrices=False)
    return u[:, :r]


# --------------------------------------------------------------------------
# tangent-set parametrizations

def sphere_directions(thetas, phis) -> np.ndarray:
    t, p = np.meshgrid(thetas, phis, indexing="ij")
    return np.stack([np.sin(p) * np.cos(t), np.sin(p) * np.sin(t), np.cos(p)], axis=-1).reshape(-1, 3)


def cylinder_directions(thetas, heights) -> np.ndarray:
    t, c = np.meshgrid(thetas, heights, indexing="ij")
    return np.stack([np.cos(t), np.sin(t), c], axis=-1).reshape(-1, 3)


def eta(jet: MongeJet, dirs) -> np.ndarray:
    """II(u, u) for each row of ``dirs``."""
    d = np.atleast_2d(np.asarray(dirs, dtype=float))
    return _kernels.quadratic_map(jet.hessians, d)


def sample_locus(jet: MongeJet, grid: GridSpec | None = None) -> LocusSample:
    grid = grid or GridSpec()
    if grid.n_theta < 1 or grid.n_phi < 1:
        raise EmptyGrid("grid needs at least one point in each parameter")
    if not np.isfinite(grid.height) or grid.height < 0:
        raise EmptyGrid("height window must be finite and non-negative")
    cls = jet.manifold_class
    if cls == "reg-surface":
        th = grid.thetas()
        dirs = np.stack([np.cos(th), np.sin(th)], axis=1)
        params = np.stack([th, np.zeros_like(th)], axis=1)
        shape = (len(th), 1)
        periodic = True
    elif cls == "sing-surface":
        c = grid.heights()
        dirs = np.stack([np.ones_like(c), c], axis=1)
        params = np.stack([np.zeros_like(c), c], axis=1)
        shape = (1, len(c))
        periodic = False
    elif cls == "reg-3manifold":
        th, ph = grid.thetas(), grid.phis()
        dirs = sphere_directions(th, ph)
        t, p = np.meshgrid(th, ph, indexing="ij")
        params = np.stack([t.ravel(), p.ravel()], axis=1)
        shape = (len(th), len(ph))
        periodic = True
    else:
        th, c = grid.thetas(), grid.heights()
        dirs = cylinder_directions(th, c)
        t, cc = np.meshgrid(th, c, indexing="ij")
        params = np.stack([t.ravel(), cc.ravel()], axis=1)
        shape = (len(th), len(c))
        periodic = True
    return LocusSample(eta(jet, dirs), params, cls, shape, periodic)


# --------------------------------------------------------------------------
# regular 3-manifold frame

@dataclass(frozen=True, eq=False)
class LocusFrame:
    H: np.ndarray
    B1: np.ndarray
    B2: np.ndarray
    B3: np.ndarray
    B4: np.ndarray
    B5: np.ndarray

    def eta(self, theta, phi) -> np.ndarray:
        """Locus point rebuilt from the frame at spherical angles (theta, phi)."""
        theta = np.asarray(theta, dtype=float)[..., None]
        phi = np.asarray(phi, dtype=float)[..., None]
        return (
            self.H
            + (1 + 3 * np.cos(2 * phi)) * self.B1
            + np.cos(2 * theta) * np.sin(phi) ** 2 * self.B2
            + np.sin(2 * theta) * np.sin(phi) ** 2 * self.B3
            + np.cos(theta) * np.sin(2 * phi) * self.B4
            + np.sin(theta) * np.sin(2 * phi) * self.B5
        )

    def vectors(self) -> np.ndarray:
        return np.stack([self.H, self.B1, self.B2, self.B3, self.B4, self.B5], axis=1)


def _require(jet: MongeJet, *classes: str) -> None:
    if jet.manifold_class not in classes:
        raise WrongManifoldClass(f"operation needs {' or '.join(classes)}, got {jet.manifold_class}")


def mean_curvature(jet: MongeJet) -> np.ndarray:
    """One third of the trace of the Hessians (1/n for surfaces)."""
    _require(jet, "reg-3manifold", "reg-surface")
    h = jet.hessians
    return np.trace(h, axis1=1, axis2=2) / jet.source_dim


def locus_frame(jet: MongeJet) -> LocusFrame:
    _require(jet, "reg-3manifold")
    h = jet.hessians
    fxx, fyy, fzz = h[:, 0, 0], h[:, 1, 1], h[:, 2, 2]
    return LocusFrame(
        H=(fxx + fyy + fzz) / 3.0,
        B1=(-fxx - fyy + 2.0 * fzz) / 12.0,
        B2=0.5 * (fxx - fyy),
        B3=h[:, 0, 1].copy(),
        B4=h[:, 0, 2].copy(),
        B5=h[:, 1, 2].copy(),
    )


# --------------------------------------------------------------------------
# classification

def _parabola_type(m: np.ndarray, n: np.ndarray, scale: float, tol: float) -> str:
    n_zero = np.linalg.norm(n) <= tol * scale
    m_zero = np.linalg.norm(m) <= tol * scale
    if n_zero and m_zero:
        return "point"
    if n_zero:
        return "line"
    if scaled_rank(np.stack([m, n], axis=1), scale, tol) == 2:
        return "nondegenerate-parabola"
    return "half-line"


def _ellipse_type(half_diff: np.ndarray, m: np.ndarray, scale: float, tol: float) -> str:
    r = scaled_rank(np.stack([half_diff, m], axis=1), scale, tol)
    if r == 0:
        return "point"
    if r == 1:
        return "segment"
    same_len = abs(half_diff @ half_diff - m @ m) <= tol * scale**2
    orth = abs(half_diff @ m) <= tol * scale**2
    return "circle" if same_len and orth else "ellipse"


def _ep_for_degenerate_parabola(kind: str, l: np.ndarray, d: np.ndarray, scale: float, tol: float):
    """E_p for a line / half-line / point locus of a corank-1 surface in R^4."""
    k = l.shape[0]
    eye = np.eye(k)
    if kind == "point":
        if np.linalg.norm(l) <= tol * scale:
            return eye[:, :2], True
        anchor = l / np.linalg.norm(l)
    else:
        anchor = d / np.linalg.norm(d)
        if scaled_rank(np.stack([l, d], axis=1), scale, tol) == 2:
            return _span_basis(np.stack([l, d], axis=1), scale, tol), False
    # radial cases: the plane through the anchor line closest to the first frame axis
    for axis in range(k):
        w = eye[:, axis] - (eye[:, axis] @ anchor) * anchor
        if np.linalg.norm(w) > 1e-8:
            return np.stack([anchor, w / np.linalg.norm(w)], axis=1), True
    raise AssertionError("unreachable: the normal space has dimension >= 2")


def affine_data(jet: MongeJet, tol: float | None = None):
    """Base point and direction vectors whose affine span is Aff_p."""
    h = jet.hessians
    cls = jet.manifold_class
    if cls == "reg-surface":
        l, m, n = h[:, 0, 0], h[:, 0, 1], h[:, 1, 1]
        return 0.5 * (l + n), np.stack([0.5 * (l - n), m], axis=1)
    if cls == "sing-surface":
        return h[:, 0, 0].copy(), np.stack([h[:, 0, 1], h[:, 1, 1]], axis=1)
    if cls == "reg-3manifold":
        fr = locus_frame(jet)
        return fr.H, np.stack([fr.B1, fr.B2, fr.B3, fr.B4, fr.B5], axis=1)
    l, m, n = h[:, 0, 0], h[:, 0, 1], h[:, 1, 1]
    p, q, r = h[:, 2, 2], h[:, 0, 2], h[:, 1, 2]
    return l.copy(), np.stack([n - l, m, p, q, r], axis=1)


def _three_dim_type(dim: int) -> str:
    if dim >= 3:
        return "nonplanar-surface"
    return {2: "planar-region", 1: "curve", 0: "point"}[dim]


def classify_locus(jet: MongeJet, tol: float | None = None) -> LocusInvariants:
    tol = default_tol() if tol is None else tol
    scale = jet_scale(jet)
    sf = second_form(jet)
    dim_n1 = scaled_rank(sf.matrix, scale, tol)
    base, dirs = affine_data(jet, tol)
    dim_aff = scaled_rank(dirs, scale, tol)
    ep = _span_basis(dirs, scale, tol)
    cls = jet.manifold_class
    h = jet.hessians
    H = None
    h_in = None
    radial = None
    extra = {}

    if cls == "reg-surface":
        kind = _ellipse_type(dirs[:, 0], dirs[:, 1], scale, tol)
        tag = kind
        H = base
        h_in = _in_basis(H, ep, scale, tol)
    elif cls == "sing-surface":
        m, n = h[:, 0, 1], h[:, 1, 1]
        kind = _parabola_type(m, n, scale, tol)
        tag = kind
        if jet.normal_dim == 2:
            ep = np.eye(2)
        elif kind != "nondegenerate-parabola":
            d = n if kind == "half-line" else m
            ep, radial = _ep_for_degenerate_parabola(kind, base, d, scale, tol)
    else:
        kind = _three_dim_type(dim_aff)
        tag = kind
        if cls == "reg-3manifold":
            H = base
            h_in = _in_basis(H, ep, scale, tol)
            if kind == "curve":
                tag = "segment"
        else:
            p, q, r = h[:, 2, 2], h[:, 0, 2], h[:, 1, 2]
            if kind == "curve":
                if np.linalg.norm(p) > tol * scale:
                    tag = "half-line"
                elif max(np.linalg.norm(q), np.linalg.norm(r)) > tol * scale:
                    tag = "line"
                else:
                    tag = "segment"
        if kind == "nonplanar-surface":
            tag = "unclassified-nondegenerate"
    return LocusInvariants(
        manifold_class=cls,
        dim_first_normal=dim_n1,
        dim_affine_hull=dim_aff,
        degenerate_type=kind,
        tag=tag,
        affine_point=base,
        ep_basis=ep,
        mean_curvature=H,
        H_in_Ep=h_in,
        radial=radial,
        extra=extra,
    )


def _in_basis(v: np.ndarray, basis: np.ndarray, scale: float, tol: float) -> bool:
    if basis.shape[1] == 0:
        return bool(np.linalg.norm(v) <= tol * scale)
    resid = v - basis @ (basis.T @ v)
    return bool(np.linalg.norm(resid) <= tol * scale)


def H_in_Ep(jet: MongeJet, tol: float | None = None) -> bool:
    _require(jet, "reg-3manifold", "reg-surface")
    return bool(classify_locus(jet, tol).H_in_Ep)


def ep_basis(jet: MongeJet, tol: float | None = None) -> np.ndarray:
    """Orthonormal basis of E_p following the corank-1 surface conventions."""
    return classify_locus(jet, tol).ep_basis


def sampled_affine_dim(points: np.ndarray, rel_tol: float = 1e-8) -> int:
    """Affine dimension of a point cloud: rank of the centered points."""
    pts = np.asarray(points, dtype=float)
    centered = pts - pts.mean(axis=0)
    s = np.linalg.svd(centered, compute_uv=False)
    ref = max(float(np.max(np.abs(pts))) if pts.size else 0.0, 1e-300)
    return int(np.count_nonzero(s > rel_tol * ref * np.sqrt(len(pts))))
