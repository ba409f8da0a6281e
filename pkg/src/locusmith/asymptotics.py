"""Asymptotic and binormal directions, A^2-orbits of corank-1 2-jets and the infinite direction."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from . import _kernels
from .errors import NonConvergentLimit, UndefinedForType, WrongManifoldClass, ZeroDirection
from .forms import evaluate_II
from .jet import MongeJet, as_vector, canonical_sign, default_tol, projective_angle, rank_with_tolerance
from .loci import classify_locus, ep_basis, jet_scale

BINORMAL_TOL = 1e-8
ROOT_RESIDUAL = 1e-12
SCAN_GRID = (720, 360)
MAX_TOUCH_CANDIDATES = 400

BEST_ORBIT = "(x,y,xz,yz,z^2)"
ORBITS = (
    BEST_ORBIT,
    "(x,y,z^2,xz,0)",
    "(x,y,xz,yz,0)",
    "(x,y,z^2,0,0)",
    "(x,y,xz,0,0)",
    "(x,y,0,0,0)",
)
_SURFACE_ORBITS = {
    4: {
        "nondegenerate-parabola": "(x,xy,y^2,0)",
        "half-line": "(x,y^2,0,0)",
        "line": "(x,xy,0,0)",
        "point": "(x,0,0,0)",
    },
    3: {
        "nondegenerate-parabola": "(x,xy,y^2)",
        "half-line": "(x,y^2,0)",
        "line": "(x,xy,0)",
        "point": "(x,0,0)",
    },
}


# --------------------------------------------------------------------------
# the matrix A(u) and its determinant

def a_matrix(jet: MongeJet, u) -> np.ndarray:
    """A(u)[i, j] = <II(e_j, u), n_i>, shape (normal_dim, source_dim)."""
    u = as_vector(u, jet.source_dim)
    return np.einsum("iab,b->ia", jet.hessians, u)


def _restriction(jet: MongeJet) -> np.ndarray | None:
    """Columns spanning the normal plane binormals must live in, or None for the full normal space."""
    if jet.manifold_class == "sing-surface" and jet.normal_dim == 3:
        return ep_basis(jet)
    return None


def _square_system(jet: MongeJet) -> None:
    k = jet.normal_dim
    if jet.manifold_class == "sing-surface":
        return
    if k != jet.source_dim:
        raise WrongManifoldClass(
            f"asymptotic directions need as many normal as tangent directions; "
            f"{jet.manifold_class} in R^{jet.ambient_dim} has {k} normal directions"
        )


def cubic_coefficients(jet: MongeJet) -> np.ndarray:
    """Coefficients of D(u) = det A(u) in the order of ``CUBIC_EXPONENTS`` (exact expansion)."""
    h = jet.hessians
    if h.shape != (3, 3, 3):
        raise WrongManifoldClass("the asymptotic cubic is defined for 3-manifolds with three normal directions")
    index = {tuple(e): i for i, e in enumerate(_kernels.CUBIC_EXPONENTS)}
    out = np.zeros(10)
    for perm in itertools.permutations(range(3)):
        sign = np.linalg.det(np.eye(3)[list(perm)])
        for js in itertools.product(range(3), repeat=3):
            coeff = h[0, perm[0], js[0]] * h[1, perm[1], js[1]] * h[2, perm[2], js[2]]
            if coeff == 0.0:
                continue
            exps = [0, 0, 0]
            for j in js:
                exps[j] += 1
            out[index[tuple(exps)]] += sign * coeff
    return out


def quadratic_coefficients(jet: MongeJet) -> np.ndarray:
    """Coefficients (a^2, ab, b^2) of det(E^T A(u)) for a surface jet."""
    c0 = jet.hessians[:, :, 0]
    c1 = jet.hessians[:, :, 1]
    e = _restriction(jet)
    if e is not None:
        c0, c1 = e.T @ c0, e.T @ c1
    mixed = c0[0, 0] * c1[1, 1] + c1[0, 0] * c0[1, 1] - c0[0, 1] * c1[1, 0] - c1[0, 1] * c0[1, 0]
    return np.array([np.linalg.det(c0), mixed, np.linalg.det(c1)])


def binary_form_roots(coeffs, rel_tol: float = 1e-7) -> np.ndarray:
    """Real projective roots of sum_k c_k a^(d-k) b^k, as unit rows (a, b) with canonical sign."""
    c = np.asarray(coeffs, dtype=float)
    scale = np.max(np.abs(c)) if c.size else 0.0
    if scale == 0.0:
        raise ValueError("the zero form vanishes everywhere")
    roots = []
    if abs(c[-1]) <= 1e-14 * scale:
        roots.append(np.array([0.0, 1.0]))
    poly = c[::-1].copy()  # highest power of t = b / a first
    while poly.size and abs(poly[0]) <= 1e-14 * scale:
        poly = poly[1:]
    if poly.size > 1:
        for t in np.roots(poly):
            if abs(t.imag) <= rel_tol * (1.0 + abs(t)):
                roots.append(np.array([1.0, t.real]))
    out = []
    for r in roots:
        r = canonical_sign(r / np.linalg.norm(r)) + 0.0
        if not any(projective_angle(r, s) < 1e-7 for s in out):
            out.append(r)
    out.sort(key=tuple)
    return np.array(out).reshape(-1, 2)


# --------------------------------------------------------------------------
# root finding on the sphere

def _dedupe(points: np.ndarray, decimals: int = 9) -> np.ndarray:
    if points.size == 0:
        return points.reshape(0, 3)
    pts = points / np.linalg.norm(points, axis=1)[:, None]
    pts = np.array([canonical_sign(p, tol=1e-9) for p in pts])
    key = np.round(pts, decimals) + 0.0
    _, idx = np.unique(key, axis=0, return_index=True)
    pts = pts[np.sort(idx)]
    order = np.lexsort(np.round(pts, decimals).T[::-1])
    return pts[order]


def _touch_roots(coeffs, grid, values, scale, backend):
    """Zeros where D touches zero without changing sign (acnodes, doubled components)."""
    a = np.abs(values)
    rows, cols = a.shape
    inner = a[1:-1]
    left = np.roll(a, 1, axis=1)[1:-1]
    right = np.roll(a, -1, axis=1)[1:-1]
    up, down = a[:-2], a[2:]
    sv = np.sign(values)
    same = (
        (sv[1:-1] == np.roll(sv, 1, axis=1)[1:-1])
        & (sv[1:-1] == np.roll(sv, -1, axis=1)[1:-1])
        & (sv[1:-1] == sv[:-2]) & (sv[1:-1] == sv[2:])
    )
    mask = (inner <= left) & (inner <= right) & (inner <= up) & (inner <= down) & same
    mask &= inner > ROOT_RESIDUAL * scale
    mask &= inner < 1e-2 * scale
    jj, ii = np.nonzero(mask)
    cand = [grid[j + 1, i] for j, i in zip(jj, ii)]
    for pole in (0, rows - 1):
        nb = a[1] if pole == 0 else a[-2]
        if ROOT_RESIDUAL * scale < a[pole, 0] < 1e-2 * scale and a[pole, 0] <= nb.min():
            cand.append(grid[pole, 0])
    if not cand:
        return np.zeros((0, 3))
    cand = np.array(cand)
    if len(cand) > MAX_TOUCH_CANDIDATES:
        cand = cand[np.linspace(0, len(cand) - 1, MAX_TOUCH_CANDIDATES).astype(int)]
    found = []
    for x0 in cand:
        t1 = np.cross(x0, [1.0, 0.0, 0.0] if abs(x0[0]) < 0.9 else [0.0, 1.0, 0.0])
        t1 /= np.linalg.norm(t1)
        t2 = np.cross(x0, t1)

        def resid(st, x0=x0, t1=t1, t2=t2):
            v = x0 + st[0] * t1 + st[1] * t2
            v = v / np.linalg.norm(v)
            return _kernels.cubic_eval(coeffs, v[None, :], backend) / scale

        sol = least_squares(resid, np.zeros(2), method="trf", xtol=1e-15, ftol=1e-15, gtol=1e-15)
        v = x0 + sol.x[0] * t1 + sol.x[1] * t2
        v /= np.linalg.norm(v)
        if abs(_kernels.cubic_eval(coeffs, v[None, :], backend)[0]) < ROOT_RESIDUAL * scale:
            found.append(v)
    return np.array(found).reshape(-1, 3)


def cubic_sphere_roots(coeffs, grid=SCAN_GRID, backend=None) -> np.ndarray:
    """Sampled real zero set of a ternary cubic on the unit sphere, one representative per line."""
    coeffs = np.asarray(coeffs, dtype=float)
    scale = float(np.max(np.abs(coeffs)))
    if scale == 0.0:
        raise ValueError("the zero cubic vanishes everywhere")
    n_theta, n_phi = grid
    g = _kernels.sphere_grid(n_theta, n_phi)
    values = _kernels.cubic_eval(coeffs, g.reshape(-1, 3), backend).reshape(g.shape[:2])
    tol = ROOT_RESIDUAL * scale
    edges, nodes = _kernels.sign_change_edges(values, tol, backend)
    parts = [g[nodes[:, 0], nodes[:, 1]]]
    if len(edges):
        p0 = g[edges[:, 0], edges[:, 1]]
        p1 = g[edges[:, 2], edges[:, 3]]
        pts, res = _kernels.bisect_arcs(coeffs, p0, p1, tol, backend=backend)
        parts.append(pts[res <= tol])
    parts.append(_touch_roots(coeffs, g, values, scale, backend))
    return _dedupe(np.concatenate(parts))


# --------------------------------------------------------------------------
# public types

@dataclass
class AsymptoticCubic:
    """det A(u) as a homogeneous form together with its sampled real zero set.

    For 3-manifolds ``coefficients`` follow ``CUBIC_EXPONENTS`` and the roots
    sample the (generically one-dimensional) projective zero curve. For
    corank-1 surfaces the form is the binary quadratic det(E_p^T A(u)).
    """

    coefficients: np.ndarray
    degree: int
    roots: np.ndarray
    binormals: np.ndarray
    binormal_residuals: np.ndarray
    all_directions: bool
    manifold_class: str
    restriction: np.ndarray | None = None

    @property
    def scale(self) -> float:
        s = float(np.max(np.abs(self.coefficients)))
        return s if s > 0.0 else 1.0

    def evaluate(self, u) -> float:
        u = np.asarray(u, dtype=float)
        if self.degree == 3:
            return float(_kernels.cubic_eval(self.coefficients, u.reshape(1, 3))[0])
        a, b = u
        c = self.coefficients
        return float(c[0] * a * a + c[1] * a * b + c[2] * b * b)

    def is_root(self, u, tol: float = 1e-10) -> bool:
        u = np.asarray(u, dtype=float)
        nu = np.linalg.norm(u)
        if nu == 0.0:
            raise ZeroDirection("zero vector is not a direction")
        return self.all_directions or abs(self.evaluate(u / nu)) <= tol * self.scale

    def nearest_root(self, u):
        """Index and projective angle of the sampled root closest to ``u``."""
        if len(self.roots) == 0:
            return None, np.inf
        angles = [projective_angle(u, r) for r in self.roots]
        k = int(np.argmin(angles))
        return k, angles[k]

    @property
    def is_curve(self) -> bool:
        return self.degree == 3 and not self.all_directions and len(self.roots) > 8


def _binormals(jet: MongeJet, roots: np.ndarray, restriction):
    if len(roots) == 0:
        return np.zeros((0, jet.normal_dim)), np.zeros(0)
    a = np.einsum("iab,kb->kia", jet.hessians, roots)
    if restriction is not None:
        a = np.einsum("ij,kia->kja", restriction, a)
    u, s, _ = np.linalg.svd(a)
    nu = u[:, :, -1]
    smax = np.where(s[:, 0] > 0, s[:, 0], 1.0)
    rel = s[:, -1] / smax if s.shape[1] == a.shape[1] else np.zeros(len(roots))
    if restriction is not None:
        nu = nu @ restriction.T
    nu = np.array([canonical_sign(v) for v in nu]) + 0.0
    return nu, rel


def asymptotic_cubic(jet: MongeJet, grid=SCAN_GRID, backend=None) -> AsymptoticCubic:
    _square_system(jet)
    restriction = _restriction(jet)
    if jet.source_dim == 3:
        coeffs = cubic_coefficients(jet)
        degree = 3
    else:
        coeffs = quadratic_coefficients(jet)
        degree = 2
    if not np.any(np.abs(coeffs) > 1e-14 * jet_scale(jet) ** degree):
        return AsymptoticCubic(
            coeffs, degree, np.zeros((0, jet.source_dim)), np.zeros((0, jet.normal_dim)),
            np.zeros(0), True, jet.manifold_class, restriction,
        )
    if degree == 3:
        roots = cubic_sphere_roots(coeffs, grid, backend)
    else:
        roots = binary_form_roots(coeffs)
    nu, rel = _binormals(jet, roots, restriction)
    return AsymptoticCubic(coeffs, degree, roots, nu, rel, False, jet.manifold_class, restriction)


@dataclass
class AsymptoticTest:
    asymptotic: bool
    witness: np.ndarray | None
    kind: str | None  # "binormal", "degenerate" or None
    residual: float

    def __bool__(self):
        return self.asymptotic

    def __iter__(self):
        yield self.asymptotic
        yield self.witness


def is_asymptotic(jet: MongeJet, u, tol: float = BINORMAL_TOL) -> AsymptoticTest:
    """Is some nonzero normal nu orthogonal to II(u, v) for every tangent v?

    For corank-1 surfaces in R^4 only nu in E_p make ``u`` asymptotic; a
    solution outside E_p is returned with kind ``"degenerate"``.
    """
    _square_system(jet)
    u = as_vector(u, jet.source_dim)
    if not np.any(u):
        raise ZeroDirection("asymptotic test needs a nonzero direction")
    u = u / np.linalg.norm(u)
    a = a_matrix(jet, u)
    restriction = _restriction(jet)
    if restriction is not None:
        nu_r, rel_r = _left_null(restriction.T @ a)
        if rel_r < tol:
            return AsymptoticTest(True, canonical_sign(restriction @ nu_r) + 0.0, "binormal", rel_r)
        nu, rel = _left_null(a)
        return AsymptoticTest(False, nu, "degenerate" if rel < tol else None, rel_r)
    nu, rel = _left_null(a)
    if rel < tol:
        return AsymptoticTest(True, nu, "binormal", rel + 0.0)
    return AsymptoticTest(False, None, None, rel)


def _left_null(a: np.ndarray):
    u, s, _ = np.linalg.svd(a)
    nu = canonical_sign(u[:, -1]) + 0.0
    if s.size == 0 or s[0] == 0.0:
        return nu, 0.0  # A(u) = 0: every normal works
    if s.size < a.shape[0]:
        return nu, 0.0
    return nu, float(s[-1] / s[0])


# --------------------------------------------------------------------------
# four-way equivalence

@dataclass
class EquivalenceReport:
    directions: np.ndarray
    measures: np.ndarray  # columns: definition, cubic, hessian kernel, tangency (nan when skipped)
    decisions: np.ndarray  # +1 asymptotic, -1 not, 0 undecided
    disagreements: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements


# per test: below the first value counts as asymptotic, above the second as not
_THRESHOLDS = ((1e-6, 1e-3), (1e-6, 1e-3), (1e-6, 1e-3), (1e-4, 1e-2))


def _definition_measure(jet: MongeJet, u: np.ndarray) -> float:
    cols = [evaluate_II(jet, e, u) for e in np.eye(jet.source_dim)]
    m = np.stack(cols, axis=1)
    s = np.linalg.svd(m, compute_uv=False)
    return 0.0 if s[0] == 0.0 else float(s[-1] / s[0])


def _kernel_measure(jet: MongeJet, u: np.ndarray) -> float:
    k = np.stack([h @ u for h in jet.hessians], axis=1)  # Hess h_nu u = k @ nu
    w = np.linalg.eigvalsh(k.T @ k)
    top = w[-1]
    return 0.0 if top <= 0.0 else float(np.sqrt(max(w[0], 0.0) / top))


def _tangency_measure(jet: MongeJet, u: np.ndarray, step: float = 1e-4) -> float:
    """Linear dependence of eta(u) and the two chart derivatives of the locus at u."""
    if jet.corank == 1:
        r = np.hypot(u[0], u[1])
        w = u / r
        theta = np.arctan2(w[1], w[0])
        t1 = np.array([-np.sin(theta), np.cos(theta), 0.0])
        t2 = np.array([0.0, 0.0, 1.0])
    else:
        w = u / np.linalg.norm(u)
        t1 = np.cross(w, [1.0, 0.0, 0.0] if abs(w[0]) < 0.9 else [0.0, 1.0, 0.0])
        t1 /= np.linalg.norm(t1)
        t2 = np.cross(w, t1)

    def eta(v):
        return evaluate_II(jet, v)

    d1 = (eta(w + step * t1) - eta(w - step * t1)) / (2 * step)
    d2 = (eta(w + step * t2) - eta(w - step * t2)) / (2 * step)
    cols = []
    for c in (eta(w), d1, d2):
        n = np.linalg.norm(c)
        if n <= 1e-12 * jet_scale(jet):
            return 0.0
        cols.append(c / n)
    s = np.linalg.svd(np.stack(cols, axis=1), compute_uv=False)
    return float(s[-1])


def equivalence_check(jet: MongeJet, probes: int = 200, max_roots: int = 100, seed: int = 0, cubic=None) -> EquivalenceReport:
    """Cross-check four independent characterizations of asymptotic directions."""
    if jet.source_dim != 3:
        raise WrongManifoldClass("the four-way check is stated for 3-manifolds")
    cubic = cubic or asymptotic_cubic(jet)
    rng = np.random.default_rng(seed)
    rand = rng.normal(size=(probes, 3))
    rand /= np.linalg.norm(rand, axis=1)[:, None]
    roots = cubic.roots
    if len(roots) > max_roots:
        roots = roots[np.linspace(0, len(roots) - 1, max_roots).astype(int)]
    dirs = np.concatenate([roots, rand])
    if jet.corank == 1:
        dirs = np.concatenate([dirs, [[0.0, 0.0, 1.0]]])
    coeff_scale = max(float(np.max(np.abs(cubic.coefficients))), 1e-300)
    measures = np.full((len(dirs), 4), np.nan)
    decisions = np.zeros((len(dirs), 4), dtype=int)
    disagreements = []
    null_axis = np.array([0.0, 0.0, 1.0])
    for k, u in enumerate(dirs):
        if jet.is_zero():
            measures[k, :3] = 0.0
        else:
            measures[k, 0] = _definition_measure(jet, u)
            measures[k, 1] = 0.0 if cubic.all_directions else abs(cubic.evaluate(u)) / coeff_scale
            measures[k, 2] = _kernel_measure(jet, u)
        non_null = jet.corank == 0 or projective_angle(u, null_axis) > 1e-6
        if non_null:
            measures[k, 3] = 0.0 if jet.is_zero() else _tangency_measure(jet, u)
        for t, (yes, no) in enumerate(_THRESHOLDS):
            m = measures[k, t]
            if np.isnan(m):
                continue
            decisions[k, t] = 1 if m < yes else (-1 if m > no else 0)
        row = decisions[k]
        if (row == 1).any() and (row == -1).any():
            disagreements.append((u, measures[k].copy()))
    return EquivalenceReport(dirs, measures, decisions, disagreements)


# --------------------------------------------------------------------------
# orbits

@dataclass(frozen=True)
class OrbitLabel:
    label: str
    rank_alpha: int
    p_zero: bool
    alpha: np.ndarray = field(repr=False, compare=False)

    @property
    def is_best(self) -> bool:
        return self.label == BEST_ORBIT

    @property
    def det_alpha(self) -> float:
        return float(np.linalg.det(self.alpha))

    def __str__(self):
        return self.label


def alpha_matrix(jet: MongeJet) -> np.ndarray:
    """Columns: coefficients of z^2, xz and yz in each normal coordinate."""
    q = jet.quad
    return np.stack([q[:, 2, 2], 2.0 * q[:, 0, 2], 2.0 * q[:, 1, 2]], axis=1)


def classify_orbit(jet: MongeJet, tol: float | None = None) -> OrbitLabel:
    if jet.manifold_class != "sing-3manifold" or jet.ambient_dim != 5:
        raise WrongManifoldClass("orbits are classified for corank-1 jets (R^3,0) -> (R^5,0)")
    tol = default_tol() if tol is None else tol
    alpha = alpha_matrix(jet)
    scale = float(np.max(np.abs(jet.quad))) if jet.quad.size else 0.0
    if scale == 0.0 or np.max(np.abs(alpha)) <= tol * scale:
        return OrbitLabel(ORBITS[5], 0, True, alpha)
    rank = rank_with_tolerance(alpha, tol)
    p_zero = bool(np.linalg.norm(alpha[:, 0]) <= tol * np.linalg.norm(alpha))
    if rank == 3:
        label = ORBITS[0]
    elif rank == 2:
        label = ORBITS[2] if p_zero else ORBITS[1]
    else:
        label = ORBITS[4] if p_zero else ORBITS[3]
    return OrbitLabel(label, rank, p_zero, alpha)


@dataclass(frozen=True)
class SurfaceOrbit:
    parabola_type: str
    label: str


def classify_surface_jet(jet: MongeJet, tol: float | None = None) -> SurfaceOrbit:
    if jet.manifold_class != "sing-surface":
        raise WrongManifoldClass("surface orbits are defined for corank-1 surfaces in R^3 or R^4")
    kind = classify_locus(jet, tol).degenerate_type
    return SurfaceOrbit(kind, _SURFACE_ORBITS[jet.ambient_dim][kind])


def normal_form_jet(label: str) -> MongeJet:
    """The quadratic normal form of one of the six corank-1 orbits."""
    from .jet import make_jet

    if label not in ORBITS:
        raise ValueError(f"unknown orbit {label!r}")
    comps = label.strip("()").split(",")[2:]
    # "xz" -> "x*z"; "z^2" already parses
    table = [(i + 3, "*".join(c) if c.isalpha() else c, 1.0) for i, c in enumerate(comps) if c != "0"]
    return make_jet(table, source_dim=3, ambient_dim=5, corank=1)


# --------------------------------------------------------------------------
# regular vs projected

@dataclass
class CorrespondenceReport:
    root_distance: float  # projective, symmetric, after the source rotation
    binormal_angle: float
    u_asymptotic: bool
    orbit: OrbitLabel
    det_alpha: float
    consistent_orbit: bool
    rotation: np.ndarray = field(repr=False)
    all_directions: bool = False

    def passed(self, tol: float = 1e-6) -> bool:
        return self.root_distance < tol and self.binormal_angle < tol and self.consistent_orbit


def _project_to_zero_set(coeffs, points, scale):
    out = []
    for x0 in points:
        t1 = np.cross(x0, [1.0, 0.0, 0.0] if abs(x0[0]) < 0.9 else [0.0, 1.0, 0.0])
        t1 /= np.linalg.norm(t1)
        t2 = np.cross(x0, t1)

        def resid(st, x0=x0, t1=t1, t2=t2):
            v = x0 + st[0] * t1 + st[1] * t2
            v = v / np.linalg.norm(v)
            return np.concatenate([_kernels.cubic_eval(coeffs, v[None, :]) / scale, 1e-3 * st])

        sol = least_squares(resid, np.zeros(2), xtol=1e-15, ftol=1e-15, gtol=1e-15)
        v = x0 + sol.x[0] * t1 + sol.x[1] * t2
        v /= np.linalg.norm(v)
        if abs(_kernels.cubic_eval(coeffs, v[None, :])[0]) > 1e-10 * scale:
            out.append(np.inf)
        else:
            out.append(projective_angle(v, x0))
    return np.array(out)


def projection_asymptotic_correspondence(jet: MongeJet, u, max_roots: int = 60) -> CorrespondenceReport:
    """Asymptotic data of a regular 3-manifold against its projection along ``u``."""
    from .sections import project_along, projection_rotation

    if jet.manifold_class != "reg-3manifold" or jet.ambient_dim != 6:
        raise WrongManifoldClass("the correspondence is stated for regular 3-manifolds in R^6")
    rot = projection_rotation(jet, u)
    proj = project_along(jet, u)
    reg = asymptotic_cubic(jet)
    sing = asymptotic_cubic(proj)
    orbit = classify_orbit(proj)
    u_vec = rot[:, -1]
    u_asym = bool(is_asymptotic(jet, u_vec))
    consistent = u_asym == (not orbit.is_best)
    if reg.all_directions or sing.all_directions:
        same = reg.all_directions and sing.all_directions
        return CorrespondenceReport(0.0 if same else np.inf, 0.0, u_asym, orbit, orbit.det_alpha, consistent, rot, same)

    def pick(r):
        return r if len(r) <= max_roots else r[np.linspace(0, len(r) - 1, max_roots).astype(int)]

    mapped = pick(sing.roots) @ rot.T  # singular roots in the regular source frame
    back = pick(reg.roots) @ rot  # regular roots in the singular source frame
    d1 = _project_to_zero_set(reg.coefficients, mapped, reg.scale)
    d2 = _project_to_zero_set(sing.coefficients, back, sing.scale)
    dist = float(max(d1.max(initial=0.0), d2.max(initial=0.0)))

    worst = 0.0
    for s, nu_s in zip(pick(sing.roots), pick(sing.binormals)):
        res = is_asymptotic(jet, rot @ s)
        if res.witness is None:
            worst = np.inf
            break
        worst = max(worst, projective_angle(res.witness, nu_s))
    return CorrespondenceReport(dist, worst, u_asym, orbit, orbit.det_alpha, consistent, rot)


# --------------------------------------------------------------------------
# the null direction as a point of the locus

@dataclass
class InfinityData:
    kind: str
    eta: np.ndarray | None
    d_theta: np.ndarray | None
    d_phi: np.ndarray | None
    infinite_asymptotic: bool


def _unit(v):
    n = np.linalg.norm(v)
    return v / n if n > 0 else v


def _limit_direction(jet: MongeJet, thetas=None) -> np.ndarray:
    """lim eta(theta, phi) / |eta| as phi -> 0, checked to be Cauchy and theta-independent."""
    thetas = np.linspace(0.0, 2 * np.pi, 8, endpoint=False) if thetas is None else thetas
    phis = (1e-3, 1e-4, 1e-5)
    limits = []
    for t in thetas:
        vals = []
        for p in phis:
            w = np.array([np.cos(t), np.sin(t), np.cos(p) / np.sin(p)])
            vals.append(_unit(evaluate_II(jet, w)))
        v3, v4, v5 = vals
        if np.linalg.norm(v5 - v4) > 1e-3 or np.linalg.norm(v4 - v3) > 1e-2:
            raise NonConvergentLimit(f"normalized locus does not settle as phi -> 0 at theta={t:.3f}")
        limits.append(_unit(v5 + (v5 - v4) / 9.0))
    limits = np.array(limits)
    if np.max(np.linalg.norm(limits - limits[0], axis=1)) > 1e-3:
        raise NonConvergentLimit("limit of the normalized locus depends on theta")
    return _unit(limits.mean(axis=0))


def eta_at_infinity(jet: MongeJet, tol: float | None = None) -> InfinityData:
    """Value and tangent data assigned to the null tangent direction."""
    if jet.corank != 1:
        raise WrongManifoldClass("the infinite direction exists only for corank-1 jets")
    inv = classify_locus(jet, tol)
    kind = inv.degenerate_type
    h = jet.hessians
    if jet.source_dim == 2:
        asym = bool(is_asymptotic(jet, [0.0, 1.0]))
        l, m, n = h[:, 0, 0], h[:, 0, 1], h[:, 1, 1]
        if kind == "nondegenerate-parabola":
            raise UndefinedForType("eta at infinity is not defined for a nondegenerate parabola")
        if kind == "point":
            z = np.zeros_like(l)
            return InfinityData(kind, l.copy(), z, None, asym)
        for y in (1.0, 2.0):
            d = 2.0 * m + 2.0 * n * y
            if np.linalg.norm(d) > 0:
                break
        d = _unit(d)
        return InfinityData(kind, d, d.copy(), None, asym)

    asym = bool(is_asymptotic(jet, [0.0, 0.0, 1.0])) if jet.normal_dim == 3 else False
    base, dirs = inv.affine_point, inv.ep_basis
    if kind == "point":
        z = np.zeros_like(base)
        return InfinityData(kind, base.copy(), z, z.copy(), asym)
    if kind == "curve":
        d = canonical_sign(_unit(dirs[:, 0])) + 0.0
        p = h[:, 2, 2]
        if np.linalg.norm(p) > 0:
            d = _unit(p)
        return InfinityData(inv.tag, d, d.copy(), None, asym)
    if kind == "planar-region":
        d_theta = None
        for t, c in ((np.pi / 4, 1.0), (np.pi / 3, 0.5), (1.0, 2.0)):
            w = np.array([np.cos(t), np.sin(t), c])
            wt = np.array([-np.sin(t), np.cos(t), 0.0])
            d = 2.0 * evaluate_II(jet, w, wt)
            if np.linalg.norm(d) > 1e-12 * jet_scale(jet):
                d_theta = _unit(d)
                break
        if d_theta is None:
            d_theta = _unit(dirs[:, 0])
        perp = dirs[:, 1] - (dirs[:, 1] @ d_theta) * d_theta
        if np.linalg.norm(perp) < 1e-12:
            perp = dirs[:, 0] - (dirs[:, 0] @ d_theta) * d_theta
        try:
            limit = _limit_direction(jet)
        except NonConvergentLimit:
            limit = None
        return InfinityData(kind, limit, d_theta, _unit(perp), asym)
    return InfinityData(kind, _limit_direction(jet), None, None, asym)


# --------------------------------------------------------------------------
# sections versus the parent 3-manifold

def restricted_roots(jet: MongeJet, basis: np.ndarray) -> np.ndarray:
    """Real zeros of D on the plane spanned by the two columns of ``basis`` (plane coordinates)."""
    coeffs = cubic_coefficients(jet)
    # binary cubic through exact interpolation at four directions
    s = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, -1.0]])
    vals = _kernels.cubic_eval(coeffs, s @ basis.T)
    mono = np.stack([s[:, 0] ** (3 - k) * s[:, 1] ** k for k in range(4)], axis=1)
    binary = np.linalg.solve(mono, vals)
    if np.max(np.abs(binary)) <= 1e-14 * max(np.max(np.abs(coeffs)), 1e-300):
        return np.zeros((0, 2))
    return binary_form_roots(binary)


def section_asymptotic_comparison(jet: MongeJet, direction):
    """Asymptotic directions of a normal section against those of the parent on the section plane.

    Returns ``(section_roots, parent_roots, aff_equals_ep)`` with both root
    sets expressed in the section's source coordinates.
    """
    from .sections import normal_section, section_basis

    sec = normal_section(jet, direction)
    basis, _, _ = section_basis(jet, direction)
    sec_cubic = asymptotic_cubic(sec)
    inv = classify_locus(sec)
    aff_eq = inv.degenerate_type == "nondegenerate-parabola" and _aff_through_origin(inv)
    return sec_cubic.roots, restricted_roots(jet, basis), aff_eq


def _aff_through_origin(inv) -> bool:
    p = inv.affine_point
    e = inv.ep_basis
    resid = p - e @ (e.T @ p)
    return bool(np.linalg.norm(resid) <= 1e-9 * max(1.0, np.linalg.norm(p)))
