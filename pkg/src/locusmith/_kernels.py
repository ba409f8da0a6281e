"""Hot numeric loops: quadratic-map sampling and the asymptotic-cubic sphere scan.

Each kernel has a vectorized numpy implementation and a numba ``@njit`` twin.
The public names dispatch to numba unless ``LOCUSMITH_DISABLE_JIT=1`` is set
or numba cannot be imported.
"""
from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


def _jit_disabled() -> bool:
    return os.environ.get("LOCUSMITH_DISABLE_JIT", "").strip().lower() in ("1", "true", "yes", "on")


BACKEND = "numba" if HAVE_NUMBA and not _jit_disabled() else "numpy"

# exponent order of the 10 monomials of a ternary cubic
CUBIC_EXPONENTS = np.array(
    [
        (3, 0, 0), (2, 1, 0), (2, 0, 1), (1, 2, 0), (1, 1, 1),
        (1, 0, 2), (0, 3, 0), (0, 2, 1), (0, 1, 2), (0, 0, 3),
    ],
    dtype=np.int64,
)


# --------------------------------------------------------------------------
# quadratic map  u -> (u^T H_i u)_i

def quadratic_map_np(hess: np.ndarray, dirs: np.ndarray) -> np.ndarray:
    return np.einsum("ka,iab,kb->ki", dirs, hess, dirs)


@njit(cache=True)
def quadratic_map_nb(hess, dirs):
    npts, n = dirs.shape
    k = hess.shape[0]
    out = np.zeros((npts, k))
    for p in range(npts):
        for i in range(k):
            acc = 0.0
            for a in range(n):
                ua = dirs[p, a]
                if ua == 0.0:
                    continue
                row = 0.0
                for b in range(n):
                    row += hess[i, a, b] * dirs[p, b]
                acc += ua * row
            out[p, i] = acc
    return out


# --------------------------------------------------------------------------
# ternary cubic evaluation

def cubic_eval_np(coeffs: np.ndarray, dirs: np.ndarray) -> np.ndarray:
    a, b, c = dirs[:, 0], dirs[:, 1], dirs[:, 2]
    return (
        coeffs[0] * a**3 + coeffs[1] * a * a * b + coeffs[2] * a * a * c
        + coeffs[3] * a * b * b + coeffs[4] * a * b * c + coeffs[5] * a * c * c
        + coeffs[6] * b**3 + coeffs[7] * b * b * c + coeffs[8] * b * c * c
        + coeffs[9] * c**3
    )


@njit(cache=True)
def _cubic_at(coeffs, a, b, c):
    return (
        coeffs[0] * a * a * a + coeffs[1] * a * a * b + coeffs[2] * a * a * c
        + coeffs[3] * a * b * b + coeffs[4] * a * b * c + coeffs[5] * a * c * c
        + coeffs[6] * b * b * b + coeffs[7] * b * b * c + coeffs[8] * b * c * c
        + coeffs[9] * c * c * c
    )


@njit(cache=True)
def cubic_eval_nb(coeffs, dirs):
    npts = dirs.shape[0]
    out = np.empty(npts)
    for p in range(npts):
        out[p] = _cubic_at(coeffs, dirs[p, 0], dirs[p, 1], dirs[p, 2])
    return out


# --------------------------------------------------------------------------
# sphere grid scan

def sphere_grid(n_theta: int, n_phi: int) -> np.ndarray:
    """Unit vectors on a (n_phi + 1) x n_theta grid; rows run from the north to the south pole."""
    theta = 2.0 * np.pi * np.arange(n_theta) / n_theta
    phi = np.pi * np.arange(n_phi + 1) / n_phi
    st, ct = np.sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    grid = np.empty((n_phi + 1, n_theta, 3))
    grid[:, :, 0] = sp[:, None] * ct[None, :]
    grid[:, :, 1] = sp[:, None] * st[None, :]
    grid[:, :, 2] = cp[:, None]
    grid[0, :, :] = (0.0, 0.0, 1.0)
    grid[-1, :, :] = (0.0, 0.0, -1.0)
    return grid


def sign_change_edges_np(values: np.ndarray, zero_tol: float):
    """Grid edges whose endpoint values have strictly opposite signs.

    Returns ``(edges, nodes)``: ``edges`` is an (E, 4) int array of
    ``(j0, i0, j1, i1)`` and ``nodes`` an (N, 2) array of grid nodes whose
    value is within ``zero_tol`` (the poles are reported once).
    """
    rows, cols = values.shape
    near = np.abs(values) <= zero_tol
    sgn = np.sign(values)
    sgn[near] = 0.0

    jj, ii = np.meshgrid(np.arange(1, rows - 1), np.arange(cols), indexing="ij")
    a = sgn[1:-1, :]
    b = np.roll(sgn, -1, axis=1)[1:-1, :]
    mask = a * b < 0
    th_edges = np.stack([jj[mask], ii[mask], jj[mask], (ii[mask] + 1) % cols], axis=1)

    jj, ii = np.meshgrid(np.arange(rows - 1), np.arange(cols), indexing="ij")
    mask = sgn[:-1, :] * sgn[1:, :] < 0
    ph_edges = np.stack([jj[mask], ii[mask], jj[mask] + 1, ii[mask]], axis=1)

    edges = np.concatenate([th_edges, ph_edges]).astype(np.int64).reshape(-1, 4)

    node_mask = near.copy()
    node_mask[0, 1:] = False
    node_mask[-1, 1:] = False
    nj, ni = np.nonzero(node_mask)
    nodes = np.stack([nj, ni], axis=1).astype(np.int64).reshape(-1, 2)
    return edges, nodes


@njit(cache=True)
def sign_change_edges_nb(values, zero_tol):
    rows, cols = values.shape
    sgn = np.zeros((rows, cols))
    for j in range(rows):
        for i in range(cols):
            v = values[j, i]
            if abs(v) > zero_tol:
                sgn[j, i] = 1.0 if v > 0 else -1.0
    cap = 2 * rows * cols
    edges = np.empty((cap, 4), dtype=np.int64)
    ne = 0
    for j in range(1, rows - 1):
        for i in range(cols):
            i2 = (i + 1) % cols
            if sgn[j, i] * sgn[j, i2] < 0:
                edges[ne, 0] = j
                edges[ne, 1] = i
                edges[ne, 2] = j
                edges[ne, 3] = i2
                ne += 1
    for j in range(rows - 1):
        for i in range(cols):
            if sgn[j, i] * sgn[j + 1, i] < 0:
                edges[ne, 0] = j
                edges[ne, 1] = i
                edges[ne, 2] = j + 1
                edges[ne, 3] = i
                ne += 1
    nodes = np.empty((rows * cols, 2), dtype=np.int64)
    nn = 0
    for j in range(rows):
        for i in range(cols):
            if (j == 0 or j == rows - 1) and i > 0:
                continue
            if sgn[j, i] == 0.0:
                nodes[nn, 0] = j
                nodes[nn, 1] = i
                nn += 1
    return edges[:ne].copy(), nodes[:nn].copy()


# --------------------------------------------------------------------------
# bisection along great-circle arcs

def bisect_arcs_np(coeffs, p0, p1, resid_tol, max_iter=80):
    """Refine one root of the cubic on each arc p0[k] -> p1[k] (endpoint signs differ)."""
    lo = np.zeros(p0.shape[0])
    hi = np.ones(p0.shape[0])
    f_lo = cubic_eval_np(coeffs, p0)
    done = np.zeros(p0.shape[0], dtype=bool)
    best = np.empty_like(p0)
    best_val = np.full(p0.shape[0], np.inf)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        pts = (1.0 - mid)[:, None] * p0 + mid[:, None] * p1
        pts /= np.linalg.norm(pts, axis=1)[:, None]
        fm = cubic_eval_np(coeffs, pts)
        better = (np.abs(fm) < best_val) & ~done
        best[better] = pts[better]
        best_val[better] = np.abs(fm[better])
        done |= np.abs(fm) <= resid_tol
        same = np.sign(fm) == np.sign(f_lo)
        lo = np.where(same & ~done, mid, lo)
        f_lo = np.where(same & ~done, fm, f_lo)
        hi = np.where(~same & ~done, mid, hi)
        if done.all():
            break
    return best, best_val


@njit(cache=True)
def bisect_arcs_nb(coeffs, p0, p1, resid_tol, max_iter=80):
    n = p0.shape[0]
    best = np.empty((n, 3))
    best_val = np.empty(n)
    for k in range(n):
        lo = 0.0
        hi = 1.0
        f_lo = _cubic_at(coeffs, p0[k, 0], p0[k, 1], p0[k, 2])
        bv = np.inf
        bx = 0.0
        by = 0.0
        bz = 0.0
        for _ in range(max_iter):
            mid = 0.5 * (lo + hi)
            x = (1.0 - mid) * p0[k, 0] + mid * p1[k, 0]
            y = (1.0 - mid) * p0[k, 1] + mid * p1[k, 1]
            z = (1.0 - mid) * p0[k, 2] + mid * p1[k, 2]
            r = np.sqrt(x * x + y * y + z * z)
            x /= r
            y /= r
            z /= r
            fm = _cubic_at(coeffs, x, y, z)
            if abs(fm) < bv:
                bv = abs(fm)
                bx = x
                by = y
                bz = z
            if abs(fm) <= resid_tol:
                break
            if (fm > 0) == (f_lo > 0):
                lo = mid
                f_lo = fm
            else:
                hi = mid
        best[k, 0] = bx
        best[k, 1] = by
        best[k, 2] = bz
        best_val[k] = bv
    return best, best_val


# --------------------------------------------------------------------------
# dispatch

def _pick(np_impl, nb_impl, backend):
    b = backend or BACKEND
    if b == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend requested but numba is not installed")
        return nb_impl
    if b == "numpy":
        return np_impl
    raise ValueError(f"unknown backend {b!r}")


def quadratic_map(hess, dirs, backend=None):
    f = _pick(quadratic_map_np, quadratic_map_nb, backend)
    return f(np.ascontiguousarray(hess, dtype=float), np.ascontiguousarray(dirs, dtype=float))


def cubic_eval(coeffs, dirs, backend=None):
    f = _pick(cubic_eval_np, cubic_eval_nb, backend)
    return f(np.ascontiguousarray(coeffs, dtype=float), np.ascontiguousarray(dirs, dtype=float))


def sign_change_edges(values, zero_tol, backend=None):
    f = _pick(sign_change_edges_np, sign_change_edges_nb, backend)
    return f(np.ascontiguousarray(values, dtype=float), float(zero_tol))


def bisect_arcs(coeffs, p0, p1, resid_tol, max_iter=80, backend=None):
    f = _pick(bisect_arcs_np, bisect_arcs_nb, backend)
    return f(
        np.ascontiguousarray(coeffs, dtype=float),
        np.ascontiguousarray(p0, dtype=float),
        np.ascontiguousarray(p1, dtype=float),
        float(resid_tol),
        int(max_iter),
    )
