import os
import subprocess
import sys

import numpy as np
import pytest

from locusmith import _kernels
from locusmith.asymptotics import cubic_coefficients
from locusmith.jet import random_jet

needs_numba = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")


@pytest.fixture(scope="module")
def data():
    rng = np.random.default_rng(21)
    jet = random_jet(rng, 3, 5, 1)
    coeffs = cubic_coefficients(jet)
    grid = _kernels.sphere_grid(90, 45)
    return jet, coeffs, grid, rng.normal(size=(500, 3))


@needs_numba
def test_quadratic_map_backends_agree(data):
    jet, _, _, dirs = data
    a = _kernels.quadratic_map(jet.hessians, dirs, "numpy")
    b = _kernels.quadratic_map(jet.hessians, dirs, "numba")
    np.testing.assert_allclose(a, b, atol=1e-12)


@needs_numba
def test_cubic_backends_agree(data):
    _, coeffs, grid, dirs = data
    np.testing.assert_allclose(
        _kernels.cubic_eval(coeffs, dirs, "numpy"), _kernels.cubic_eval(coeffs, dirs, "numba"), atol=1e-12
    )


@needs_numba
def test_scan_and_bisection_backends_agree(data):
    _, coeffs, grid, _ = data
    values = _kernels.cubic_eval(coeffs, grid.reshape(-1, 3)).reshape(grid.shape[:2])
    tol = 1e-12 * np.max(np.abs(coeffs))
    e_np = _kernels.sign_change_edges(values, tol, "numpy")
    e_nb = _kernels.sign_change_edges(values, tol, "numba")
    for x, y in zip(e_np, e_nb):
        np.testing.assert_array_equal(x, y)
    edges = e_np[0]
    p0, p1 = grid[edges[:, 0], edges[:, 1]], grid[edges[:, 2], edges[:, 3]]
    r_np, v_np = _kernels.bisect_arcs(coeffs, p0, p1, tol, backend="numpy")
    r_nb, v_nb = _kernels.bisect_arcs(coeffs, p0, p1, tol, backend="numba")
    np.testing.assert_allclose(r_np, r_nb, atol=1e-12)
    np.testing.assert_allclose(v_np, v_nb, atol=1e-12)
    assert np.max(np.abs(_kernels.cubic_eval(coeffs, r_np))) < 1e-10 * np.max(np.abs(coeffs))


def test_cubic_eval_matches_monomials(data):
    _, coeffs, _, dirs = data
    mono = np.stack([np.prod(dirs ** np.array(e), axis=1) for e in _kernels.CUBIC_EXPONENTS], axis=1)
    np.testing.assert_allclose(_kernels.cubic_eval(coeffs, dirs, "numpy"), mono @ coeffs, atol=1e-12)


def test_disable_jit_env():
    code = "from locusmith import _kernels; print(_kernels.BACKEND)"
    env = dict(os.environ, LOCUSMITH_DISABLE_JIT="1")
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "numpy"


def test_unknown_backend(data):
    jet, _, _, dirs = data
    with pytest.raises(ValueError):
        _kernels.quadratic_map(jet.hessians, dirs, "fortran")
