import os
import subprocess
import sys

import numpy as np
import pytest

from tempocorr import _kernels
from tempocorr.states import make_rng, random_density

import oracles


def _herm(n, seed):
    rng = make_rng(seed)
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (a + a.conj().T) / 2


EIGH_PATHS = {
    "jacobi-python": _kernels.jacobi_eigh_py,
    "jacobi-compiled": _kernels._jacobi_eigh_nb,
    "numpy": lambda a, *args: _kernels.eigh_numpy(a),
}


@pytest.mark.parametrize("path", list(EIGH_PATHS))
@pytest.mark.parametrize("n", [1, 2, 3, 4, 9, 16])
def test_eigh_reconstructs(path, n):
    a = _herm(n, n)
    w, v = EIGH_PATHS[path](a.copy(), _kernels.JACOBI_TOL, _kernels.JACOBI_MAX_SWEEPS)
    assert np.all(np.diff(w) <= 1e-12)
    np.testing.assert_allclose(v.conj().T @ v, np.eye(n), atol=1e-11)
    np.testing.assert_allclose((v * w) @ v.conj().T, a, atol=1e-10)
    np.testing.assert_allclose(w, np.sort(np.linalg.eigvalsh(a))[::-1], atol=1e-10)


def test_jacobi_degenerate_and_diagonal():
    w, v = _kernels._jacobi_eigh_nb(np.diag([1.0, 3.0, 3.0, -2.0]).astype(complex), 1e-12, 100)
    np.testing.assert_allclose(w, [3, 3, 1, -2])
    w, _ = _kernels._jacobi_eigh_nb(np.eye(4, dtype=complex) / 4, 1e-12, 100)
    np.testing.assert_allclose(w, 0.25)


@pytest.mark.parametrize("seed", range(6))
def test_concurrence_paths_agree_with_textbook_form(seed):
    rho = random_density(4, seed=seed, rank=1 + seed % 4).mat
    ref = oracles.wootters_concurrence(rho)
    yy = _kernels._YY
    assert _kernels.concurrence_py(rho, yy, _kernels.WOOTTERS_RANK_CUTOFF) == pytest.approx(ref, abs=1e-8)
    assert _kernels.concurrence_numpy(rho) == pytest.approx(ref, abs=1e-8)
    if _kernels.HAVE_NUMBA:
        assert _kernels._concurrence_nb(rho, yy, _kernels.WOOTTERS_RANK_CUTOFF) == pytest.approx(ref, abs=1e-8)


def test_concurrence_werner_line():
    for p in np.linspace(0, 1, 11):
        rho = oracles.werner(p)
        assert _kernels.concurrence_numpy(rho) == pytest.approx(oracles.werner_concurrence(p), abs=1e-10)
        assert _kernels.concurrence(rho) == pytest.approx(oracles.werner_concurrence(p), abs=1e-10)


def test_concurrence_pure_bell_is_one_to_machine_precision():
    assert _kernels.concurrence(oracles.bell()) == pytest.approx(1.0, abs=1e-13)
    assert _kernels.concurrence_numpy(oracles.bell()) == pytest.approx(1.0, abs=1e-13)


def _roof_inputs(seed, d1=2, d0=3, r=3, m=6):
    rng = make_rng(seed)
    vt = rng.standard_normal((d1 * d0, r)) + 1j * rng.standard_normal((d1 * d0, r))
    vt /= np.linalg.norm(vt)
    z = rng.standard_normal((m, r)) + 1j * rng.standard_normal((m, r))
    w = np.linalg.qr(z)[0]
    return vt, w, d1, d0


@pytest.mark.parametrize("seed", range(3))
def test_roof_paths_agree(seed):
    vt, w, d1, d0 = _roof_inputs(seed)
    v_py, g_py = _kernels.roof_value_grad_py(vt, w, d1, d0)
    v_np, g_np = _kernels.roof_value_grad_numpy(vt, w, d1, d0)
    assert v_py == pytest.approx(v_np, abs=1e-10)
    np.testing.assert_allclose(g_py, g_np, atol=1e-9)


def test_roof_gradient_matches_finite_differences():
    vt, w, d1, d0 = _roof_inputs(11)
    val, grad = _kernels.roof_value_grad_numpy(vt, w, d1, d0)
    rng = make_rng(12)
    dw = rng.standard_normal(w.shape) + 1j * rng.standard_normal(w.shape)
    h = 1e-6
    fp = _kernels.roof_value_grad_numpy(vt, w + h * dw, d1, d0)[0]
    fm = _kernels.roof_value_grad_numpy(vt, w - h * dw, d1, d0)[0]
    # Wirtinger: df = 2 Re <grad, dw>
    assert (fp - fm) / (2 * h) == pytest.approx(2 * np.real(np.vdot(grad, dw)), rel=1e-5)


def test_env_flag_selects_numpy_backend():
    env = dict(os.environ, TEMPOCORR_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", "from tempocorr import _kernels; print(_kernels.backend_name())"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
