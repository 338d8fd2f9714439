"""Hot numeric kernels with a numba path and a pure-numpy fallback.

Every kernel exists twice: a loop-oriented implementation written for
``numba.njit`` and a vectorised numpy implementation. The numba path is used
when numba imports cleanly and ``TEMPOCORR_DISABLE_NUMBA`` is not set to a
truthy value. Both paths honour the same contracts; ``tests/test_kernels.py``
cross-checks them and ``benchmarks/bench_kernels.py`` times them.
"""
import os

import numpy as np

_TRUTHY = {"1", "true", "yes", "on"}

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("TEMPOCORR_DISABLE_NUMBA", "").strip().lower() not in _TRUTHY

JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
_LN2 = np.log(2.0)
# eigenvalues below this are treated as exact zeros inside entropies
_ENTROPY_FLOOR = 1e-300
# state eigenvalues at or below this are dropped before sqrt(rho) in the
# concurrence; sqrt of ~1e-17 solver noise would otherwise leak ~1e-8 into C
WOOTTERS_RANK_CUTOFF = 1e-13


def _maybe_njit(func):
    if HAVE_NUMBA:
        return numba.njit(cache=True)(func)
    return func


# ---------------------------------------------------------------------------
# Hermitian eigensolver
# ---------------------------------------------------------------------------

def jacobi_eigh_py(a, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Cyclic complex Jacobi eigensolver for a Hermitian matrix.

    Returns eigenvalues in descending order and the matching eigenvectors as
    columns. ``tol`` bounds the off-diagonal Frobenius mass relative to
    ``max(1, ||a||_F)``.
    """
    n = a.shape[0]
    A = np.empty((n, n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            A[i, j] = a[i, j]
    V = np.zeros((n, n), dtype=np.complex128)
    for i in range(n):
        V[i, i] = 1.0

    scale = 0.0
    for i in range(n):
        for j in range(n):
            scale += abs(A[i, j]) ** 2
    scale = max(1.0, np.sqrt(scale))

    for _ in range(max_sweeps):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += abs(A[p, q]) ** 2
        if np.sqrt(2.0 * off) < tol * scale:
            break
        for p in range(n):
            for q in range(p + 1, n):
                apq = A[p, q]
                g = abs(apq)
                if g == 0.0:
                    continue
                ph = np.conj(apq / g)
                app = A[p, p].real
                aqq = A[q, q].real
                theta = (aqq - app) / (2.0 * g)
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                sph = s * ph
                cph = c * ph
                # A <- A G with G = [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
                for k in range(n):
                    akp = A[k, p]
                    akq = A[k, q]
                    A[k, p] = c * akp - sph * akq
                    A[k, q] = s * akp + cph * akq
                    vkp = V[k, p]
                    vkq = V[k, q]
                    V[k, p] = c * vkp - sph * vkq
                    V[k, q] = s * vkp + cph * vkq
                # A <- G^dagger A
                csph = np.conj(sph)
                ccph = np.conj(cph)
                for k in range(n):
                    apk = A[p, k]
                    aqk = A[q, k]
                    A[p, k] = c * apk - csph * aqk
                    A[q, k] = s * apk + ccph * aqk
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = app - t * g
                A[q, q] = aqq + t * g

    w = np.empty(n, dtype=np.float64)
    for i in range(n):
        w[i] = A[i, i].real
    order = np.argsort(-w, kind="mergesort")
    w_sorted = np.empty(n, dtype=np.float64)
    V_sorted = np.empty((n, n), dtype=np.complex128)
    for j in range(n):
        w_sorted[j] = w[order[j]]
        for i in range(n):
            V_sorted[i, j] = V[i, order[j]]
    return w_sorted, V_sorted


_jacobi_eigh_nb = _maybe_njit(jacobi_eigh_py)


def eigh_numpy(a):
    w, v = np.linalg.eigh(a)
    return w[::-1].copy(), v[:, ::-1].copy()


def eigh(a):
    """Descending eigenpairs of a Hermitian matrix via the active backend."""
    a = np.ascontiguousarray(a, dtype=np.complex128)
    if USE_NUMBA:
        return _jacobi_eigh_nb(a, JACOBI_TOL, JACOBI_MAX_SWEEPS)
    return eigh_numpy(a)


def eigvalsh(a):
    a = np.ascontiguousarray(a, dtype=np.complex128)
    if USE_NUMBA:
        return _jacobi_eigh_nb(a, JACOBI_TOL, JACOBI_MAX_SWEEPS)[0]
    return np.linalg.eigvalsh(a)[::-1].copy()


# ---------------------------------------------------------------------------
# Two-qubit concurrence
# ---------------------------------------------------------------------------

_YY = np.array(
    [[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=np.complex128
)


def concurrence_py(rho, yy, cutoff):
    # lambda_i are the singular values of sqrt(rho) (Y x Y) conj(sqrt(rho)),
    # i.e. square roots of the eigenvalues of rho (Y x Y) rho* (Y x Y)
    w, v = _jacobi_eigh_nb(rho, JACOBI_TOL, JACOBI_MAX_SWEEPS)
    n = rho.shape[0]
    sq = np.zeros((n, n), dtype=np.complex128)
    for k in range(n):
        lam = w[k] if w[k] > cutoff else 0.0
        r = np.sqrt(lam)
        for i in range(n):
            for j in range(n):
                sq[i, j] += r * v[i, k] * np.conj(v[j, k])
    m = sq @ yy @ np.conj(sq)
    # direct SVD; sqrt of eigenvalues of m m^dagger would reintroduce the noise floor
    lam = np.linalg.svd(m)[1]
    val = lam[0]
    for k in range(1, n):
        val -= lam[k]
    return val if val > 0.0 else 0.0


_concurrence_nb = _maybe_njit(concurrence_py) if HAVE_NUMBA else None


def concurrence_numpy(rho):
    w, v = np.linalg.eigh(rho)
    sq = (v * np.sqrt(np.where(w > WOOTTERS_RANK_CUTOFF, w, 0.0))) @ v.conj().T
    lam = np.linalg.svd(sq @ _YY @ sq.conj(), compute_uv=False)
    return max(0.0, float(lam[0] - lam[1] - lam[2] - lam[3]))


def concurrence(rho):
    rho = np.ascontiguousarray(rho, dtype=np.complex128)
    if USE_NUMBA:
        return float(_concurrence_nb(rho, _YY, WOOTTERS_RANK_CUTOFF))
    return concurrence_numpy(rho)


# ---------------------------------------------------------------------------
# Convex-roof objective: average entanglement of a pure-state decomposition
# ---------------------------------------------------------------------------

def roof_value_grad_py(vt, w, d1, d0):
    """Average output-side entropy (bits) of the decomposition W @ vt.T.

    ``vt`` holds the subnormalised eigenvectors as columns (D x r), ``w`` is
    the m x r isometry. Returns the value and its Wirtinger gradient with
    respect to conj(w).
    """
    m = w.shape[0]
    r = w.shape[1]
    dim = vt.shape[0]
    psi = w @ vt.T  # m x D, row i is the unnormalised member i
    grad_psi = np.zeros((m, dim), dtype=np.complex128)
    total = 0.0
    for i in range(m):
        mat = np.empty((d1, d0), dtype=np.complex128)
        for k in range(d1):
            for l in range(d0):
                mat[k, l] = psi[i, k * d0 + l]
        sigma = mat @ np.conj(mat.T)
        mu, u = _jacobi_eigh_nb(sigma, JACOBI_TOL, JACOBI_MAX_SWEEPS)
        p = 0.0
        for k in range(d1):
            p += sigma[k, k].real
        if p <= _ENTROPY_FLOOR:
            continue
        logp = np.log(p)
        coef = np.empty(d1, dtype=np.float64)
        for k in range(d1):
            if mu[k] > _ENTROPY_FLOOR:
                total -= mu[k] * np.log(mu[k])
                coef[k] = logp - np.log(mu[k])
            else:
                coef[k] = 0.0
        total += p * logp
        # (log p - log sigma) M
        um = np.conj(u.T) @ mat
        for k in range(d1):
            for l in range(d0):
                um[k, l] *= coef[k]
        g = u @ um
        for k in range(d1):
            for l in range(d0):
                grad_psi[i, k * d0 + l] = g[k, l] / _LN2
    grad_w = grad_psi @ np.conj(vt)
    return total / _LN2, grad_w


_roof_nb = _maybe_njit(roof_value_grad_py) if HAVE_NUMBA else None


def roof_value_grad_numpy(vt, w, d1, d0):
    m = w.shape[0]
    psi = w @ vt.T
    mats = psi.reshape(m, d1, d0)
    u, s, vh = np.linalg.svd(mats, full_matrices=False)
    mu = s * s
    p = mu.sum(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        logmu = np.where(mu > _ENTROPY_FLOOR, np.log(np.where(mu > 0, mu, 1.0)), 0.0)
        logp = np.where(p > _ENTROPY_FLOOR, np.log(np.where(p > 0, p, 1.0)), 0.0)
    value = float(np.sum(-mu * logmu) + np.sum(p * logp)) / _LN2
    coef = np.where(mu > _ENTROPY_FLOOR, logp[:, None] - logmu, 0.0)
    # (log p - log sigma) M = U diag(coef * s) V^dagger
    g = np.einsum("ikj,ij,ijl->ikl", u, coef * s, vh)
    grad_psi = g.reshape(m, d1 * d0) / _LN2
    return value, grad_psi @ vt.conj()


def roof_value_grad(vt, w, d1, d0):
    vt = np.ascontiguousarray(vt, dtype=np.complex128)
    w = np.ascontiguousarray(w, dtype=np.complex128)
    if USE_NUMBA:
        val, grad = _roof_nb(vt, w, d1, d0)
        return float(val), grad
    return roof_value_grad_numpy(vt, w, d1, d0)


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
