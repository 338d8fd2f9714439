"""Entanglement measures, separability diagnostics and channel distance bounds.

All entropies are in bits.
"""
from dataclasses import dataclass

import numpy as np
from scipy.linalg import sqrtm
from scipy.optimize import minimize

from . import _kernels, qmath
from .channels import KrausChannel
from .errors import DimensionError
from .states import PureState, as_matrix, haar_random_unitary, make_rng
from .tomography import project_to_simplex

RANK_CUTOFF = 1e-12
ROOF_MAX_ITER = 200
ROOF_TOL = 1e-8
DEFAULT_RESTARTS = 32


@dataclass(frozen=True)
class EntanglementReport:
    value: float
    kind: str  # "exact" | "upper_bound" | "lower_bound"
    method: str
    iterations: int = 0


@dataclass(frozen=True)
class PPTVerdict:
    ppt: bool
    min_eigenvalue: float

    def __bool__(self):
        return self.ppt


def _dims_of(state, dims):
    if dims is not None:
        return tuple(int(d) for d in dims)
    sd = getattr(state, "dims", None)
    if sd is not None and len(sd) == 2:
        return tuple(sd)
    raise DimensionError("bipartite dimensions are required")


def shannon_bits(p):
    p = np.asarray(p, dtype=float)
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p))) + 0.0


def von_neumann_entropy(rho):
    return shannon_bits(np.clip(qmath.eigvalsh(as_matrix(rho)), 0.0, None))


def schmidt_coefficients(vec, dims):
    d_a, d_b = dims
    vec = np.asarray(vec, dtype=np.complex128)
    if vec.size != d_a * d_b:
        raise DimensionError(f"vector of length {vec.size} does not match dims {dims}")
    return np.linalg.svd(vec.reshape(d_a, d_b), compute_uv=False)


def entropy_of_entanglement(psi, dims=None):
    """Entropy of either reduced state of a bipartite pure state."""
    dims = _dims_of(psi, dims)
    vec = psi.vec if isinstance(psi, PureState) else np.asarray(psi)
    s = schmidt_coefficients(vec, dims)
    return shannon_bits(s * s / np.sum(s * s))


def binary_entropy(x):
    return shannon_bits([x, 1.0 - x])


def concurrence_2q(rho):
    m = as_matrix(rho)
    if m.shape != (4, 4):
        raise DimensionError(f"concurrence needs a two-qubit state, got shape {m.shape}")
    return min(1.0, _kernels.concurrence(m))


def eof_from_concurrence(c):
    c = min(max(float(c), 0.0), 1.0)
    return binary_entropy((1.0 + np.sqrt(1.0 - c * c)) / 2.0)


def eof_2q(rho):
    """Wootters' closed form for two qubits."""
    return EntanglementReport(eof_from_concurrence(concurrence_2q(rho)), "exact", "wootters")


# ---------------------------------------------------------------------------
# convex-roof upper bound
# ---------------------------------------------------------------------------

def _polar(z):
    u, _, vh = np.linalg.svd(z, full_matrices=False)
    return u @ vh


def _stiefel_descent(vt, w, d1, d0, max_iter, tol):
    """Armijo gradient descent of the roof objective over m x r isometries."""
    f, g = _kernels.roof_value_grad(vt, w, d1, d0)
    step = 1.0
    it = 0
    for it in range(1, max_iter + 1):
        sym = qmath.dagger(w) @ g
        rg = g - w @ (0.5 * (sym + qmath.dagger(sym)))
        gnorm = float(np.real(np.vdot(rg, rg)))
        if gnorm < 1e-24 or f <= 0.0:
            break
        while True:
            w_new = _polar(w - step * rg)
            f_new, g_new = _kernels.roof_value_grad(vt, w_new, d1, d0)
            if f_new <= f - 1e-4 * step * gnorm or step < 1e-12:
                break
            step *= 0.5
        if f_new >= f:
            break
        gain = f - f_new
        w, f, g = w_new, f_new, g_new
        if gain < tol:
            break
        step *= 2.0
    return f, w, it


def eof_upper_bound(rho, dims=None, restarts=DEFAULT_RESTARTS, seed=0, max_iter=ROOF_MAX_ITER, tol=ROOF_TOL):
    """Upper bound on the entanglement of formation via explicit decompositions.

    Decompositions are ``psi_i = sum_k W_ik sqrt(l_k) |v_k>`` for isometries
    ``W`` of shape (2r, r), started at the spectral decomposition and at Haar
    random isometries (stream ``(seed, restart)``), and refined by gradient
    descent on the complex Stiefel manifold. Every returned value is the
    average entanglement of an actual decomposition.
    """
    dims = _dims_of(rho, dims)
    m = as_matrix(rho)
    d1, d0 = dims
    if min(d0, d1) < 2 or m.shape != (d0 * d1, d0 * d1):
        raise DimensionError(f"state of shape {m.shape} does not match dims {dims}")
    lam, vecs = qmath.eigh(m)
    keep = lam > RANK_CUTOFF
    lam, vecs = lam[keep], vecs[:, keep]
    lam = lam / lam.sum()
    r = lam.size
    if r == 1:
        return EntanglementReport(entropy_of_entanglement(vecs[:, 0], dims), "upper_bound", "pure", 0)

    vt = vecs * np.sqrt(lam)
    size = 2 * r
    best, total_iter = np.inf, 0
    for k in range(max(1, restarts)):
        if k == 0:
            w0 = np.zeros((size, r), dtype=np.complex128)
            w0[:r] = np.eye(r)
        else:
            w0 = haar_random_unitary(size, make_rng(seed, k))[:, :r]
        f, _, it = _stiefel_descent(vt, w0, d1, d0, max_iter, tol)
        total_iter += it
        best = min(best, f)
        if best <= 1e-14:
            break
    return EntanglementReport(max(0.0, float(best)), "upper_bound", "stiefel-roof", total_iter)


def eof(rho, dims=None, restarts=DEFAULT_RESTARTS, seed=0):
    """Exact EoF for two qubits, the roof upper bound otherwise."""
    dims = _dims_of(rho, dims)
    if dims == (2, 2):
        return eof_2q(rho)
    return eof_upper_bound(rho, dims, restarts=restarts, seed=seed)


# ---------------------------------------------------------------------------
# separability diagnostics
# ---------------------------------------------------------------------------

def is_ppt(rho, dims=None, tol=1e-10):
    dims = _dims_of(rho, dims)
    pt = qmath.partial_transpose(as_matrix(rho), dims, sub=1)
    min_eig = float(qmath.eigvalsh(0.5 * (pt + qmath.dagger(pt)))[-1])
    return PPTVerdict(min_eig >= -tol, min_eig)


@dataclass(frozen=True, eq=False)
class SeparableCertificate:
    """Explicit separable state ``omega = sum_a w_a |x_a><x_a| (x) |y_a><y_a|``."""

    value: float
    weights: np.ndarray
    first: np.ndarray  # (n, d1) local vectors
    second: np.ndarray  # (n, d0)

    def omega(self):
        return _mix_products(self.weights, self.first, self.second)


def _mix_products(weights, first, second):
    prods = np.einsum("na,nb->nab", first, second).reshape(len(weights), -1)
    return (prods.T * weights) @ prods.conj()


def _normalize_rows(x):
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def _unpack_locals(x, n, d1, d0):
    half = x.size // 2
    z = x[:half] + 1j * x[half:]
    first = _normalize_rows(z[: n * d1].reshape(n, d1))
    second = _normalize_rows(z[n * d1:].reshape(n, d0))
    return first, second


def _pack_locals(first, second):
    z = np.concatenate([first.ravel(), second.ravel()])
    return np.concatenate([z.real, z.imag])


def _optimize_separable(m, dims, weights, first, second, rounds, nm_iter):
    d1, d0 = dims
    n = len(weights)

    def dist(w, a, b):
        return qmath.trace_norm(m - _mix_products(w, a, b))

    best = (dist(weights, first, second), weights, first, second)
    w, a, b = weights, first, second
    for _ in range(rounds):
        # projected subgradient on the weights
        step = 0.5
        for _ in range(30):
            diff = m - _mix_products(w, a, b)
            lam, vecs = qmath.eigh(0.5 * (diff + qmath.dagger(diff)))
            sign = (vecs * np.sign(lam)) @ qmath.dagger(vecs)
            prods = np.einsum("na,nb->nab", a, b).reshape(n, -1)
            grad = -np.real(np.einsum("ni,ij,nj->n", prods.conj(), sign, prods))
            w = project_to_simplex(w - step * grad)
            val = dist(w, a, b)
            if val < best[0]:
                best = (val, w, a, b)
            step *= 0.7
        w, a, b = best[1], best[2], best[3]
        # simplex descent on the local states
        res = minimize(
            lambda x: dist(w, *_unpack_locals(x, n, d1, d0)),
            _pack_locals(a, b),
            method="Nelder-Mead",
            options={"maxiter": nm_iter, "xatol": 1e-9, "fatol": 1e-12, "adaptive": True},
        )
        a2, b2 = _unpack_locals(res.x, n, d1, d0)
        if res.fun < best[0]:
            best = (float(res.fun), w, a2, b2)
        w, a, b = best[1], best[2], best[3]
    return best


def _dephasing_seed(m, basis1, basis0):
    d1, d0 = basis1.shape[0], basis0.shape[0]
    frame = np.kron(basis1, basis0)
    diag = np.clip(np.real(np.diag(qmath.dagger(frame) @ m @ frame)), 0.0, None)
    diag = diag / diag.sum()
    first = np.repeat(basis1.T, d0, axis=0)
    second = np.tile(basis0.T, (d1, 1))
    return diag, first, second


def _sqrt_vectors(m):
    """Columns ``sqrt(w_i) v_i`` so that ``m = X X^dagger``."""
    w, v = np.linalg.eigh(0.5 * (m + qmath.dagger(m)))
    return v * np.sqrt(np.clip(w, 0.0, None))


def _takagi(tau):
    """Unitary ``U`` and values ``s`` with ``tau = U diag(s) U^T`` for complex symmetric ``tau``."""
    a, s, bh = np.linalg.svd(tau)
    z = qmath.dagger(a) @ bh.T
    return a @ sqrtm(z), s


def _closing_phases(lam):
    """Phases ``phi`` with ``sum lam_j e^{i phi_j} = 0`` for descending ``lam``, or None."""
    l1, l2, l3, l4 = lam
    if l1 > l2 + l3 + l4:
        return None
    big = max(l1 - l2, l3 - l4)
    cos_a = 1.0 if l1 * l2 == 0 else np.clip((big * big - l1 * l1 - l2 * l2) / (2 * l1 * l2), -1.0, 1.0)
    c = -(l1 + l2 * np.exp(1j * np.arccos(cos_a)))
    if abs(c) == 0.0 or l3 == 0.0:
        g3 = np.angle(c) if abs(c) else 0.0
    else:
        cos_d = np.clip((abs(c) ** 2 + l3 * l3 - l4 * l4) / (2 * abs(c) * l3), -1.0, 1.0)
        g3 = np.angle(c) + np.arccos(cos_d)
    rest = c - l3 * np.exp(1j * g3)
    g4 = np.angle(rest) if abs(rest) > 0 else g3 + np.pi
    return np.array([0.0, np.arccos(cos_a), g3, g4])


_SIGNS = np.array([[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]], dtype=float) / 2.0


def _two_qubit_products(m):
    """Product-state decomposition of a two-qubit state with zero concurrence.

    Follows the constructive proof of the concurrence formula: the
    subnormalised eigenvectors are rotated so their spin-flip overlaps are
    diagonal with values ``lam``, given phases that close the polygon
    ``sum lam_j e^{i phi_j} = 0``, and recombined with a Hadamard pattern so
    every member has zero spin-flip overlap, hence is a product. Returns
    ``(weights, first, second)`` or None when the concurrence is positive.
    """
    vt = _sqrt_vectors(m)
    u, lam = _takagi(vt.T @ _kernels._YY @ vt)
    phases = _closing_phases(lam)
    if phases is None:
        return None
    x = vt @ u.conj() * np.exp(0.5j * phases)
    weights, first, second = [], [], []
    for row in _SIGNS:
        a, s, bh = np.linalg.svd((x @ row).reshape(2, 2))
        weights.append(s[0] ** 2)
        first.append(a[:, 0])
        second.append(bh[0])
    weights = np.array(weights)
    return weights / weights.sum(), np.array(first), np.array(second)


def _concurrence_slack(m):
    vt = _sqrt_vectors(m)
    lam = np.linalg.svd(vt.T @ _kernels._YY @ vt, compute_uv=False)
    return lam[1] + lam[2] + lam[3] - lam[0]


def _mixing_seeds(m):
    """Product decompositions of ``(1 - t) rho + t tau`` at the smallest separable ``t``.

    ``tau`` runs over the maximally mixed state and the dephasings of
    ``rho`` in the computational and local eigen product bases, all
    separable; ``t`` is found by bisection on the concurrence.
    """
    refs = [np.eye(4) / 4]
    _, u1 = qmath.eigh(qmath.partial_trace(m, (2, 2), keep="first"))
    _, u0 = qmath.eigh(qmath.partial_trace(m, (2, 2), keep="second"))
    for frame in (np.eye(4), np.kron(u1, u0)):
        diag = np.real(np.diag(qmath.dagger(frame) @ m @ frame))
        refs.append(frame @ np.diag(diag / diag.sum()) @ qmath.dagger(frame))
    seeds = []
    for tau in refs:
        lo, hi = 0.0, 1.0
        if _concurrence_slack(m) >= 0.0:
            hi = 0.0
        else:
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                if _concurrence_slack((1 - mid) * m + mid * tau) >= 0.0:
                    hi = mid
                else:
                    lo = mid
        found = _two_qubit_products((1 - hi) * m + hi * tau)
        if found is not None:
            seeds.append(found)
        if hi == 0.0:
            break
    return seeds


def separable_distance_search(rho, dims=None, restarts=8, seed=0, rounds=2, nm_iter=400):
    """Best explicit separable state found near ``rho`` in trace norm.

    Restart 0 starts from the dephasing of ``rho`` in the computational
    product basis, restart 1 from its dephasing in the product of the local
    eigenbases, and later restarts from random product states drawn from the
    stream ``(seed, restart)``. For two qubits the explicit product
    decompositions of :func:`_mixing_seeds` are tried first. Each candidate
    holds ``(d0 d1)**2`` product states. The minimum over restarts is
    returned.
    """
    dims = _dims_of(rho, dims)
    d1, d0 = dims
    m = as_matrix(rho)
    if m.shape != (d1 * d0, d1 * d0):
        raise DimensionError(f"state of shape {m.shape} does not match dims {dims}")
    n = (d1 * d0) ** 2
    best = None
    fixed = _mixing_seeds(m) if dims == (2, 2) else []
    for k in range(max(1, restarts) + len(fixed)):
        rng = make_rng(seed, k)
        if k < len(fixed):
            w, a, b = fixed[k]
        elif k == len(fixed):
            w, a, b = _dephasing_seed(m, np.eye(d1), np.eye(d0))
        elif k == len(fixed) + 1:
            _, u1 = qmath.eigh(qmath.partial_trace(m, dims, keep="first"))
            _, u0 = qmath.eigh(qmath.partial_trace(m, dims, keep="second"))
            w, a, b = _dephasing_seed(m, u1, u0)
        else:
            w = np.zeros(0)
            a = np.empty((0, d1), dtype=np.complex128)
            b = np.empty((0, d0), dtype=np.complex128)
        extra = n - len(w)
        if extra > 0:
            ra = _normalize_rows(rng.standard_normal((extra, d1)) + 1j * rng.standard_normal((extra, d1)))
            rb = _normalize_rows(rng.standard_normal((extra, d0)) + 1j * rng.standard_normal((extra, d0)))
            fill = 0.0 if len(w) else 1.0 / extra
            w = np.concatenate([w, np.full(extra, fill)])
            a = np.vstack([a, ra])
            b = np.vstack([b, rb])
        cand = _optimize_separable(m, dims, w, a, b, rounds, nm_iter)
        if best is None or cand[0] < best[0]:
            best = cand
        if best[0] <= 1e-13:
            break
    return SeparableCertificate(float(best[0]), best[1], best[2], best[3])


def distance_to_separable_upper(rho, dims=None, restarts=8, seed=0):
    """Upper bound on ``min_{omega separable} ||rho - omega||_1``."""
    return separable_distance_search(rho, dims, restarts=restarts, seed=seed).value


# ---------------------------------------------------------------------------
# diamond norm lower bound
# ---------------------------------------------------------------------------

def _difference_output(a, b, zeta):
    d0 = a.d_in
    z = zeta.reshape(d0, d0)
    out = np.zeros((a.d_out * d0, a.d_out * d0), dtype=np.complex128)
    for k in a.kraus:
        v = (k @ z).ravel()
        out += np.outer(v, v.conj())
    for k in b.kraus:
        v = (k @ z).ravel()
        out -= np.outer(v, v.conj())
    return out


def diamond_search(a, b, restarts=8, seed=0, inputs=(), nm_iter=400):
    """Largest ``||((a - b) (x) id)(|z><z|)||_1`` found over pure inputs ``z``.

    Candidate inputs: the maximally entangled state, one ``sigma_U`` per
    restart (``U`` Haar from stream ``(seed, restart)``), a Haar random pure
    state per restart, and any caller-supplied ``inputs``. Each candidate is
    refined by simplex ascent. Returns ``(value, best_input)``.
    """
    if not (isinstance(a, KrausChannel) and isinstance(b, KrausChannel)):
        raise TypeError("diamond_search compares two KrausChannels")
    if (a.d_in, a.d_out) != (b.d_in, b.d_out):
        raise DimensionError("channels act between different spaces")
    d0 = a.d_in
    size = d0 * d0
    omega = np.zeros(size, dtype=np.complex128)
    omega[:: d0 + 1] = 1.0 / np.sqrt(d0)

    starts = [omega]
    starts += [np.asarray(getattr(z, "vec", z), dtype=np.complex128).ravel() for z in inputs]
    for k in range(max(0, restarts)):
        rng = make_rng(seed, k)
        u = haar_random_unitary(d0, rng)
        starts.append(np.kron(u, u) @ omega)
        z = rng.standard_normal(size) + 1j * rng.standard_normal(size)
        starts.append(z / np.linalg.norm(z))

    def value(z):
        return qmath.trace_norm(_difference_output(a, b, z))

    def neg(x):
        z = x[:size] + 1j * x[size:]
        nz = np.linalg.norm(z)
        if nz == 0.0:
            return 0.0
        return -value(z / nz)

    best_val, best_z = -np.inf, omega
    for z0 in starts:
        if z0.size != size:
            raise DimensionError(f"input of length {z0.size} does not match {size}")
        z0 = z0 / np.linalg.norm(z0)
        v0 = value(z0)
        if v0 > best_val:
            best_val, best_z = v0, z0
        res = minimize(neg, np.concatenate([z0.real, z0.imag]), method="Nelder-Mead",
                       options={"maxiter": nm_iter, "xatol": 1e-10, "fatol": 1e-12, "adaptive": True})
        if -res.fun > best_val:
            z = res.x[:size] + 1j * res.x[size:]
            best_val, best_z = float(-res.fun), z / np.linalg.norm(z)
    return float(best_val), best_z


def diamond_lower(a, b, restarts=8, seed=0, inputs=()):
    """Lower bound on the diamond distance ``||a - b||_<>``."""
    return diamond_search(a, b, restarts=restarts, seed=seed, inputs=inputs)[0]
