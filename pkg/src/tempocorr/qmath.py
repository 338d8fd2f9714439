"""Dense complex linear algebra for small dimensions.

Matrices are plain ``complex128`` numpy arrays. Bipartite operators always use
the ordering ``first (x) second`` with the index of ``|a>|b>`` equal to
``a * d_second + b``.
"""
import numpy as np

from . import _kernels
from .errors import DimensionError, HermitianityError

HERMITIAN_TOL = 1e-10

_FIRST = {0, "first", "out", "output"}
_SECOND = {1, "second", "in", "input"}


def as_cmat(m):
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def dagger(m):
    return np.conj(np.asarray(m)).T


def mul(a, b):
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape[-1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def kron(a, b):
    return np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))


def frob_inner(a, b):
    """Hilbert-Schmidt inner product ``Tr(a^dagger b)``."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def _check_bipartite(m, dims):
    d_a, d_b = int(dims[0]), int(dims[1])
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] != d_a * d_b:
        raise DimensionError(f"matrix of shape {m.shape} does not match dims {tuple(dims)}")
    return d_a, d_b


def _keep_index(keep):
    if keep in _FIRST:
        return 0
    if keep in _SECOND:
        return 1
    raise DimensionError(f"keep must name the first or second factor, got {keep!r}")


def partial_trace(m, dims, keep):
    """Reduce a bipartite operator to the factor named by ``keep``.

    ``keep`` accepts ``0``/``"first"`` or ``1``/``"second"``.
    """
    m = np.asarray(m, dtype=np.complex128)
    d_a, d_b = _check_bipartite(m, dims)
    t = m.reshape(d_a, d_b, d_a, d_b)
    if _keep_index(keep) == 0:
        return np.einsum("ikjk->ij", t)
    return np.einsum("kikj->ij", t)


def partial_transpose(m, dims, sub=1):
    """Transpose the factor ``sub`` (default: second) of a bipartite operator."""
    m = np.asarray(m, dtype=np.complex128)
    d_a, d_b = _check_bipartite(m, dims)
    t = m.reshape(d_a, d_b, d_a, d_b)
    if _keep_index(sub) == 0:
        t = t.transpose(2, 1, 0, 3)
    else:
        t = t.transpose(0, 3, 2, 1)
    return t.reshape(d_a * d_b, d_a * d_b)


def hermitian_defect(m):
    m = np.asarray(m)
    if m.size == 0:
        return 0.0
    return float(np.max(np.abs(m - dagger(m))))


def is_hermitian(m, tol=HERMITIAN_TOL):
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and hermitian_defect(m) <= tol


def unitarity_defect(u):
    u = np.asarray(u, dtype=np.complex128)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return np.inf
    return float(np.max(np.abs(dagger(u) @ u - np.eye(u.shape[0]))))


def is_unitary(u, tol=1e-10):
    return unitarity_defect(u) <= tol


def eigh(m):
    """Eigen-decomposition of a Hermitian matrix.

    Returns
    -------
    w : ndarray
        Real eigenvalues in descending order.
    v : ndarray
        Orthonormal eigenvectors as columns.

    Raises
    ------
    HermitianityError
        If ``max |m - m^dagger|`` exceeds 1e-10. The input is never
        symmetrised on the caller's behalf.
    """
    m = as_cmat(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"eigh needs a square matrix, got {m.shape}")
    defect = hermitian_defect(m)
    if defect > HERMITIAN_TOL:
        raise HermitianityError(f"matrix is not Hermitian (max deviation {defect:.3e})")
    return _kernels.eigh(m)


def eigvalsh(m):
    m = as_cmat(m)
    defect = hermitian_defect(m)
    if defect > HERMITIAN_TOL:
        raise HermitianityError(f"matrix is not Hermitian (max deviation {defect:.3e})")
    return _kernels.eigvalsh(m)


def singular_values(m):
    return np.linalg.svd(np.asarray(m, dtype=np.complex128), compute_uv=False)


def trace_norm(m):
    """Sum of singular values; Hermitian inputs go through the eigensolver."""
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"trace_norm needs a square matrix, got {m.shape}")
    if m.size == 0:
        return 0.0
    if hermitian_defect(m) <= 1e-13 * max(1.0, float(np.max(np.abs(m)))):
        return float(np.sum(np.abs(_kernels.eigvalsh(m))))
    return float(np.sum(singular_values(m)))


def trace_distance(a, b):
    return 0.5 * trace_norm(np.asarray(a) - np.asarray(b))


def herm_function(m, func):
    """Apply ``func`` to the spectrum of a Hermitian matrix."""
    w, v = eigh(m)
    return (v * func(w)) @ dagger(v)


def expi_hermitian(h):
    """``exp(i h)`` for Hermitian ``h``."""
    w, v = eigh(h)
    return (v * np.exp(1j * w)) @ dagger(v)


def hermitian_from_params(x, d):
    """Build a Hermitian d x d matrix from d**2 reals.

    The first ``d`` entries fill the diagonal; the rest fill the strict upper
    triangle as (real, imag) pairs in row-major order.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.size != d * d:
        raise DimensionError(f"need {d * d} parameters, got {x.size}")
    h = np.diag(x[:d]).astype(np.complex128)
    iu = np.triu_indices(d, 1)
    off = x[d::2] + 1j * x[d + 1::2]
    h[iu] = off
    h[(iu[1], iu[0])] = np.conj(off)
    return h


def purity(rho):
    rho = np.asarray(rho)
    return float(np.real(np.trace(rho @ rho)))
