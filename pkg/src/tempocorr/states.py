"""State constructors, validators and seeded random samplers."""
from dataclasses import dataclass

import numpy as np

from . import qmath
from .errors import (
    BasisError,
    DimensionError,
    HermitianityError,
    PositivityError,
    ProbabilityError,
    TraceError,
)

STATE_TOL = 1e-10
NORM_TOL = 1e-12


def make_rng(seed, *keys):
    """Philox generator keyed by ``seed`` and optional sub-stream indices.

    ``make_rng(s, k)`` is the derived stream used for restart ``k`` of a run
    with master seed ``s``; results never depend on scheduling order.
    """
    if isinstance(seed, np.random.Generator):
        if keys:
            raise TypeError("sub-stream keys need an integer master seed")
        return seed
    ss = np.random.SeedSequence([int(seed), *[int(k) for k in keys]])
    return np.random.Generator(np.random.Philox(ss))


def derived_seed(seed, index):
    """Integer label for sub-stream ``index`` of master ``seed``."""
    return int(np.random.SeedSequence([int(seed), int(index)]).generate_state(1)[0])


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    mat: np.ndarray
    dims: tuple

    def __post_init__(self):
        mat = np.asarray(self.mat, dtype=np.complex128)
        dims = tuple(int(d) for d in np.atleast_1d(self.dims))
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise DimensionError(f"density matrix must be square, got {mat.shape}")
        if int(np.prod(dims)) != mat.shape[0]:
            raise DimensionError(f"dims {dims} do not multiply to side {mat.shape[0]}")
        object.__setattr__(self, "mat", mat)
        object.__setattr__(self, "dims", dims)

    @property
    def side(self):
        return self.mat.shape[0]

    def purity(self):
        return qmath.purity(self.mat)


@dataclass(frozen=True, eq=False)
class PureState:
    vec: np.ndarray
    dims: tuple

    def __post_init__(self):
        vec = np.asarray(self.vec, dtype=np.complex128).ravel()
        dims = tuple(int(d) for d in np.atleast_1d(self.dims))
        if int(np.prod(dims)) != vec.size:
            raise DimensionError(f"dims {dims} do not match vector length {vec.size}")
        norm = np.linalg.norm(vec)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"pure state must have unit norm, got {norm!r}")
        object.__setattr__(self, "vec", vec)
        object.__setattr__(self, "dims", dims)

    def density(self):
        return DensityMatrix(np.outer(self.vec, self.vec.conj()), self.dims)


@dataclass(frozen=True, eq=False)
class BasisPair:
    """Orthonormal bases as unitary column sets: ``b0`` on H0, ``b1`` on H1."""

    b0: np.ndarray
    b1: np.ndarray

    def __post_init__(self):
        b0 = np.asarray(self.b0, dtype=np.complex128)
        b1 = np.asarray(self.b1, dtype=np.complex128)
        for name, b in (("b0", b0), ("b1", b1)):
            if not qmath.is_unitary(b, STATE_TOL):
                raise BasisError(f"{name} columns are not an orthonormal basis")
        object.__setattr__(self, "b0", b0)
        object.__setattr__(self, "b1", b1)

    @property
    def d0(self):
        return self.b0.shape[0]

    @property
    def d1(self):
        return self.b1.shape[0]

    @classmethod
    def computational(cls, d0, d1=None):
        return cls(np.eye(d0), np.eye(d0 if d1 is None else d1))

    @classmethod
    def random(cls, d0, d1=None, seed=0):
        rng = make_rng(seed)
        return cls(haar_random_unitary(d0, rng), haar_random_unitary(d0 if d1 is None else d1, rng))


def as_matrix(state):
    """Matrix of a DensityMatrix, PureState or raw array."""
    if isinstance(state, DensityMatrix):
        return state.mat
    if isinstance(state, PureState):
        return np.outer(state.vec, state.vec.conj())
    return np.asarray(state, dtype=np.complex128)


def _check_basis(basis, d):
    basis = np.asarray(basis, dtype=np.complex128)
    if basis.shape != (d, d) or not qmath.is_unitary(basis, STATE_TOL):
        raise BasisError(f"expected a {d}x{d} unitary basis")
    return basis


def max_coherent(d, basis=None):
    """Uniform superposition of the basis columns, ``(1/sqrt d) sum_i |a_i>``."""
    basis = np.eye(d) if basis is None else _check_basis(basis, d)
    vec = basis.sum(axis=1) / np.sqrt(d)
    # sums of basis columns are unit norm up to rounding; renormalise exactly
    return PureState(vec / np.linalg.norm(vec), (d,))


def max_entangled(d):
    if d < 2:
        raise DimensionError("maximally entangled state needs d >= 2")
    vec = np.zeros(d * d, dtype=np.complex128)
    vec[:: d + 1] = 1.0 / np.sqrt(d)
    return PureState(vec, (d, d))


def cc_state(p, d=None):
    """Classical-classical state ``sum_{j,i} p[j, i] |j><j| (x) |i><i|``.

    ``p`` is a (d1, d0) table or a ``{(j, i): weight}`` mapping.
    """
    if isinstance(p, dict):
        if d is None:
            raise DimensionError("dimension required when p is a mapping")
        table = np.zeros((d, d))
        for (j, i), val in p.items():
            table[j, i] = val
    else:
        table = np.asarray(p, dtype=np.float64)
        if table.ndim != 2:
            raise DimensionError("probability table must be 2-d")
    if np.any(table < 0):
        raise ProbabilityError("negative probability")
    if abs(table.sum() - 1.0) > NORM_TOL:
        raise ProbabilityError(f"probabilities sum to {table.sum()!r}, not 1")
    return DensityMatrix(np.diag(table.ravel()).astype(np.complex128), table.shape)


def haar_random_unitary(d, seed=0):
    """Haar unitary from a QR of a complex Ginibre matrix with R-phase fix."""
    rng = make_rng(seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def haar_random_pure(d, seed=0, dims=None):
    rng = make_rng(seed)
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState(z / np.linalg.norm(z), (d,) if dims is None else dims)


def random_density(d, seed=0, rank=None, dims=None):
    """Random mixed state from a Ginibre matrix of the given rank."""
    rng = make_rng(seed)
    k = d if rank is None else rank
    g = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    return DensityMatrix(rho, (d,) if dims is None else dims)


def validate_density(m, dims=None, tol=STATE_TOL):
    """Return ``m`` as a DensityMatrix or raise naming the failed invariant."""
    m = qmath.as_cmat(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"density matrix must be square, got {m.shape}")
    dims = (m.shape[0],) if dims is None else dims
    defect = qmath.hermitian_defect(m)
    if defect > tol:
        raise HermitianityError(f"not Hermitian (max deviation {defect:.3e})")
    w = qmath.eigvalsh(m)
    if w[-1] < -tol:
        raise PositivityError(f"negative eigenvalue {w[-1]:.3e}")
    tr = float(np.trace(m).real)
    if abs(tr - 1.0) > tol:
        raise TraceError(f"trace is {tr!r}, not 1")
    return DensityMatrix(m, dims)
