"""Quantum channels in Kraus and Choi form, plus the built-in channel zoo.

Choi states are ordered ``output (x) input`` and normalised to unit trace:
``C = (Phi (x) id)(|Omega><Omega|)`` with ``|Omega> = (1/sqrt d0) sum_i |a_i a_i>``.
For the computational input basis the entry at row ``(k, i)``, column
``(l, j)`` is ``<k|Phi(|i><j|)|l> / d0``.
"""
from dataclasses import dataclass, field

import numpy as np

from . import qmath
from .errors import DimensionError, PositivityError, ProbabilityError, RangeError, TraceError, UnitarityError
from .states import DensityMatrix, as_matrix, haar_random_unitary, make_rng

CPTP_TOL = 1e-9
KRAUS_CUTOFF = 1e-10
UNITARY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Map ``rho -> sum_k K_k rho K_k^dagger`` with each ``K_k`` of shape (d_out, d_in).

    Trace preservation is not enforced here so that :func:`is_cptp` can
    diagnose defective sets; every zoo constructor returns a CPTP channel.
    """

    kraus: tuple
    name: str = field(default="", compare=False)

    def __post_init__(self):
        ops = tuple(np.array(k, dtype=np.complex128) for k in self.kraus)
        if not ops:
            raise DimensionError("a channel needs at least one Kraus element")
        shape = ops[0].shape
        if len(shape) != 2 or any(k.shape != shape for k in ops):
            raise DimensionError("Kraus elements must be matrices of one common shape")
        for k in ops:
            k.setflags(write=False)
        object.__setattr__(self, "kraus", ops)

    @property
    def d_out(self):
        return self.kraus[0].shape[0]

    @property
    def d_in(self):
        return self.kraus[0].shape[1]

    def tp_matrix(self):
        return sum(qmath.dagger(k) @ k for k in self.kraus)

    def __call__(self, x):
        return apply_map(self, x)


@dataclass(frozen=True, eq=False)
class ChoiState:
    """Normalised Choi state on H1 (x) H0.

    ``input_basis`` records the basis ``{|a_i>}`` used to build ``|Omega>``;
    ``None`` means computational.
    """

    state: DensityMatrix
    input_basis: np.ndarray = None

    @property
    def mat(self):
        return self.state.mat

    @property
    def d_out(self):
        return self.state.dims[0]

    @property
    def d_in(self):
        return self.state.dims[1]

    @classmethod
    def from_matrix(cls, mat, d_out, d_in, input_basis=None, tol=CPTP_TOL):
        """Checked constructor: raises if the ChoiState invariants fail."""
        mat = qmath.as_cmat(mat)
        state = DensityMatrix(mat, (d_out, d_in))
        if qmath.hermitian_defect(mat) > tol:
            raise PositivityError("Choi matrix is not Hermitian")
        w = qmath.eigvalsh(0.5 * (mat + qmath.dagger(mat)))
        if w[-1] < -tol:
            raise PositivityError(f"Choi matrix has negative eigenvalue {w[-1]:.3e}")
        marg = qmath.partial_trace(mat, (d_out, d_in), keep="second")
        dev = float(np.max(np.abs(marg - np.eye(d_in) / d_in)))
        if dev > tol:
            raise TraceError(f"input marginal deviates from I/d0 by {dev:.3e}")
        return cls(state, input_basis)


@dataclass(frozen=True)
class CPTPVerdict:
    ok: bool
    min_eigenvalue: float
    tp_defect: float

    def __bool__(self):
        return self.ok


def _rho_matrix(rho, d):
    m = as_matrix(rho)
    if m.shape != (d, d):
        raise DimensionError(f"state of shape {m.shape} does not match channel input dimension {d}")
    return m


def apply_map(ch, x):
    """Apply the channel to an arbitrary operator (no state validation)."""
    x = _rho_matrix(x, ch.d_in)
    return sum(k @ x @ qmath.dagger(k) for k in ch.kraus)


def apply(ch, rho):
    """``sum_k K_k rho K_k^dagger`` as a DensityMatrix on the output space."""
    return DensityMatrix(apply_map(ch, rho), (ch.d_out,))


def _omega_vector(d, basis=None):
    vec = np.zeros(d * d, dtype=np.complex128)
    vec[:: d + 1] = 1.0 / np.sqrt(d)
    if basis is not None:
        basis = np.asarray(basis, dtype=np.complex128)
        vec = np.kron(basis, basis) @ vec
    return vec


def choi_matrix(ch, basis=None):
    """Unchecked normalised Choi matrix (works for non-CPTP Kraus sets too)."""
    d0 = ch.d_in
    omega = _omega_vector(d0, basis)
    eye = np.eye(d0)
    out = np.zeros((ch.d_out * d0, ch.d_out * d0), dtype=np.complex128)
    for k in ch.kraus:
        v = np.kron(k, eye) @ omega
        out += np.outer(v, v.conj())
    return out


def to_choi(ch, basis=None):
    """Choi state ``(Phi (x) id)(|Omega><Omega|)``.

    With ``basis`` (columns ``|a_i>``) the maximally entangled input is
    ``(1/sqrt d0) sum_i |a_i a_i>``, i.e. the Choi state an ancilla copy in
    that basis produces.
    """
    return ChoiState(DensityMatrix(choi_matrix(ch, basis), (ch.d_out, ch.d_in)),
                     None if basis is None else np.asarray(basis, dtype=np.complex128))


def from_choi(c, cutoff=KRAUS_CUTOFF):
    """Kraus set from the spectral decomposition of ``d0 * C``.

    Eigenvalues at or below ``cutoff`` are dropped. Raises PositivityError on
    an eigenvalue below ``-1e-9``.
    """
    if not isinstance(c, ChoiState):
        raise TypeError("from_choi expects a ChoiState")
    d1, d0 = c.d_out, c.d_in
    w, v = qmath.eigh(d0 * c.mat)
    if w[-1] < -CPTP_TOL:
        raise PositivityError(f"Choi matrix has negative eigenvalue {w[-1] / d0:.3e}")
    undo = None
    if c.input_basis is not None:
        a = c.input_basis
        # vec(K a a^T) is what the eigenvectors carry; (a a^T)^-1 = conj(a) a^dagger
        undo = np.conj(a) @ qmath.dagger(a)
    ops = []
    for lam, vec in zip(w, v.T):
        if lam <= cutoff:
            continue
        k = np.sqrt(lam) * vec.reshape(d1, d0)
        ops.append(k if undo is None else k @ undo)
    if not ops:
        raise PositivityError("Choi matrix has no eigenvalue above the Kraus cutoff")
    return KrausChannel(tuple(ops))


def is_cptp(obj, dims=None, tol=CPTP_TOL):
    """CPTP verdict with diagnostics for a Kraus set or a normalised Choi state.

    ``tp_defect`` is ``max |sum_k K_k^dagger K_k - I|`` (for Choi input, the
    equivalent ``d0 * max |Tr_out C - I/d0|``); ``min_eigenvalue`` is the
    smallest eigenvalue of the normalised Choi matrix.
    """
    if isinstance(obj, KrausChannel):
        mat = choi_matrix(obj)
        d1, d0 = obj.d_out, obj.d_in
        tp_defect = float(np.max(np.abs(obj.tp_matrix() - np.eye(d0))))
    else:
        if isinstance(obj, ChoiState):
            mat, (d1, d0) = obj.mat, obj.state.dims
        elif isinstance(obj, DensityMatrix) and len(obj.dims) == 2:
            mat, (d1, d0) = obj.mat, obj.dims
        else:
            if dims is None:
                raise DimensionError("dims (d_out, d_in) required for a raw Choi matrix")
            mat, (d1, d0) = np.asarray(obj, dtype=np.complex128), dims
        marg = qmath.partial_trace(mat, (d1, d0), keep="second")
        tp_defect = float(d0 * np.max(np.abs(marg - np.eye(d0) / d0)))
    herm = 0.5 * (mat + qmath.dagger(mat))
    min_eig = float(qmath.eigvalsh(herm)[-1])
    ok = min_eig >= -tol and tp_defect <= tol and qmath.hermitian_defect(mat) <= tol
    return CPTPVerdict(ok, min_eig, tp_defect)


def compose(after, before):
    """Channel ``after o before`` with Kraus set ``{A_i B_j}``."""
    if after.d_in != before.d_out:
        raise DimensionError(f"cannot compose: {after.d_in} != {before.d_out}")
    return KrausChannel(tuple(a @ b for a in after.kraus for b in before.kraus))


def extensional_distance(a, b):
    """Max entrywise deviation of the two maps on every ``|i><j|``."""
    if (a.d_in, a.d_out) != (b.d_in, b.d_out):
        raise DimensionError("channels act between different spaces")
    d = a.d_in
    worst = 0.0
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d), dtype=np.complex128)
            e[i, j] = 1.0
            worst = max(worst, float(np.max(np.abs(apply_map(a, e) - apply_map(b, e)))))
    return worst


def transfer_matrix(ch, basis_in=None, basis_out=None):
    """Table ``Phi[k, l, i, j] = Tr(F_kl^dagger Phi(E_ij))``.

    ``E_ij = |a_i><a_j|`` and ``F_kl = |b_k><b_l|``; computational by default.
    """
    d0, d1 = ch.d_in, ch.d_out
    a = np.eye(d0) if basis_in is None else np.asarray(basis_in)
    b = np.eye(d1) if basis_out is None else np.asarray(basis_out)
    table = np.zeros((d1, d1, d0, d0), dtype=np.complex128)
    for i in range(d0):
        for j in range(d0):
            out = apply_map(ch, np.outer(a[:, i], a[:, j].conj()))
            table[:, :, i, j] = qmath.dagger(b) @ out @ b
    return table


# ---------------------------------------------------------------------------
# channel zoo
# ---------------------------------------------------------------------------

def _check_unitary(u):
    u = qmath.as_cmat(u)
    if not qmath.is_unitary(u, UNITARY_TOL):
        raise UnitarityError(f"not unitary (defect {qmath.unitarity_defect(u):.3e})")
    return u


def unitary_channel(u, name="unitary"):
    return KrausChannel((_check_unitary(u),), name=name)


def identity_channel(d):
    return KrausChannel((np.eye(d),), name="identity")


def coherence_destroying(p, name="coherence_destroying"):
    """Channel killing ``|i><j|`` for ``i != j`` and sending ``|i><i|`` to ``sum_j p[i, j] |j><j|``.

    Kraus set ``{sqrt(p[i, j]) |j><i|}``.
    """
    table = np.asarray(p, dtype=np.float64)
    if table.ndim != 2 or table.shape[0] != table.shape[1]:
        raise ProbabilityError("transition table must be square")
    if np.any(table < 0):
        raise ProbabilityError("negative transition probability")
    rows = table.sum(axis=1)
    if np.any(np.abs(rows - 1.0) > 1e-12):
        raise ProbabilityError(f"rows must sum to 1, got {rows}")
    d = table.shape[0]
    ops = []
    for i in range(d):
        for j in range(d):
            k = np.zeros((d, d), dtype=np.complex128)
            k[j, i] = np.sqrt(table[i, j])
            ops.append(k)
    return KrausChannel(tuple(ops), name=name)


def dephasing(d=2):
    return coherence_destroying(np.eye(d), name="dephasing")


def depolarized_unitary(v, eps, name="depolarized_unitary"):
    """``rho -> (1 - eps) V rho V^dagger + eps Tr(rho) I/d``."""
    v = _check_unitary(v)
    eps = float(eps)
    if not 0.0 <= eps <= 1.0:
        raise RangeError(f"eps must lie in [0, 1], got {eps}")
    d = v.shape[0]
    ops = []
    if eps < 1.0:
        ops.append(np.sqrt(1.0 - eps) * v)
    if eps > 0.0:
        for i in range(d):
            for j in range(d):
                k = np.zeros((d, d), dtype=np.complex128)
                k[j, i] = np.sqrt(eps / d)
                ops.append(k)
    return KrausChannel(tuple(ops), name=name)


def amplitude_damping(gamma):
    if not 0.0 <= gamma <= 1.0:
        raise RangeError(f"gamma must lie in [0, 1], got {gamma}")
    k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - gamma)]], dtype=np.complex128)
    k1 = np.array([[0.0, np.sqrt(gamma)], [0.0, 0.0]], dtype=np.complex128)
    return KrausChannel((k0, k1), name="amplitude_damping")


PAULI = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}
HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2.0)


def random_channel(d_in, d_out=None, n_kraus=None, seed=0):
    """Random CPTP channel from a Haar isometry split into Kraus blocks."""
    d_out = d_in if d_out is None else d_out
    n_kraus = d_in * d_out if n_kraus is None else n_kraus
    if n_kraus * d_out < d_in:
        raise DimensionError("n_kraus * d_out must be at least d_in")
    iso = haar_random_unitary(n_kraus * d_out, make_rng(seed))[:, :d_in]
    return KrausChannel(tuple(iso[k * d_out:(k + 1) * d_out] for k in range(n_kraus)), name="random")


def random_coherence_destroying(d, seed=0):
    rng = make_rng(seed)
    table = rng.dirichlet(np.ones(d), size=d)
    # dirichlet rows sum to 1 only up to rounding
    table /= table.sum(axis=1, keepdims=True)
    return coherence_destroying(table)
