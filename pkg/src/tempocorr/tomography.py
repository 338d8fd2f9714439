"""Simulated state tomography of Choi states and channel extraction."""
from dataclasses import dataclass, field

import numpy as np

from . import qmath
from .channels import PAULI, ChoiState, from_choi
from .errors import DimensionError, PositivityError, TraceError
from .states import DensityMatrix, as_matrix, make_rng

MARGINAL_TOL = 1e-6


def gell_mann_basis(d):
    """Identity plus the generalized Gell-Mann matrices, with labels.

    Pauli labels are used for d = 2. Every element ``O`` satisfies
    ``Tr(O_a O_b) = 0`` for ``a != b``.
    """
    if d == 2:
        return list("IXYZ"), [PAULI[c] for c in "IXYZ"]
    labels = ["I"]
    ops = [np.eye(d, dtype=np.complex128)]
    for j in range(d):
        for k in range(j + 1, d):
            s = np.zeros((d, d), dtype=np.complex128)
            s[j, k] = s[k, j] = 1.0
            a = np.zeros((d, d), dtype=np.complex128)
            a[j, k] = -1j
            a[k, j] = 1j
            labels += [f"S{j}{k}", f"A{j}{k}"]
            ops += [s, a]
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        labels.append(f"D{l}")
        ops.append(np.diag(diag * np.sqrt(2.0 / (l * (l + 1)))).astype(np.complex128))
    return labels, ops


@dataclass(frozen=True, eq=False)
class ObservableBasis:
    labels: tuple
    ops: tuple
    dims: tuple
    _spectra: dict = field(default_factory=dict, repr=False)

    def __len__(self):
        return len(self.ops)

    def spectrum(self, index):
        if index not in self._spectra:
            self._spectra[index] = qmath.eigh(self.ops[index])
        return self._spectra[index]


@dataclass(frozen=True, eq=False)
class TomographyRecord:
    labels: tuple
    estimates: np.ndarray
    shots: object  # int or "exact"
    seed: object = None

    def to_dict(self):
        return {
            "labels": list(self.labels),
            "estimates": [float(x) for x in self.estimates],
            "shots": self.shots,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(tuple(data["labels"]), np.asarray(data["estimates"], dtype=float), data["shots"], data.get("seed"))


def product_observable_basis(d0, d1=None):
    """Products ``O_out (x) O_in`` of single-system bases, output factor first."""
    d1 = d0 if d1 is None else d1
    for d in (d0, d1):
        if d not in (2, 3, 4):
            raise DimensionError(f"observable bases are provided for d in {{2, 3, 4}}, got {d}")
    lab1, ops1 = gell_mann_basis(d1)
    lab0, ops0 = gell_mann_basis(d0)
    sep = "" if d0 == d1 == 2 else "."
    labels, ops = [], []
    for la, oa in zip(lab1, ops1):
        for lb, ob in zip(lab0, ops0):
            labels.append(f"{la}{sep}{lb}")
            ops.append(np.kron(oa, ob))
    return ObservableBasis(tuple(labels), tuple(ops), (d1, d0))


def measure(rho, basis, shots="exact", seed=0):
    """Expectation values of every observable, exact or from finite sampling.

    With ``shots=N`` each observable is measured independently in its
    eigenbasis ``N`` times using the sub-stream ``(seed, index)``.
    """
    m = as_matrix(rho)
    side = basis.ops[0].shape[0]
    if m.shape != (side, side):
        raise DimensionError(f"state of shape {m.shape} does not match basis side {side}")
    if shots == "exact":
        est = np.array([np.real(np.trace(m @ o)) for o in basis.ops])
        return TomographyRecord(basis.labels, est, "exact", None)
    shots = int(shots)
    if shots <= 0:
        raise ValueError("shots must be positive")
    est = np.empty(len(basis))
    for idx in range(len(basis)):
        w, v = basis.spectrum(idx)
        probs = np.real(np.einsum("ik,ij,jk->k", v.conj(), m, v))
        probs = np.clip(probs, 0.0, None)
        probs /= probs.sum()
        counts = make_rng(seed, idx).multinomial(shots, probs)
        est[idx] = float(counts @ w) / shots
    return TomographyRecord(basis.labels, est, shots, int(seed))


def project_to_simplex(values):
    """Euclidean projection of a real vector onto the probability simplex."""
    v = np.asarray(values, dtype=float)
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    ind = np.arange(1, v.size + 1)
    rho = np.nonzero(u - css / ind > 0)[0][-1]
    theta = css[rho] / (rho + 1.0)
    return np.clip(v - theta, 0.0, None)


def project_to_physical(m):
    """Closest density matrix in Frobenius norm: Hermitize, then fix the spectrum."""
    h = 0.5 * (m + qmath.dagger(m))
    w, v = qmath.eigh(h)
    w = project_to_simplex(w)
    out = (v * w) @ qmath.dagger(v)
    return 0.5 * (out + qmath.dagger(out))


def reconstruct(record, basis):
    """Linear inversion followed by projection onto the physical set."""
    if tuple(record.labels) != tuple(basis.labels):
        raise DimensionError("record labels do not match the observable basis")
    est = np.asarray(record.estimates, dtype=float)
    side = basis.ops[0].shape[0]
    lin = np.zeros((side, side), dtype=np.complex128)
    for e, o in zip(est, basis.ops):
        lin += e / np.real(np.trace(o @ o)) * o
    return DensityMatrix(project_to_physical(lin), basis.dims)


def choi_marginal_defect(rho, d1, d0):
    marg = qmath.partial_trace(as_matrix(rho), (d1, d0), keep="second")
    return float(np.max(np.abs(marg - np.eye(d0) / d0)))


def channel_from_choi_state(rho, bases=None, tol=MARGINAL_TOL):
    """Read ``Phi[k, l, i, j] = d0 <b_k a_i|rho|b_l a_j>`` off a Choi state.

    Returns ``(phi, channel)``. The channel comes from :func:`from_choi` after
    the input marginal is restored to ``I/d0`` by conjugating with
    ``I (x) (d0 Tr_out rho)^(-1/2)``. ``rho`` must satisfy the Choi
    invariants to within ``tol``; pass ``tol=np.inf`` to always repair.
    """
    if not isinstance(rho, DensityMatrix) or len(rho.dims) != 2:
        raise DimensionError("need a bipartite DensityMatrix with dims (d1, d0)")
    d1, d0 = rho.dims
    m = rho.mat
    w = qmath.eigvalsh(0.5 * (m + qmath.dagger(m)))
    if w[-1] < -tol:
        raise PositivityError(f"Choi state has negative eigenvalue {w[-1]:.3e}")
    defect = choi_marginal_defect(m, d1, d0)
    if defect > tol:
        raise TraceError(f"Choi input marginal deviates from I/d0 by {defect:.3e}")

    a = np.eye(d0) if bases is None else bases.b0
    b = np.eye(d1) if bases is None else bases.b1
    frame = np.kron(b, a)
    coeff = qmath.dagger(frame) @ m @ frame  # rows (k, i), cols (l, j)
    phi = d0 * coeff.reshape(d1, d0, d1, d0).transpose(0, 2, 1, 3)

    marg = qmath.partial_trace(m, (d1, d0), keep="second")
    fix = qmath.herm_function(0.5 * d0 * (marg + qmath.dagger(marg)), lambda x: 1.0 / np.sqrt(x))
    op = np.kron(np.eye(d1), fix)
    repaired = op @ m @ qmath.dagger(op)
    repaired = 0.5 * (repaired + qmath.dagger(repaired))
    choi = ChoiState(DensityMatrix(repaired, (d1, d0)), None if bases is None else bases.b0)
    return phi, from_choi(choi)
