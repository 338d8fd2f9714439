"""Ancilla protocol that moves a two-time correlation into a bipartite state.

The register is ``system (x) B (x) A`` throughout. ``A`` copies the system in
the input basis at t0, the channel then acts on the system factor, ``B``
copies it in the output basis at t1, and finally the system is projected on
the uniform superposition of the output basis and discarded. What remains on
``B (x) A`` is the joint state; the projection succeeds with probability 1/d1.
"""
from dataclasses import dataclass

import numpy as np

from . import qmath
from .channels import KrausChannel, transfer_matrix
from .errors import BasisError, DimensionError
from .states import BasisPair, DensityMatrix, as_matrix, max_coherent

STAGES = ("rho0", "rho1", "rho2", "rho3")


@dataclass(frozen=True, eq=False)
class ProtocolResult:
    success_prob: float
    joint: DensityMatrix
    trace_log: tuple  # ((stage name, DensityMatrix), ...)

    def stage(self, name):
        return dict(self.trace_log)[name]


def copy_unitary(d, basis=None):
    """Controlled shift in ``basis``: ``|a_i>|0> -> |a_i>|a_i>``.

    Off the ``|., 0>`` subspace it acts as ``|a_i>|j> -> |a_i> A|i+j mod d>``
    with ``A`` the basis unitary, written ``(A (x) A) CSHIFT (A^dagger (x) I)``.
    """
    a = np.eye(d, dtype=np.complex128) if basis is None else np.asarray(basis, dtype=np.complex128)
    if a.shape != (d, d) or not qmath.is_unitary(a):
        raise BasisError(f"expected a {d}x{d} unitary basis")
    shift = np.zeros((d * d, d * d), dtype=np.complex128)
    for i in range(d):
        for j in range(d):
            shift[i * d + (i + j) % d, i * d + j] = 1.0
    return np.kron(a, a) @ shift @ np.kron(qmath.dagger(a), np.eye(d))


def apply_local(rho, dims, op, targets, out_dims=None):
    """Conjugate ``rho`` by ``op`` acting on the factors ``targets``.

    ``op`` maps the product of the target dimensions to ``out_dims`` (same as
    the inputs by default), so dimension-changing Kraus operators work.
    Returns the new matrix and dims.
    """
    dims = tuple(dims)
    targets = tuple(targets)
    n, k = len(dims), len(targets)
    in_dims = tuple(dims[t] for t in targets)
    out_dims = in_dims if out_dims is None else tuple(out_dims)
    op_t = np.asarray(op, dtype=np.complex128).reshape(*out_dims, *in_dims)
    t = np.asarray(rho, dtype=np.complex128).reshape(*dims, *dims)
    t = np.tensordot(op_t, t, axes=(list(range(k, 2 * k)), list(targets)))
    t = np.moveaxis(t, list(range(k)), list(targets))
    t = np.tensordot(t, op_t.conj(), axes=([n + q for q in targets], list(range(k, 2 * k))))
    t = np.moveaxis(t, list(range(2 * n - k, 2 * n)), [n + q for q in targets])
    new_dims = list(dims)
    for q, dq in zip(targets, out_dims):
        new_dims[q] = dq
    side = int(np.prod(new_dims))
    return t.reshape(side, side), tuple(new_dims)


def _check_inputs(rho0, ch, bases):
    if not isinstance(ch, KrausChannel):
        raise TypeError("channel must be a KrausChannel")
    if not isinstance(bases, BasisPair):
        raise TypeError("bases must be a BasisPair")
    if bases.d0 != ch.d_in or bases.d1 != ch.d_out:
        raise DimensionError("basis dimensions do not match the channel")
    rho = as_matrix(rho0)
    if rho.shape != (ch.d_in, ch.d_in):
        raise DimensionError(f"initial state of shape {rho.shape} does not match d0={ch.d_in}")
    return rho


def run_protocol(rho0, ch, bases=None):
    """Simulate the protocol register by register and return the joint state."""
    bases = BasisPair.computational(ch.d_in, ch.d_out) if bases is None else bases
    rho = _check_inputs(rho0, ch, bases)
    d0, d1 = ch.d_in, ch.d_out

    ket0_b = np.zeros((d1, d1), dtype=np.complex128)
    ket0_b[0, 0] = 1.0
    ket0_a = np.zeros((d0, d0), dtype=np.complex128)
    ket0_a[0, 0] = 1.0
    dims = (d0, d1, d0)
    r0 = np.kron(np.kron(rho, ket0_b), ket0_a)

    r1, _ = apply_local(r0, dims, copy_unitary(d0, bases.b0), (0, 2))

    r2 = None
    for k in ch.kraus:
        term, dims2 = apply_local(r1, dims, k, (0,), out_dims=(d1,))
        r2 = term if r2 is None else r2 + term

    r3, _ = apply_local(r2, dims2, copy_unitary(d1, bases.b1), (0, 1))

    gamma0 = max_coherent(d1, bases.b1).vec
    t = r3.reshape(d1, d1 * d0, d1, d1 * d0)
    projected = np.einsum("a,aibj,b->ij", gamma0.conj(), t, gamma0)
    prob = float(np.trace(projected).real)
    joint = DensityMatrix(projected / prob, (d1, d0))

    log = (
        ("rho0", DensityMatrix(r0, dims)),
        ("rho1", DensityMatrix(r1, dims)),
        ("rho2", DensityMatrix(r2, dims2)),
        ("rho3", DensityMatrix(r3, dims2)),
    )
    return ProtocolResult(prob, joint, log)


def analytic_joint(rho0, ch, bases=None):
    """Closed form ``sum rho_ij Phi_kl,ij F_kl (x) E_ij`` on ``B (x) A``."""
    bases = BasisPair.computational(ch.d_in, ch.d_out) if bases is None else bases
    rho = _check_inputs(rho0, ch, bases)
    a, b = bases.b0, bases.b1
    d0, d1 = ch.d_in, ch.d_out
    coeff_rho = qmath.dagger(a) @ rho @ a  # rho_ij = <a_i|rho|a_j>
    phi = transfer_matrix(ch, a, b)  # [k, l, i, j]
    m = np.einsum("ij,klij->kilj", coeff_rho, phi).reshape(d1 * d0, d1 * d0)
    frame = np.kron(b, a)
    return DensityMatrix(frame @ m @ qmath.dagger(frame), (d1, d0))
