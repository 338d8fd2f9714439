import numpy as np
import pytest

from tempocorr import qmath
from tempocorr.errors import DimensionError, HermitianityError
from tempocorr.states import make_rng, random_density

import oracles


def test_partial_trace_of_product():
    a = random_density(2, seed=1).mat
    b = random_density(3, seed=2).mat
    ab = np.kron(a, b)
    np.testing.assert_allclose(qmath.partial_trace(ab, (2, 3), keep=0), a, atol=1e-14)
    np.testing.assert_allclose(qmath.partial_trace(ab, (2, 3), keep="second"), b, atol=1e-14)


def test_partial_trace_dimension_mismatch():
    with pytest.raises(DimensionError):
        qmath.partial_trace(np.eye(6), (2, 2), keep=0)


def test_partial_transpose_bell_spectrum():
    w = np.sort(np.linalg.eigvalsh(qmath.partial_transpose(oracles.bell(), (2, 2))))
    np.testing.assert_allclose(w, [-0.5, 0.5, 0.5, 0.5], atol=1e-14)


def test_mul_rejects_mismatch():
    with pytest.raises(DimensionError):
        qmath.mul(np.eye(2), np.eye(3))


def test_eigh_rejects_non_hermitian():
    with pytest.raises(HermitianityError):
        qmath.eigh(np.array([[0, 1], [0, 0]]))


def test_trace_norm_against_scipy():
    rng = make_rng(3)
    m = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    assert qmath.trace_norm(m) == pytest.approx(oracles.trace_norm(m), rel=1e-12)
    h = m + m.conj().T
    assert qmath.trace_norm(h) == pytest.approx(oracles.trace_norm(h), rel=1e-10)


def test_bell_minus_mixed():
    assert qmath.trace_norm(oracles.bell() - np.eye(4) / 4) == pytest.approx(
        oracles.BELL_MINUS_MIXED_TRACE_NORM, abs=1e-12)


def test_expi_hermitian_is_unitary():
    x = make_rng(4).standard_normal(9)
    h = qmath.hermitian_from_params(x, 3)
    assert qmath.is_hermitian(h)
    assert qmath.is_unitary(qmath.expi_hermitian(h))


def test_purity_range():
    assert qmath.purity(np.eye(4) / 4) == pytest.approx(0.25)
    assert qmath.purity(oracles.bell()) == pytest.approx(1.0)
