import numpy as np
import pytest

from tempocorr import qmath
from tempocorr.errors import BasisError, DimensionError, HermitianityError, PositivityError, ProbabilityError, TraceError
from tempocorr.states import (BasisPair, PureState, cc_state, haar_random_unitary, make_rng, max_coherent,
                              max_entangled, random_density, validate_density)


def test_make_rng_streams_are_reproducible_and_distinct():
    a = make_rng(5, 1).standard_normal(4)
    np.testing.assert_array_equal(a, make_rng(5, 1).standard_normal(4))
    assert not np.allclose(a, make_rng(5, 2).standard_normal(4))
    assert not np.allclose(a, make_rng(6, 0).standard_normal(4))


def test_haar_unitary_is_unitary():
    for d in (2, 3, 5):
        assert qmath.is_unitary(haar_random_unitary(d, seed=d))


def test_haar_second_moment():
    # E|U_00|^2 = 1/d and E|U_00|^4 = 2/(d(d+1)) for Haar measure
    d, n = 3, 10_000
    rng = make_rng(99)
    x = np.array([abs(haar_random_unitary(d, rng)[0, 0]) ** 2 for _ in range(n)])
    assert x.mean() == pytest.approx(1 / d, abs=5e-3)
    assert (x ** 2).mean() == pytest.approx(2 / (d * (d + 1)), abs=5e-3)


def test_max_coherent_and_entangled():
    np.testing.assert_allclose(max_coherent(2).vec, [2 ** -0.5] * 2)
    u = haar_random_unitary(3, seed=1)
    assert np.linalg.norm(max_coherent(3, u).vec) == pytest.approx(1.0)
    assert max_entangled(2).vec[3] == pytest.approx(2 ** -0.5)
    with pytest.raises(DimensionError):
        max_entangled(1)


def test_pure_state_norm():
    with pytest.raises(ValueError):
        PureState(np.array([1.0, 1.0]), (2,))


def test_cc_state():
    rho = cc_state([[0.5, 0.0], [0.25, 0.25]])
    assert rho.dims == (2, 2)
    assert np.count_nonzero(rho.mat - np.diag(np.diag(rho.mat))) == 0
    assert cc_state({(0, 1): 1.0}, d=2).mat[1, 1] == 1.0
    with pytest.raises(ProbabilityError):
        cc_state([[0.5, 0.6], [0.0, 0.0]])


def test_basis_pair_checks_unitarity():
    with pytest.raises(BasisError):
        BasisPair(np.ones((2, 2)), np.eye(2))
    bp = BasisPair.random(2, 3, seed=0)
    assert (bp.d0, bp.d1) == (2, 3)


def test_validate_density_failures():
    validate_density(random_density(3, seed=0).mat)
    with pytest.raises(HermitianityError):
        validate_density(np.array([[0.5, 1], [0, 0.5]]))
    with pytest.raises(PositivityError):
        validate_density(np.diag([1.5, -0.5]))
    with pytest.raises(TraceError):
        validate_density(np.eye(2))
