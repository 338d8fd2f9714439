import numpy as np
import pytest

from tempocorr import channels
from tempocorr.entanglement import (_mix_products, _two_qubit_products, concurrence_2q, diamond_lower, distance_to_separable_upper, entropy_of_entanglement,
                                    eof, eof_2q, eof_upper_bound, is_ppt, separable_distance_search,
                                    von_neumann_entropy)
from tempocorr.errors import DimensionError
from tempocorr.states import haar_random_pure, haar_random_unitary, max_entangled, random_density

import oracles


def test_entropies():
    assert von_neumann_entropy(np.eye(4) / 4) == pytest.approx(2.0)
    assert entropy_of_entanglement(max_entangled(3)) == pytest.approx(np.log2(3))
    prod = np.kron([1, 0], [0, 1]).astype(complex)
    assert entropy_of_entanglement(prod, (2, 2)) == 0.0


@pytest.mark.parametrize("p", [0.0, 1 / 3, 0.5, 0.9, 1.0])
def test_werner_concurrence_and_eof(p):
    rho = oracles.werner(p)
    c = oracles.werner_concurrence(p)
    assert concurrence_2q(rho) == pytest.approx(c, abs=1e-10)
    assert eof_2q(rho).value == pytest.approx(oracles.eof_from_c(c), abs=1e-9)


def test_werner_eof_frozen_value():
    assert eof_2q(oracles.werner(oracles.WERNER_P)).value == pytest.approx(oracles.WERNER_EOF_P09, abs=1e-12)


def test_concurrence_rejects_wrong_shape():
    with pytest.raises(DimensionError):
        concurrence_2q(np.eye(9) / 9)


@pytest.mark.parametrize("seed", range(3))
def test_roof_bound_is_tight_on_two_qubits(seed):
    rho = random_density(4, seed=seed, rank=2, dims=(2, 2))
    exact = eof_2q(rho).value
    bound = eof_upper_bound(rho, restarts=6, seed=seed).value
    assert exact - 1e-9 <= bound <= exact + 1e-5


def test_roof_bound_on_werner():
    rep = eof_upper_bound(oracles.werner(oracles.WERNER_P), (2, 2), restarts=4)
    assert rep.value == pytest.approx(oracles.WERNER_EOF_P09, abs=1e-6)
    assert rep.kind == "upper_bound"


def test_roof_pure_input():
    psi = haar_random_pure(9, seed=1, dims=(3, 3))
    rep = eof_upper_bound(psi)
    assert rep.method == "pure"
    assert rep.value == pytest.approx(entropy_of_entanglement(psi))


def test_eof_dispatch():
    assert eof(oracles.werner(0.5), (2, 2)).method == "wootters"
    assert eof(random_density(9, seed=2, dims=(3, 3)), restarts=2).kind == "upper_bound"


def test_ppt():
    assert not is_ppt(oracles.bell(), (2, 2)).ppt
    assert is_ppt(oracles.bell(), (2, 2)).min_eigenvalue == pytest.approx(-0.5)
    assert is_ppt(oracles.werner(1 / 3), (2, 2)).ppt


def test_distance_to_separable():
    assert distance_to_separable_upper(oracles.bell(), (2, 2), restarts=2) <= \
        oracles.BELL_SEPARABLE_CERTIFICATE + 1e-6
    assert distance_to_separable_upper(np.eye(4) / 4, (2, 2)) <= 1e-9
    prod = np.kron(random_density(2, seed=1).mat, random_density(2, seed=2).mat)
    assert distance_to_separable_upper(prod, (2, 2), restarts=2) <= 1e-6


def test_separable_certificate_is_valid_state():
    cert = separable_distance_search(oracles.werner(0.6), (2, 2), restarts=2)
    omega = cert.omega()
    assert np.trace(omega).real == pytest.approx(1.0)
    assert np.all(cert.weights >= 0)
    assert oracles.trace_norm(oracles.werner(0.6) - omega) == pytest.approx(cert.value, abs=1e-9)


def test_diamond_lower_bounds():
    x = channels.unitary_channel(channels.PAULI["X"])
    assert diamond_lower(channels.identity_channel(2), x, restarts=1) == pytest.approx(2.0, abs=1e-9)
    v = haar_random_unitary(2, seed=3)
    val = diamond_lower(channels.depolarized_unitary(v, 0.1), channels.unitary_channel(v), restarts=1)
    assert val == pytest.approx(oracles.diamond_depolarized(0.1), abs=1e-3)
    assert val <= 2.0 + 1e-12


def test_two_qubit_product_decomposition_is_exact():
    product = np.kron(random_density(2, seed=1).mat, random_density(2, seed=2).mat)
    for m in (np.eye(4) / 4, oracles.werner(1 / 3), product):
        w, a, b = _two_qubit_products(m)
        np.testing.assert_allclose(_mix_products(w, a, b), m, atol=1e-12)
    assert _two_qubit_products(oracles.bell()) is None


def test_separable_mixtures_certified():
    rng = np.random.default_rng(3)
    weights = rng.dirichlet(np.ones(3))
    mix = sum(wt * np.kron(random_density(2, seed=10 + k).mat, random_density(2, seed=20 + k).mat)
              for k, wt in enumerate(weights))
    assert distance_to_separable_upper(mix, (2, 2), restarts=1) <= 1e-9
