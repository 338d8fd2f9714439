"""Acceptance criteria, one test per criterion.

Each test prints a single ``[PASS]`` or ``[FAIL]`` line with the measured
worst case and the wall time against its budget, then asserts. Run
``python3 tests/test_acceptance.py`` to get the lines without pytest.
"""
import sys
import time

import numpy as np
import pytest

from tempocorr import channels, qmath
from tempocorr.channels import KrausChannel
from tempocorr.entanglement import diamond_search, distance_to_separable_upper, is_ppt
from tempocorr.protocol import analytic_joint, run_protocol
from tempocorr.quantifier import is_nonincreasing, q_fixed_basis, q_inf, q_sweep, sigma_u
from tempocorr.states import BasisPair, DensityMatrix, haar_random_unitary, make_rng, max_coherent, random_density
from tempocorr.tomography import channel_from_choi_state, measure, product_observable_basis, reconstruct

import oracles


class Criterion:
    def __init__(self, number, title, budget, out=print):
        self.number, self.title, self.budget = number, title, budget
        self.out = out
        self.checks = []

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def check(self, name, ok, detail=""):
        self.checks.append((name, bool(ok), detail))

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.t0
        self.check("runtime", elapsed < self.budget, f"{elapsed:.1f}s < {self.budget}s")
        if exc_type is not None:
            self.check("raised", False, repr(exc))
        failed = [c for c in self.checks if not c[1]]
        status = "PASS" if not failed else "FAIL"
        detail = "; ".join(f"{n}: {d}" for n, ok, d in self.checks if d)
        line = f"[{status}] criterion {self.number} ({self.title}): {detail}"
        self.out(line)
        self.passed = not failed
        return False


@pytest.fixture
def out(request):
    reporter = request.config.pluginmanager.getplugin("terminalreporter")
    if reporter is None:
        return print

    def write(line):
        reporter.ensure_newline()
        reporter.write_line(line)
    return write


def _assert(crit):
    failed = [f"{n} ({d})" for n, ok, d in crit.checks if not ok]
    assert not failed, f"criterion {crit.number} failed: {', '.join(failed)}"


def test_criterion_1_unitary_channels_reach_log_d(out):
    with Criterion(1, "unitary channels give log2 d", 60, out) as c:
        worst_q, worst_var = 0.0, 0.0
        for d, count in ((2, 100), (3, 25)):
            for n in range(count):
                ch = channels.unitary_channel(haar_random_unitary(d, make_rng(1, d, n)))
                for b in range(10):
                    rep = q_fixed_basis(ch, BasisPair.random(d, seed=make_rng(2, d, n, b)))
                    worst_q = max(worst_q, abs(rep.q_value - np.log2(d)))
                rep = q_inf(ch, restarts=8, seed=n)
                worst_var = max(worst_var, rep.landscape_variance())
                worst_q = max(worst_q, abs(rep.q_value - np.log2(d)))
        c.check("q = log2 d", worst_q < 1e-8, f"max |q - log2 d| = {worst_q:.2e}")
        c.check("flat landscape", worst_var < 1e-9, f"max variance = {worst_var:.2e}")
    _assert(c)


def test_criterion_2_coherence_destroying_channels_vanish(out):
    with Criterion(2, "coherence-destroying channels give 0", 30, out) as c:
        worst_off, worst_q = 0.0, 0.0
        for d in (2, 3):
            for n in range(20):
                ch = channels.random_coherence_destroying(d, seed=make_rng(3, d, n))
                choi = channels.choi_matrix(ch)
                worst_off = max(worst_off, float(np.abs(choi - np.diag(np.diag(choi))).sum()))
                worst_q = max(worst_q, q_inf(ch, restarts=8, seed=n).q_value)
        c.check("cc Choi state", worst_off < 1e-12, f"off-diagonal mass = {worst_off:.2e}")
        c.check("q_inf = 0", worst_q < 1e-6, f"max q = {worst_q:.2e}")
    _assert(c)


def test_criterion_3_depolarized_unitary_sweep(out):
    with Criterion(3, "sweep of the depolarized unitary", 120, out) as c:
        v = haar_random_unitary(2, seed=make_rng(4))
        grid = np.round(np.linspace(0.0, 1.0, 11), 10)
        q = np.array([r.q_value for _, r in q_sweep(v, grid, restarts=8, seed=0)])
        c.check("q(0) = 1", abs(q[0] - 1.0) <= 1e-8, f"q(0) = {q[0]:.12f}")
        c.check("q(0.1)", abs(q[1] - 0.7894) <= 1e-3, f"q(0.1) = {q[1]:.6f} (closed form {oracles.werner_q(0.1):.6f})")
        c.check("nonincreasing", is_nonincreasing(q))
        tail = q[grid >= 2 / 3]
        c.check("zero beyond 2/3", np.all(tail <= 1e-6), f"max q(eps >= 2/3) = {tail.max():.2e}")
        ref = np.array([oracles.werner_q(e) for e in grid])
        c.check("closed form", np.max(np.abs(q - ref)) < 1e-8, f"max |q - closed form| = {np.max(np.abs(q - ref)):.2e}")
    _assert(c)


def test_criterion_4_protocol_equivalence(out):
    with Criterion(4, "protocol equals closed form and Choi state", 30, out) as c:
        dev_joint, dev_choi, dev_prob = 0.0, 0.0, 0.0
        for n in range(50):
            d0, d1 = (2, 3)[n % 2], (2, 3)[(n // 2) % 2]
            ch = channels.random_channel(d0, d1, seed=make_rng(5, n))
            bases = BasisPair.random(d0, d1, seed=make_rng(6, n))
            rho0 = random_density(d0, seed=make_rng(7, n), rank=1 + n % d0)
            res = run_protocol(rho0, ch, bases)
            dev_joint = max(dev_joint, float(np.max(np.abs(res.joint.mat - analytic_joint(rho0, ch, bases).mat))))
            dev_prob = max(dev_prob, abs(res.success_prob - 1 / d1))
            mu = run_protocol(max_coherent(d0, bases.b0).density(), ch, bases)
            dev_choi = max(dev_choi, float(np.max(np.abs(mu.joint.mat - channels.to_choi(ch, bases.b0).mat))))
            dev_prob = max(dev_prob, abs(mu.success_prob - 1 / d1))
        c.check("run vs closed form", dev_joint < 1e-10, f"{dev_joint:.2e}")
        c.check("mu joint vs Choi", dev_choi < 1e-10, f"{dev_choi:.2e}")
        c.check("success 1/d1", dev_prob < 1e-10, f"{dev_prob:.2e}")
    _assert(c)


def _tomo_error(ch, shots, seed):
    basis = product_observable_basis(2)
    joint = run_protocol(max_coherent(2).density(), ch).joint
    est = reconstruct(measure(joint, basis, shots=shots, seed=seed), basis)
    return est, qmath.trace_distance(est.mat, channels.choi_matrix(ch))


def test_criterion_5_complete_determination(out):
    with Criterion(5, "tomography determines the channel", 120, out) as c:
        worst = 0.0
        for n in range(20):
            ch = channels.random_channel(2, seed=make_rng(8, n))
            est, _ = _tomo_error(ch, "exact", None)
            _, rec = channel_from_choi_state(est)
            worst = max(worst, channels.extensional_distance(ch, rec))
        c.check("exact recovery", worst < 1e-8, f"max extensional error = {worst:.2e}")
        ch = channels.random_channel(2, seed=make_rng(9))
        medians = {n: float(np.median([_tomo_error(ch, n, s)[1] for s in range(20)])) for n in (10**3, 10**4, 10**5)}
        c.check("median at 1e5", medians[10**5] < 0.02, f"median = {medians[10**5]:.4f}")
        vals = list(medians.values())
        c.check("decreasing", vals[0] > vals[1] > vals[2], "medians " + ", ".join(f"{v:.4f}" for v in vals))
    _assert(c)


def test_criterion_6_cptp_gate(out):
    with Criterion(6, "CPTP gate", 10, out) as c:
        passed, rejected, min_defect = 0, 0, np.inf
        for n in range(50):
            d_in, d_out = (2, 3)[n % 2], (2, 3)[(n // 2) % 2]
            ch = channels.random_channel(d_in, d_out, n_kraus=1 + n % 4 + (d_in > d_out), seed=make_rng(10, n))
            passed += channels.is_cptp(ch).ok
            v = channels.is_cptp(KrausChannel(tuple(1.1 * k for k in ch.kraus)))
            rejected += not v.ok
            min_defect = min(min_defect, v.tp_defect)
        c.check("valid sets pass", passed == 50, f"{passed}/50")
        c.check("scaled sets fail", rejected == 50 and min_defect > 0.1, f"{rejected}/50, min defect {min_defect:.3f}")
    _assert(c)


def test_criterion_7_unitary_postprocessing_invariance(out):
    with Criterion(7, "invariance under a final unitary", 20, out) as c:
        worst = 0.0
        for n in range(20):
            ch = channels.random_channel(2, seed=make_rng(11, n))
            v = channels.unitary_channel(haar_random_unitary(2, make_rng(12, n)))
            bases = BasisPair.random(2, seed=make_rng(13, n))
            a = q_fixed_basis(channels.compose(v, ch), bases).q_value
            b = q_fixed_basis(ch, bases).q_value
            worst = max(worst, abs(a - b))
        c.check("q unchanged", worst < 1e-8, f"max |dq| = {worst:.2e}")
    _assert(c)


def test_criterion_8_diamond_bound(out):
    with Criterion(8, "diamond-norm lower bound", 60, out) as c:
        v = haar_random_unitary(2, make_rng(14))
        target = channels.unitary_channel(v)
        us = [haar_random_unitary(2, make_rng(15, k)) for k in range(20)]
        worst_eps, worst_gap = 0.0, np.inf
        for eps in (0.05, 0.1, 0.2):
            noisy = channels.depolarized_unitary(v, eps)
            val, _ = diamond_search(noisy, target, restarts=4, seed=0)
            worst_eps = max(worst_eps, abs(val - oracles.diamond_depolarized(eps)))
            for u in us:
                zeta = sigma_u(u).density().mat
                diff = channels.apply_map(_tensor_id(noisy), zeta) - channels.apply_map(_tensor_id(target), zeta)
                worst_gap = min(worst_gap, val - oracles.trace_norm(diff))
        c.check("1.5 eps", worst_eps <= 1e-3, f"max |bound - 1.5 eps| = {worst_eps:.2e}")
        c.check("dominates sigma_U", worst_gap >= -1e-9, f"min(bound - sigma_U value) = {worst_gap:.2e}")
    _assert(c)


def _tensor_id(ch):
    d = ch.d_in
    return KrausChannel(tuple(np.kron(k, np.eye(d)) for k in ch.kraus))


def test_criterion_9_distance_certificate(out):
    with Criterion(9, "distance to the separable set", 60, out) as c:
        bell = oracles.bell()
        dist = distance_to_separable_upper(bell, (2, 2), restarts=4)
        c.check("Bell bound", dist <= 1.0 + 1e-6, f"{dist:.10f}")
        c.check("Bell not PPT", not is_ppt(bell, (2, 2)).ppt)
        worst = 0.0
        for n in range(5):
            rng = make_rng(16, n)
            weights = rng.dirichlet(np.ones(3))
            mix = sum(w * np.kron(random_density(2, seed=rng).mat, random_density(2, seed=rng).mat) for w in weights)
            worst = max(worst, distance_to_separable_upper(mix, (2, 2), restarts=4))
        worst = max(worst, distance_to_separable_upper(np.eye(4) / 4, (2, 2)))
        c.check("separable inputs", worst <= 1e-6, f"max bound = {worst:.2e}")
    _assert(c)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
