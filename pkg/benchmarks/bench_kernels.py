"""Time the compiled kernels against their numpy fallbacks.

Both implementations are imported from the same module and called directly,
so one process measures both paths regardless of TEMPOCORR_DISABLE_NUMBA.
Compilation happens in a warm-up call outside the timed region.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--number 200]
"""
import argparse
import timeit

import numpy as np

from tempocorr import _kernels
from tempocorr.states import make_rng, random_density


def _herm(n, rng):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return np.ascontiguousarray((a + a.conj().T) / 2)


def cases():
    rng = make_rng(0)
    for n in (4, 9, 16, 36):
        a = _herm(n, rng)
        yield (f"eigh n={n}",
               lambda a=a: _kernels._jacobi_eigh_nb(a, _kernels.JACOBI_TOL, _kernels.JACOBI_MAX_SWEEPS),
               lambda a=a: _kernels.eigh_numpy(a))
    rho = np.ascontiguousarray(random_density(4, seed=1).mat)
    yield ("concurrence 2x2",
           lambda: _kernels._concurrence_nb(rho, _kernels._YY, _kernels.WOOTTERS_RANK_CUTOFF),
           lambda: _kernels.concurrence_numpy(rho))
    for d in (2, 3):
        r = d * d
        vt = rng.standard_normal((r, r)) + 1j * rng.standard_normal((r, r))
        vt = np.ascontiguousarray(vt / np.linalg.norm(vt))
        w = np.ascontiguousarray(np.linalg.qr(rng.standard_normal((2 * r, r)) + 0j)[0])
        yield (f"roof objective {d}x{d}",
               lambda vt=vt, w=w, d=d: _kernels._roof_nb(vt, w, d, d),
               lambda vt=vt, w=w, d=d: _kernels.roof_value_grad_numpy(vt, w, d, d))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--number", type=int, default=200)
    args = parser.parse_args(argv)
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")

    print(f"{'kernel':<22}{'numba us':>12}{'numpy us':>12}{'speedup':>10}")
    for name, fast, slow in cases():
        fast()
        slow()
        t_fast = min(timeit.repeat(fast, repeat=args.repeat, number=args.number)) / args.number * 1e6
        t_slow = min(timeit.repeat(slow, repeat=args.repeat, number=args.number)) / args.number * 1e6
        print(f"{name:<22}{t_fast:>12.2f}{t_slow:>12.2f}{t_slow / t_fast:>9.2f}x")


if __name__ == "__main__":
    main()
