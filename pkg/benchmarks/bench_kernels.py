"""Compare the compiled and numpy sideband kernels (and the dense eigensolver route).

    python benchmarks/bench_kernels.py [--dims 8 16 32 64] [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from ionbell import _pykernels
from ionbell.hilbert import FockCutoffs, PureState
from ionbell.operators import SystemParams, red_rwa_hamiltonian
from ionbell.propagation import eigen_cache, numeric_propagate

try:
    from ionbell import _ckernels
except ImportError:
    _ckernels = None


def best_time(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dims", type=int, nargs="+", default=[8, 16, 32, 64, 128])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--dense-max", type=int, default=24, help="largest cutoff for the eigh route")
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    p = SystemParams.for_sideband("red", eta=0.1, g=10.0, nu=500.0, omega0=1e4)
    header = f"{'cutoff':>7} {'dim':>7} {'cython us':>11} {'numpy us':>11} {'speedup':>8} {'eigh ms':>9}"
    print(header)
    print("-" * len(header))
    for d in args.dims:
        c = FockCutoffs(d, d)
        amps = rng.normal(size=c.total_dim) + 1j * rng.normal(size=c.total_dim)
        # zero the raising-edge amplitudes so no leakage check trips
        t3 = amps.reshape(d, d, 2)
        t3[-1, :, 1] = 0
        t3[:, -1, 1] = 0
        amps /= np.linalg.norm(amps)
        number = max(1, 200_000 // c.total_dim)
        t_py = best_time(lambda: _pykernels.sideband_propagate(amps, d, d, 0.7, False), args.repeat, number)
        if _ckernels is not None:
            t_c = best_time(lambda: _ckernels.sideband_propagate(amps, d, d, 0.7, False), args.repeat, number)
            c_col, speed = f"{t_c * 1e6:11.2f}", f"{t_py / t_c:8.1f}"
        else:
            c_col, speed = f"{'n/a':>11}", f"{'n/a':>8}"
        eig_col = f"{'-':>9}"
        if d <= args.dense_max:
            H = red_rwa_hamiltonian(p, c)
            psi = PureState(c, amps)

            def dense():
                eigen_cache.clear()
                numeric_propagate(H, psi, 0.7)

            eig_col = f"{best_time(dense, max(1, args.repeat // 2), 1) * 1e3:9.2f}"
        print(f"{d:>7} {c.total_dim:>7} {c_col} {t_py * 1e6:11.2f} {speed} {eig_col}")


if __name__ == "__main__":
    main()
