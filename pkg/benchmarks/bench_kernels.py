"""Compare the compiled kernels against the pure-numpy fallbacks.

Run:  python3 benchmarks/bench_kernels.py

Times the hot kernels both ways in one process (the fallback implementations
are importable regardless of which backend is active) and then the end-to-end
recovery solve, which is FFT-dominated and shows how much of the wall time
the kernels actually account for.  Set FRSAMP_NO_NUMBA=1 to check that the
public entry points fall back cleanly.
"""

import time

import numpy as np

from frsamp import _kernels
from frsamp.fields import FamilySpec, build_family
from frsamp.propagators import PdeKind, snapshot_grid
from frsamp.recovery import SolverConfig, observe, recover_l1, sample_uniform


def timeit(fn, *args, repeat=5):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    print(f"active backend: {_kernels.backend()}")
    have_numba = _kernels.BACKEND == "numba"

    rows = []

    def compare(name, numba_fn, numpy_fn, args, rtol=1e-9):
        t_np, ref = timeit(numpy_fn, *args)
        if have_numba:
            numba_fn(*args)  # compile outside the timed region
            t_nb, out = timeit(numba_fn, *args)
            ok = np.allclose(out, ref, rtol=rtol)
            rows.append((name, t_np, t_nb, t_np / t_nb, ok))
        else:
            rows.append((name, t_np, None, None, True))

    compare("lattice_power_sum d=3 N=64 p=2",
            _kernels._lattice_power_sum_nb if have_numba else None,
            _kernels._lattice_power_sum_np, (64, 3, 2.0))
    compare("gaussian_lattice_sum d=3 N=64",
            _kernels._gaussian_lattice_sum_nb if have_numba else None,
            _kernels._gaussian_lattice_sum_np, (64, 3, 0.05))

    rng = np.random.default_rng(0)
    z = (rng.standard_normal(64**2) + 1j * rng.standard_normal(64**2))
    g = (rng.standard_normal(64**2) + 1j * rng.standard_normal(64**2))
    compare("soft_threshold 4096",
            _kernels._soft_threshold_nb if have_numba else None,
            _kernels._soft_threshold_np, (z, 0.3))
    if have_numba:
        _kernels._primal_update_nb(z, g, 0.5)
        t_nb, _ = timeit(_kernels._primal_update_nb, z, g, 0.5)
    else:
        t_nb = None
    t_np, _ = timeit(_kernels._primal_update_np, z, g, 0.5)
    rows.append(("primal_update 4096", t_np, t_nb,
                 None if t_nb is None else t_np / t_nb, True))

    print(f"\n{'kernel':38s} {'numpy':>10s} {'numba':>10s} {'speedup':>8s}  match")
    for name, t_np, t_nb, speedup, ok in rows:
        nb = "-" if t_nb is None else f"{t_nb * 1e3:8.3f}ms"
        sp = "-" if speedup is None else f"{speedup:7.1f}x"
        print(f"{name:38s} {t_np * 1e3:8.3f}ms {nb:>10s} {sp:>8s}  {ok}")

    # end-to-end: one recovery solve (FFT work dominates; kernels are the
    # per-iteration vector ops)
    poly = build_family(FamilySpec(family="rough-spectrum", d=2, K=31, alpha=1.5, seed=3))
    snap = snapshot_grid(poly, PdeKind("heat", 0.05), 64)
    mask = sample_uniform(64, 2, 800, seed=1)
    samples = observe(snap, mask, 0.0, seed=1)
    t0 = time.perf_counter()
    res = recover_l1(samples, SolverConfig(max_iters=4000))
    dt = time.perf_counter() - t0
    print(f"\nrecover_l1 d=2 N=64 M=800 ({_kernels.backend()}): "
          f"{res.iterations} iters in {dt:.2f}s "
          f"({dt / max(res.iterations, 1) * 1e3:.3f} ms/iter)")


if __name__ == "__main__":
    main()
