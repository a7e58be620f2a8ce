"""Numerical hot loops with a numba fast path and a pure-numpy fallback.

The backend is chosen once at import time: set ``FRSAMP_NO_NUMBA=1`` in the
environment (or run without numba installed) to force the numpy path.  Both
backends accumulate in a fixed order, so each is bit-deterministic on its own;
they agree with each other to rounding (checked in the test suite, compared in
``benchmarks/bench_kernels.py``).
"""

from __future__ import annotations

import os

import numpy as np

_FLAG = os.environ.get("FRSAMP_NO_NUMBA", "").strip().lower()
_WANT_NUMBA = _FLAG not in ("1", "true", "yes", "on")

try:  # pragma: no cover - exercised via the env flag in the benchmark
    if _WANT_NUMBA:
        from numba import njit
    else:
        njit = None
except ImportError:  # pragma: no cover
    njit = None


def _wrapped_axis(n: int) -> np.ndarray:
    # representatives {-floor(N/2), ..., ceil(N/2)-1} in bin order
    idx = np.arange(n)
    return np.where(idx >= (n + 1) // 2, idx - n, idx).astype(np.float64)


# ---------------------------------------------------------------------------
# pure numpy implementations (reference / fallback)
# ---------------------------------------------------------------------------

def _lattice_power_sum_np(n: int, d: int, p: float) -> float:
    w2 = _wrapped_axis(n) ** 2
    if d == 1:
        r2 = w2
        return float(np.sum(r2[r2 > 0.0] ** (-p / 2.0)))
    if d == 2:
        r2 = w2[:, None] + w2[None, :]
        return float(np.sum(r2[r2 > 0.0] ** (-p / 2.0)))
    total = 0.0
    plane = w2[:, None] + w2[None, :]
    for i in range(n):  # chunked so N=256 stays within memory; fixed order
        r2 = w2[i] + plane
        total += float(np.sum(r2[r2 > 0.0] ** (-p / 2.0)))
    return total


def _gaussian_lattice_sum_np(n: int, d: int, a: float) -> float:
    w2 = _wrapped_axis(n) ** 2
    if d == 1:
        r2 = w2
        return float(np.sum(np.exp(-a * r2[r2 > 0.0])))
    if d == 2:
        r2 = w2[:, None] + w2[None, :]
        return float(np.sum(np.exp(-a * r2[r2 > 0.0])))
    total = 0.0
    plane = w2[:, None] + w2[None, :]
    for i in range(n):
        r2 = w2[i] + plane
        total += float(np.sum(np.exp(-a * r2[r2 > 0.0])))
    return total


def _soft_threshold_np(z: np.ndarray, thresh: float) -> np.ndarray:
    mag = np.abs(z)
    scale = np.maximum(mag - thresh, 0.0) / np.where(mag > 0.0, mag, 1.0)
    return z * scale


def _primal_update_np(z, grad, step):
    z_new = _soft_threshold_np(z - step * grad, step)
    z_bar = 2.0 * z_new - z
    dz = z_new - z
    dz2 = float(np.real(np.vdot(dz, dz)))
    zn2 = float(np.real(np.vdot(z_new, z_new)))
    return z_new, z_bar, dz2, zn2


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if njit is not None:

    @njit(cache=True)
    def _wrapped_sq_nb(n):  # pragma: no cover - jitted
        half = (n + 1) // 2
        w2 = np.empty(n, dtype=np.float64)
        for i in range(n):
            r = float(i - n) if i >= half else float(i)
            w2[i] = r * r
        return w2

    @njit(cache=True)
    def _lattice_power_sum_nb(n, d, p):  # pragma: no cover - jitted
        w2 = _wrapped_sq_nb(n)
        # integer-exponent fast paths cover the orders the bounds use
        mode = 1 if p == 2.0 else (2 if p == 4.0 else 0)
        e = -p / 2.0
        total = 0.0
        if d == 1:
            for i in range(n):
                r2 = w2[i]
                if r2 != 0.0:
                    if mode == 1:
                        total += 1.0 / r2
                    elif mode == 2:
                        total += 1.0 / (r2 * r2)
                    else:
                        total += r2**e
        elif d == 2:
            for i in range(n):
                for j in range(n):
                    r2 = w2[i] + w2[j]
                    if r2 != 0.0:
                        if mode == 1:
                            total += 1.0 / r2
                        elif mode == 2:
                            total += 1.0 / (r2 * r2)
                        else:
                            total += r2**e
        else:
            for i in range(n):
                for j in range(n):
                    rij = w2[i] + w2[j]
                    for k in range(n):
                        r2 = rij + w2[k]
                        if r2 != 0.0:
                            if mode == 1:
                                total += 1.0 / r2
                            elif mode == 2:
                                total += 1.0 / (r2 * r2)
                            else:
                                total += r2**e
        return total

    @njit(cache=True)
    def _gaussian_lattice_sum_nb(n, d, a):  # pragma: no cover - jitted
        w2 = _wrapped_sq_nb(n)
        total = 0.0
        if d == 1:
            for i in range(n):
                if w2[i] != 0.0:
                    total += np.exp(-a * w2[i])
        elif d == 2:
            for i in range(n):
                for j in range(n):
                    r2 = w2[i] + w2[j]
                    if r2 != 0.0:
                        total += np.exp(-a * r2)
        else:
            # separable factors cut the exp count from n^3 to n^2 + n
            f = np.empty(n, dtype=np.float64)
            for i in range(n):
                f[i] = np.exp(-a * w2[i])
            for i in range(n):
                for j in range(n):
                    fij = f[i] * f[j]
                    for k in range(n):
                        r2 = w2[i] + w2[j] + w2[k]
                        if r2 != 0.0:
                            total += fij * f[k]
        return total

    @njit(cache=True)
    def _soft_threshold_pairs_nb(zf, thresh):  # pragma: no cover - jitted
        # zf holds interleaved (re, im) pairs; branchless so the loop
        # vectorizes
        out = np.empty_like(zf)
        for i in range(0, zf.size, 2):
            m = np.sqrt(zf[i] * zf[i] + zf[i + 1] * zf[i + 1])
            s = max(m - thresh, 0.0) / max(m, 1e-300)
            out[i] = zf[i] * s
            out[i + 1] = zf[i + 1] * s
        return out

    @njit(cache=True)
    def _primal_update_pairs_nb(zf, gf, step):  # pragma: no cover - jitted
        z_new = np.empty_like(zf)
        z_bar = np.empty_like(zf)
        dz2 = 0.0
        zn2 = 0.0
        for i in range(0, zf.size, 2):
            vr = zf[i] - step * gf[i]
            vi = zf[i + 1] - step * gf[i + 1]
            m = np.sqrt(vr * vr + vi * vi)
            s = max(m - step, 0.0) / max(m, 1e-300)
            wr = vr * s
            wi = vi * s
            z_new[i] = wr
            z_new[i + 1] = wi
            z_bar[i] = 2.0 * wr - zf[i]
            z_bar[i + 1] = 2.0 * wi - zf[i + 1]
            dr = wr - zf[i]
            di = wi - zf[i + 1]
            dz2 += dr * dr + di * di
            zn2 += wr * wr + wi * wi
        return z_new, z_bar, dz2, zn2

    def _soft_threshold_nb(z, thresh):
        zc = np.ascontiguousarray(z, dtype=np.complex128)
        return _soft_threshold_pairs_nb(zc.view(np.float64), thresh).view(np.complex128)

    def _primal_update_nb(z, grad, step):
        zc = np.ascontiguousarray(z, dtype=np.complex128)
        gc = np.ascontiguousarray(grad, dtype=np.complex128)
        z_new, z_bar, dz2, zn2 = _primal_update_pairs_nb(
            zc.view(np.float64), gc.view(np.float64), step
        )
        return z_new.view(np.complex128), z_bar.view(np.complex128), dz2, zn2

    lattice_power_sum_kernel = _lattice_power_sum_nb
    gaussian_lattice_sum_kernel = _gaussian_lattice_sum_nb
    soft_threshold = _soft_threshold_nb
    primal_update = _primal_update_nb
    BACKEND = "numba"
else:
    lattice_power_sum_kernel = _lattice_power_sum_np
    gaussian_lattice_sum_kernel = _gaussian_lattice_sum_np
    soft_threshold = _soft_threshold_np
    primal_update = _primal_update_np
    BACKEND = "numpy"


def backend() -> str:
    """Name of the active kernel backend, ``"numba"`` or ``"numpy"``."""
    return BACKEND
