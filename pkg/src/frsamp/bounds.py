"""Executable Fourier-ratio bounds, sampling budgets, and lemma oracles.

The FR bounds decompose as A + B + C: a mean term, a smoothness term, and a
1/N correction.  None of the supporting theory fixes absolute constants, so
every bound takes a constants map (default 1 everywhere) and
:func:`calibrate` fits the smallest constants that make the bound valid over
a documented corpus; `hypothesis_ok` is likewise reported relative to the
configured ``C_d``.

Lattice sums are exhaustive enumerations over wrapped magnitudes (no closed
forms; these are oracles), with a numba fast path in ``_kernels``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import BadParams, DegenerateSnapshot, ZeroField
from .fields import TrigPolynomial, ck_bound, continuous_l2, continuous_mean, discretize
from .gridfft import GridIndex, Spectrum, dft, flat_index, fourier_ratio, wrapped_representative
from .propagators import PdeKind, apply_snapshot

# relative L2 floor below which a snapshot counts as annihilated
_DEGENERATE_RTOL = 1e-12


@dataclass(frozen=True)
class FrBoundReport:
    """One evaluated FR bound, split into its three terms."""

    A_term: float
    B_term: float
    C_term: float
    total: float
    S_d: float
    constants_used: dict
    hypothesis_ok: bool

    def __post_init__(self):
        if min(self.A_term, self.B_term, self.C_term) < 0:
            raise ValueError("bound terms must be nonnegative")

    def lines(self) -> list[str]:
        """key=value rendering used by the CLI."""
        return [
            f"A={self.A_term:.12g}",
            f"B={self.B_term:.12g}",
            f"C={self.C_term:.12g}",
            f"total={self.total:.12g}",
            f"S_d={self.S_d:.12g}",
            f"hypothesis_ok={str(self.hypothesis_ok).lower()}",
        ]


@dataclass(frozen=True)
class BudgetCurve:
    """Sampling budget M(t) against sensor availability m(t)."""

    times: tuple
    r_of_t: tuple
    M_of_t: tuple
    m_of_t: tuple | None = None
    window: tuple | None = None

    def __post_init__(self):
        n = len(self.times)
        if len(self.r_of_t) != n or len(self.M_of_t) != n:
            raise ValueError("times, r_of_t, M_of_t must have equal length")
        if self.m_of_t is not None and len(self.m_of_t) != n:
            raise ValueError("m_of_t must match times")
        if any(m < 1 for m in self.M_of_t):
            raise ValueError("budgets must be >= 1")


def s_d(N: int, d: int) -> float:
    """Dimensional growth factor: 1 (d=1), ln N (d=2), N^(d-2) (d>=3)."""
    if N < 2:
        raise BadParams(f"grid side must be >= 2, got {N}")
    if d == 1:
        return 1.0
    if d == 2:
        return math.log(N)
    return float(N) ** (d - 2)


def _constants(given: dict | None, keys: tuple[str, ...]) -> dict:
    out = {k: 1.0 for k in keys}
    if given:
        for k, v in given.items():
            if k in out:
                out[k] = float(v)
    return out


def fr_bound_initial(poly: TrigPolynomial, N: int, constants: dict | None = None) -> FrBoundReport:
    """A + B + C bound on FR of the discretized initial data.

    A = 2|mean|/l2, B = C (ck2/l2) S_d(N), C = C (ck2/l2) / N, with l2 the
    continuous L2 norm and ck2 the C^2 coefficient bound.  hypothesis_ok
    reports N l2^2 >= 4 C_d ck2^2.
    """
    cs = _constants(constants, ("C", "C_d"))
    l2 = continuous_l2(poly)
    if l2 == 0.0:
        raise ZeroField("FR bound of the zero polynomial")
    ck2 = ck_bound(poly, 2)
    sd = s_d(N, poly.d)
    a = 2.0 * abs(continuous_mean(poly)) / l2
    b = cs["C"] * (ck2 / l2) * sd
    c = cs["C"] * (ck2 / l2) / N
    hyp = N * l2**2 >= 4.0 * cs["C_d"] * ck2**2
    return FrBoundReport(a, b, c, a + b + c, sd, cs, hyp)


def _fr_bound_snapshot(
    poly: TrigPolynomial,
    pde: PdeKind,
    N: int,
    order: int,
    constants: dict | None,
    allow_any_dim: bool,
) -> FrBoundReport:
    cs = _constants(constants, ("C1", "C2", "C_d"))
    l2_init = continuous_l2(poly)
    if l2_init == 0.0:
        raise ZeroField("FR bound of the zero polynomial")
    snap = apply_snapshot(poly, pde, allow_any_dim=allow_any_dim)
    l2 = continuous_l2(snap)
    if l2 <= _DEGENERATE_RTOL * l2_init:
        raise DegenerateSnapshot(
            f"{pde.kind} snapshot at t={pde.t} has L2 = {l2:.3e} "
            f"(initial {l2_init:.3e}); bound undefined"
        )
    ckr = ck_bound(poly, order)
    a = 2.0 * abs(continuous_mean(snap)) / l2
    b = cs["C1"] * ckr / l2
    c = cs["C2"] * (ckr / l2) / N
    ck2_snap = ck_bound(snap, 2)
    hyp = N * l2**2 >= 4.0 * cs["C_d"] * ck2_snap**2
    return FrBoundReport(a, b, c, a + b + c, s_d(N, poly.d), cs, hyp)


def fr_bound_wave(
    poly: TrigPolynomial,
    t: float,
    N: int,
    constants: dict | None = None,
    allow_any_dim: bool = False,
) -> FrBoundReport:
    """Snapshot bound for the wave evolution; needs C^3 data (coefficient order 3)."""
    return _fr_bound_snapshot(poly, PdeKind("wave", t), N, 3, constants, allow_any_dim)


def fr_bound_heat(poly: TrigPolynomial, t: float, N: int, constants: dict | None = None) -> FrBoundReport:
    """Snapshot bound for the heat evolution; needs C^2 data (coefficient order 2)."""
    return _fr_bound_snapshot(poly, PdeKind("heat", t), N, 2, constants, allow_any_dim=True)


def calibrate(kind: str, instances, allow_any_dim: bool = False) -> dict:
    """Fit the smallest constants making the bound valid over a corpus.

    kind is 'initial' (instances are (poly, N) pairs) or 'wave'/'heat'
    (instances are (poly, t, N) triples).  All shape constants of the bound
    are tied to a single scale lambda, and lambda is the smallest value with
    A + lambda (B + C) >= measured FR on every instance; C_d stays 1 (the
    hypothesis constant has no fitted convention).
    """
    lam = 0.0
    count = 0
    for inst in instances:
        if kind == "initial":
            poly, n = inst
            report = fr_bound_initial(poly, n)
            actual = fourier_ratio(discretize(poly, n))
        elif kind in ("wave", "heat"):
            poly, t, n = inst
            pde = PdeKind(kind, t)
            if kind == "wave":
                report = fr_bound_wave(poly, t, n, allow_any_dim=allow_any_dim)
            else:
                report = fr_bound_heat(poly, t, n)
            actual = fourier_ratio(discretize(apply_snapshot(poly, pde, allow_any_dim=True), n))
        else:
            raise ValueError(f"unknown bound kind {kind!r}")
        denom = report.B_term + report.C_term
        if denom <= 0.0:
            continue
        lam = max(lam, (actual - report.A_term) / denom)
        count += 1
    if count == 0:
        raise ValueError("calibration corpus is empty or has no usable instances")
    if kind == "initial":
        return {"C": lam, "C_d": 1.0}
    return {"C1": lam, "C2": lam, "C_d": 1.0}


def sample_budget(r: float, eps: float, D: float, C: float = 1.0) -> int:
    """Sufficient sample count ceil(C (r/eps)^2 ln^2(max(r/eps, e)) ln D), clamped to [1, D].

    The squared log is floored at 1 so small r/eps cannot produce degenerate
    budgets; a budget exceeding the grid size means "sample everything", so
    the result never exceeds floor(D).
    """
    if not (r >= 1.0):
        raise BadParams(f"FR bound r must be >= 1, got {r}")
    if not (0.0 < eps < 0.5):
        raise BadParams(f"eps must lie in (0, 1/2), got {eps}")
    if not (D >= 2.0):
        raise BadParams(f"spectrum size D must be >= 2, got {D}")
    if not (C > 0.0):
        raise BadParams(f"budget constant C must be positive, got {C}")
    x = r / eps
    lg = math.log(max(x, math.e))
    raw = math.ceil(C * x * x * lg * lg * math.log(D))
    return int(min(max(raw, 1), math.floor(D)))


def budget_over_time(
    times,
    r_of_t,
    eps: float,
    D: float,
    C: float = 1.0,
    m0: float | None = None,
    lam: float | None = None,
) -> BudgetCurve:
    """Budget curve M(t) from measured FR values, with optional sensor decay.

    With m0 and lam given, m(t) = m0 exp(-lam t) and the window is the longest
    contiguous run of grid times where m(t) >= M(t) (earliest on ties); None
    when no time is feasible.
    """
    times = [float(t) for t in times]
    rs = [float(r) for r in r_of_t]
    if not times or len(times) != len(rs):
        raise BadParams("times and r_of_t must be nonempty and aligned")
    if any(b < a for a, b in zip(times, times[1:])):
        raise BadParams("times must be nondecreasing")
    if (m0 is None) != (lam is None):
        raise BadParams("sensor decay needs both m0 and lambda")
    budgets = tuple(sample_budget(r, eps, D, C) for r in rs)
    avail = None
    window = None
    if m0 is not None:
        if not (m0 > 0) or lam < 0:
            raise BadParams(f"need m0 > 0 and lambda >= 0, got m0={m0}, lambda={lam}")
        avail = tuple(m0 * math.exp(-lam * t) for t in times)
        best_len, run_start = 0, None
        i = 0
        while i < len(times):
            if avail[i] >= budgets[i]:
                j = i
                while j + 1 < len(times) and avail[j + 1] >= budgets[j + 1]:
                    j += 1
                if j - i + 1 > best_len:
                    best_len, run_start = j - i + 1, i
                i = j + 1
            else:
                i += 1
        if run_start is not None:
            window = (times[run_start], times[run_start + best_len - 1])
    return BudgetCurve(tuple(times), tuple(rs), budgets, avail, window)


def _alias_bins(poly: TrigPolynomial, N: int):
    """Unique DFT bins hit by the support, with exact coefficient sums."""
    if not poly.terms:
        return np.zeros((0,), dtype=np.int64), np.zeros((0,), dtype=np.complex128)
    ks = poly.frequencies()
    flat = np.zeros(len(ks), dtype=np.int64)
    for j in range(poly.d):
        flat = flat * N + (ks[:, j] % N)
    uniq, inv = np.unique(flat, return_inverse=True)
    sums = np.zeros(len(uniq), dtype=np.complex128)
    np.add.at(sums, inv, poly.coefficients())
    return uniq, sums


def riemann_mean_error(poly: TrigPolynomial, N: int) -> float:
    """|N^-d sum_x g(x) - a_0|, by exact coefficient folding (no FFT)."""
    total = 0j
    for k, a in poly.terms.items():
        if all(c % N == 0 for c in k):
            total += a
    a0 = poly.terms.get((0,) * poly.d, 0j)
    return abs(total - a0)


def riemann_l2_error(poly: TrigPolynomial, N: int) -> float:
    """|N^-d sum_x g(x)^2 - sum_k |a_k|^2|, by exact coefficient folding."""
    _, sums = _alias_bins(poly, N)
    grid_power = float(np.sum(np.abs(sums) ** 2))
    cont_power = float(np.sum(np.abs(poly.coefficients()) ** 2))
    return abs(grid_power - cont_power)


def aliasing_check(poly: TrigPolynomial, N: int, m) -> tuple[complex, complex]:
    """(transform route, coefficient route) for the aliasing identity at bin m.

    lhs runs the grid pipeline, dft(discretize(poly, N))[m]; rhs folds the
    support directly, N^(d/2) * sum of a_k over k = m mod N.  The two agree
    to 1e-10 (1 + |rhs|).
    """
    coords = m.coords if isinstance(m, GridIndex) else tuple(int(c) for c in m)
    lhs = complex(dft(discretize(poly, N)).coeffs[flat_index(coords, N)])
    rhs = 0j
    for k, a in poly.terms.items():
        if all((c - mc) % N == 0 for c, mc in zip(k, coords)):
            rhs += a
    rhs *= float(N) ** (poly.d / 2.0)
    return lhs, rhs


def aliasing_check_all(poly: TrigPolynomial, N: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized aliasing_check over every bin: (lhs array, rhs array), flat."""
    lhs = dft(discretize(poly, N)).coeffs
    rhs = np.zeros(N**poly.d, dtype=np.complex128)
    uniq, sums = _alias_bins(poly, N)
    rhs[uniq] = sums * float(N) ** (poly.d / 2.0)
    return lhs, rhs


def lattice_power_sum(N: int, d: int, p: float) -> float:
    """sum over nonzero m in Z_N^d of |m|^(-p), wrapped magnitudes, exhaustive."""
    if N < 2 or d not in (1, 2, 3):
        raise BadParams(f"need N >= 2 and d in 1..3, got N={N}, d={d}")
    if not (p > 0):
        raise BadParams(f"power p must be positive, got {p}")
    return float(_kernels.lattice_power_sum_kernel(int(N), int(d), float(p)))


def gaussian_lattice_sum(N: int, d: int, a: float) -> float:
    """sum over nonzero m in Z_N^d of exp(-a |m|^2), wrapped magnitudes."""
    if N < 2 or d not in (1, 2, 3):
        raise BadParams(f"need N >= 2 and d in 1..3, got N={N}, d={d}")
    if not (a > 0):
        raise BadParams(f"rate a must be positive, got {a}")
    return float(_kernels.gaussian_lattice_sum_kernel(int(N), int(d), float(a)))


def heat_decay_rate(t: float, safety: float = 0.5) -> float:
    """Gaussian decay rate c0(t) = safety * 4 pi^2 t claimed for heat snapshots.

    The conservative default safety = 1/2 keeps the rate valid under
    aliasing; alias-free data supports safety = 1.
    """
    if t < 0 or not (0 < safety <= 1):
        raise BadParams("need t >= 0 and 0 < safety <= 1")
    return safety * 4.0 * math.pi**2 * t


def decay_constant(
    spectrum: Spectrum,
    p: float | None = None,
    weight: str = "polynomial",
    a: float | None = None,
) -> float:
    """Empirical decay constant: max over m != 0 of |s(m)| w(|m|) / N^(d/2).

    weight 'polynomial' uses w = |m|^p (pass p > 0); 'gaussian' uses
    w = exp(a |m|^2) (pass a > 0), evaluated in log space so intermediate
    products cannot overflow.  The result is inf when the spectrum violates
    the claimed decay by more than the float range allows (a numerical noise
    floor at large |m| does this on big grids).
    """
    if not np.any(spectrum.coeffs != 0):
        raise ZeroField("decay constant of the zero spectrum")
    n, d = spectrum.N, spectrum.d
    w = wrapped_representative(np.arange(n), n).astype(np.float64)
    w2 = w * w
    mags = np.abs(spectrum.grid())
    scale = float(n) ** (d / 2.0)
    if weight == "polynomial":
        if p is None or not p > 0:
            raise BadParams(f"polynomial weight needs p > 0, got {p}")
        best = 0.0
        for i in range(n if d == 3 else 1):
            if d == 1:
                r2 = w2
                m = mags
            elif d == 2:
                r2 = w2[:, None] + w2[None, :]
                m = mags
            else:
                r2 = w2[i] + (w2[:, None] + w2[None, :])
                m = mags[i]
            vals = np.where(r2 > 0.0, m * r2 ** (p / 2.0), 0.0)
            best = max(best, float(np.max(vals)))
        return best / scale
    if weight == "gaussian":
        if a is None or not a > 0:
            raise BadParams(f"gaussian weight needs a > 0, got {a}")
        best = -np.inf
        for i in range(n if d == 3 else 1):
            if d == 1:
                r2 = w2
                m = mags
            elif d == 2:
                r2 = w2[:, None] + w2[None, :]
                m = mags
            else:
                r2 = w2[i] + (w2[:, None] + w2[None, :])
                m = mags[i]
            ok = (r2 > 0.0) & (m > 0.0)
            if np.any(ok):
                logs = np.log(m[ok]) + a * r2[ok]
                best = max(best, float(np.max(logs)))
        if best == -np.inf:
            return 0.0
        lg = best - math.log(scale)
        return math.exp(lg) if lg < 709.0 else math.inf
    raise BadParams(f"weight must be 'polynomial' or 'gaussian', got {weight!r}")
