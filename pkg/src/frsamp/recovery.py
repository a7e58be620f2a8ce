"""Random spatial sampling, noisy observation, and l1-in-Fourier recovery.

The solver minimizes ``l1(dft(q))`` over real fields q subject to
``l2(q|_X - y) <= tau``, posed over the spectrum variable z with the sampled
inverse transform as the measurement map K.  Because the grid transform is
unitary and X selects rows, ``norm(K) = 1`` and ``K K* = I``, so a primal-dual
splitting with step product <= 1 applies: each iteration soft-thresholds the
spectrum (prox of the l1 term) and projects the dual onto the tau-ball around
the data (prox of the constraint), at the cost of exactly one inverse and one
forward FFT plus O(N^d) vector work.

The primal/dual step sizes are rebalanced online: when the dual residual
dominates the primal one the dual step grows and the primal step shrinks by
the same factor (and vice versa), keeping the step product invariant, with a
geometrically decaying adaptation strength so the sequence still satisfies
the fixed-step convergence conditions in the tail.  This removes the usual
step-ratio sensitivity: very smooth targets want a large dual step while
rough ones want a large primal step, and no single fixed ratio serves both.
Both residuals come from quantities the iteration already maintains, so
adaptivity adds no transforms.

Convergence is certified, never assumed: the returned result recomputes the
feasibility residual from the final estimate, and `converged` is set only
when both the feasibility and fixed-point residuals pass their relative
tolerances.  Hitting max_iters is a first-class NotConverged outcome
(converged=False with the best iterate), not an exception.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import rng
from ._kernels import primal_update
from .errors import BadCardinality, ZeroTruth
from .gridfft import GridField, dft, grid_l2_norm

DEFAULT_MAX_ITERS = 20000
DEFAULT_TOL = 1e-7

# residual-balancing schedule: initial strength, per-adaptation decay, and
# the imbalance ratio that triggers a step change
_ADAPT_ALPHA0 = 0.5
_ADAPT_ETA = 0.999
_ADAPT_DELTA = 1.5


@dataclass(frozen=True)
class SampleSet:
    """Observed values on a subset of the grid, with noise tolerance tau."""

    N: int
    d: int
    indices: np.ndarray
    values: np.ndarray
    tau: float = 0.0

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64).reshape(-1)
        vals = np.asarray(self.values, dtype=np.float64).reshape(-1)
        if idx.size < 1:
            raise BadCardinality("sample set must contain at least one point")
        if idx.size != vals.size:
            raise ValueError("indices and values must be aligned")
        if idx.min() < 0 or idx.max() >= self.N**self.d:
            raise ValueError("sample indices outside the grid")
        order = np.argsort(idx, kind="stable")
        idx = idx[order]
        vals = vals[order]
        if np.any(np.diff(idx) == 0):
            raise ValueError("sample indices must be distinct")
        if not np.all(np.isfinite(vals)):
            raise ValueError("sample values must be finite")
        if not (math.isfinite(self.tau) and self.tau >= 0):
            raise ValueError(f"tau must be finite and >= 0, got {self.tau}")
        idx.setflags(write=False)
        vals.setflags(write=False)
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "values", vals)

    def coords(self) -> np.ndarray:
        """Sample locations as an (M, d) coordinate array, row-major order."""
        out = np.stack(
            np.unravel_index(self.indices, (self.N,) * self.d), axis=1
        )
        return out.astype(np.int64)


@dataclass(frozen=True)
class SolverConfig:
    """Deterministic solver parameters; no randomness enters the solve."""

    max_iters: int = DEFAULT_MAX_ITERS
    primal_step: float = 0.99
    dual_step: float = 0.99
    tol_feas: float = DEFAULT_TOL
    tol_obj: float = DEFAULT_TOL

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not (self.primal_step > 0 and self.dual_step > 0):
            raise ValueError("steps must be positive")
        if self.primal_step * self.dual_step > 1.0 + 1e-12:
            raise ValueError(
                "primal_step * dual_step must be <= 1 (unit operator norm)"
            )
        if not (self.tol_feas > 0 and self.tol_obj > 0):
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class RecoveryResult:
    estimate: GridField
    objective: float
    feasibility_residual: float
    iterations: int
    converged: bool


def sample_uniform(N: int, d: int, M: int, seed: int) -> np.ndarray:
    """Uniform M-subset of Z_N^d as sorted flat indices; deterministic in seed.

    Partial Fisher-Yates on the (seed, sample) Philox stream, so for a fixed
    seed the sets at increasing M are nested.
    """
    D = N**d
    if not (1 <= M <= D):
        raise BadCardinality(f"need 1 <= M <= N^d = {D}, got M={M}")
    if M == D:
        return np.arange(D, dtype=np.int64)
    gen = rng.make_generator(seed, rng.STREAM_SAMPLE)
    pool = np.arange(D, dtype=np.int64)
    for i in range(M):
        j = int(gen.integers(i, D))
        pool[i], pool[j] = pool[j], pool[i]
    out = np.sort(pool[:M])
    return out


def observe(field: GridField, X, sigma: float, seed: int) -> SampleSet:
    """Sample the field on X and add Gaussian noise of exact relative size sigma.

    The noise vector is rescaled so its Euclidean norm is exactly
    sigma * grid_l2_norm(field), and tau is set to that norm (tau = 0 when
    sigma = 0).
    """
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    indices = np.asarray(getattr(X, "indices", X), dtype=np.int64).reshape(-1)
    vals = field.values[indices].copy()
    tau = 0.0
    if sigma > 0:
        gen = rng.make_generator(seed, rng.STREAM_NOISE)
        eta = gen.standard_normal(indices.size)
        tau = sigma * grid_l2_norm(field)
        eta *= tau / float(np.linalg.norm(eta))
        vals += eta
    return SampleSet(N=field.N, d=field.d, indices=indices, values=vals, tau=tau)


def recover_l1(samples: SampleSet, config: SolverConfig | None = None) -> RecoveryResult:
    """Solve min l1(dft(q)) s.t. l2(q|_X - y) <= tau for a real field q.

    Primal-dual iteration over the Hermitian spectrum: the l1 prox is a
    complex soft-threshold (which preserves the symmetry), the constraint
    prox is the exact projection onto the l2-ball of radius tau around y on
    X (tau = 0 degenerates to the interpolation constraint with no special
    casing).  Step sizes start at the configured values and are rebalanced
    against the primal/dual residuals with the step product held fixed.
    Iterates stop when the feasibility residual is below
    tol_feas * (1 + l2(y)) and the primal fixed-point residual is below
    tol_obj * (1 + l2(z)); otherwise the best iterate is returned with
    converged=False.
    """
    cfg = config or SolverConfig()
    N, d = samples.N, samples.d
    shape = (N,) * d
    D = N**d
    X = samples.indices
    y = samples.values
    tau = samples.tau
    sigma = cfg.dual_step
    step = cfg.primal_step
    y_norm = float(np.linalg.norm(y))
    feas_tol = cfg.tol_feas * (1.0 + y_norm)
    alpha = _ADAPT_ALPHA0

    def K_op(z: np.ndarray) -> np.ndarray:
        q = np.fft.ifftn(z.reshape(shape)) * float(N) ** (d / 2.0)
        return q.real.reshape(-1)[X]

    def K_adj(w: np.ndarray) -> np.ndarray:
        full = np.zeros(D, dtype=np.float64)
        full[X] = w
        s = np.fft.fftn(full.reshape(shape)) * float(N) ** (-d / 2.0)
        return s.reshape(-1)

    def project_ball(s: np.ndarray) -> np.ndarray:
        dev = s - y
        nrm = float(np.linalg.norm(dev))
        if nrm <= tau or nrm == 0.0:
            return s
        return y + dev * (tau / nrm)

    # warm start at the adjoint image: K K* = I makes it feasible immediately
    z = K_adj(y)
    z_bar = z
    u_prev = K_op(z)
    w = np.zeros(X.size, dtype=np.float64)
    dz2 = None
    zn2 = float(np.real(np.vdot(z, z)))
    iterations = 0
    converged = False
    best_z = z
    best_score = np.inf

    for _ in range(cfg.max_iters):
        v = K_op(z_bar)
        # recover K z for the current primal from linearity of the overrelaxation
        u = v if dz2 is None else 0.5 * (v + u_prev)
        feas = max(0.0, float(np.linalg.norm(u - y)) - tau)
        if dz2 is not None:
            fix = math.sqrt(dz2)
            fix_tol = cfg.tol_obj * (1.0 + math.sqrt(zn2))
            score = max(feas / feas_tol, fix / fix_tol)
            if score < best_score:
                best_score = score
                best_z = z
            if feas <= feas_tol and fix <= fix_tol:
                converged = True
                break
        s = w / sigma + v
        w_new = sigma * (s - project_ball(s))
        # optimality residuals of the fresh pair, from already-known images:
        # K(z_k - z_{k-1}) = u - u_prev, and the z-update uses the fresh dual
        # so its residual is just the scaled primal increment
        d_res = (
            None
            if dz2 is None
            else float(np.linalg.norm((w - w_new) / sigma + (u - u_prev)))
        )
        g = K_adj(w_new)
        z, z_bar, dz2, zn2 = primal_update(z, g, step)
        if d_res is not None:
            p_res = math.sqrt(dz2) / step
            if p_res > _ADAPT_DELTA * d_res:
                step /= 1.0 - alpha
                sigma *= 1.0 - alpha
                alpha *= _ADAPT_ETA
            elif d_res > _ADAPT_DELTA * p_res:
                step *= 1.0 - alpha
                sigma /= 1.0 - alpha
                alpha *= _ADAPT_ETA
        w = w_new
        u_prev = u
        iterations += 1

    z_final = z if converged else best_z
    q = np.fft.ifftn(z_final.reshape(shape)) * float(N) ** (d / 2.0)
    estimate = GridField(N=N, d=d, values=q.real.reshape(-1))
    resid = float(np.linalg.norm(estimate.values[X] - y))
    feasibility = max(0.0, resid - tau)
    spec = dft(estimate)
    objective = float(np.sum(np.abs(spec.coeffs)))
    converged = converged and feasibility <= feas_tol
    return RecoveryResult(
        estimate=estimate,
        objective=objective,
        feasibility_residual=feasibility,
        iterations=iterations,
        converged=converged,
    )


def rel_err(estimate: GridField, truth: GridField) -> float:
    """Relative grid-L2 error of the estimate against a nonzero truth."""
    if estimate.N != truth.N or estimate.d != truth.d:
        raise ValueError("estimate and truth live on different grids")
    denom = grid_l2_norm(truth)
    if denom == 0.0:
        raise ZeroTruth("relative error against the zero field")
    return float(np.linalg.norm(estimate.values - truth.values)) / denom


def is_success(estimate: GridField, truth: GridField, threshold: float = 0.05) -> bool:
    """Trial success: rel_err at or below the threshold (default 0.05)."""
    return rel_err(estimate, truth) <= threshold
