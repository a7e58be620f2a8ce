"""Fixed-time wave and heat snapshots as exact Fourier multipliers.

Snapshots act on continuous coefficient maps and are discretized afterwards;
for alias-free supports this coincides with multiplying the grid spectrum,
and that coincidence is itself tested.  The wave multiplier is
sin(2 pi t |k|) / (2 pi |k|) with the k = 0 rule t * a_0, so t = 0 gives the
zero snapshot (u(x, 0) = 0); heat is exp(-4 pi^2 t |k|^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import WaveDimensionMismatch
from .fields import TrigPolynomial, discretize
from .gridfft import GridField

WAVE_DIMENSION = 3


@dataclass(frozen=True)
class PdeKind:
    """Which evolution, and the snapshot time."""

    kind: str
    t: float

    def __post_init__(self):
        if self.kind not in ("wave", "heat"):
            raise ValueError(f"kind must be 'wave' or 'heat', got {self.kind!r}")
        t = float(self.t)
        if not (math.isfinite(t) and t >= 0):
            raise ValueError(f"time must be finite and >= 0, got {self.t}")
        object.__setattr__(self, "t", t)


def wave_multiplier(k, t: float) -> float:
    """sin(2 pi t |k|) / (2 pi |k|) for k != 0; t at k = 0."""
    if t < 0:
        raise ValueError("time must be >= 0")
    mag = math.sqrt(sum(float(c) ** 2 for c in _as_vec(k)))
    if mag == 0.0:
        return float(t)
    return math.sin(2.0 * math.pi * t * mag) / (2.0 * math.pi * mag)


def heat_multiplier(k, t: float) -> float:
    """exp(-4 pi^2 t |k|^2)."""
    if t < 0:
        raise ValueError("time must be >= 0")
    mag2 = sum(float(c) ** 2 for c in _as_vec(k))
    return math.exp(-4.0 * math.pi**2 * t * mag2)


def _as_vec(k):
    if isinstance(k, (int, float)):
        return (k,)
    return tuple(k)


def apply_snapshot(
    poly: TrigPolynomial, pde: PdeKind, allow_any_dim: bool = False
) -> TrigPolynomial:
    """Coefficient-wise multiplier product b_k = multiplier(k, t) * a_k.

    Wave snapshots default to d = 3 (where the supporting theory lives);
    pass allow_any_dim=True to evaluate the dimension-agnostic formula
    elsewhere.  Multipliers are real, so Hermitian symmetry is preserved.

    Raises
    ------
    WaveDimensionMismatch
        For wave with poly.d != 3 without the override.
    """
    if pde.kind == "wave" and poly.d != WAVE_DIMENSION and not allow_any_dim:
        raise WaveDimensionMismatch(
            f"wave snapshot in d={poly.d}; pass allow_any_dim=True to override"
        )
    mult = wave_multiplier if pde.kind == "wave" else heat_multiplier
    terms = {k: mult(k, pde.t) * a for k, a in poly.terms.items()}
    return TrigPolynomial(d=poly.d, terms=terms)


def snapshot_grid(
    poly: TrigPolynomial, pde: PdeKind, N: int, allow_any_dim: bool = False
) -> GridField:
    """discretize(apply_snapshot(poly, pde), N)."""
    return discretize(apply_snapshot(poly, pde, allow_any_dim=allow_any_dim), N)
