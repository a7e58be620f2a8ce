"""Continuous periodic test data as finitely supported Fourier coefficient maps.

A TrigPolynomial stores ``f(x) = sum_k a_k exp(2 pi i k.x)`` for x in the unit
cube, with Hermitian coefficients (``a_{-k} = conj(a_k)``) so f is real.  All
norms, means, PDE snapshots, and discretizations are then exact coefficient
arithmetic; grids only enter through :func:`discretize`, which folds k into
DFT bins mod N (exact aliasing) and inverts.

Coefficient draws are reproducible: every family reads the Philox stream
``(spec.seed, rng.STREAM_FAMILY)`` and enumerates frequencies in a fixed
lexicographic order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import rng
from .errors import BadExponent
from .gridfft import GridField, Spectrum, idft

FAMILIES = ("random-trig", "rough-spectrum", "bump-sum", "modulated-wave")

_SYMMETRY_TOL = 1e-12


def default_band(d: int) -> int:
    """Band parameter used when a FamilySpec does not set K (8 in d<=2, 6 in d=3)."""
    return 8 if d <= 2 else 6


def lattice_ball(d: int, radius: float, include_origin: bool = True) -> np.ndarray:
    """Integer vectors with Euclidean |k| <= radius, in lexicographic order.

    Returns an (n, d) int64 array; the fixed order makes coefficient draws
    reproducible.
    """
    r = int(math.floor(radius + 1e-9))
    if r < 0 or radius < 0:
        raise ValueError("radius must be nonnegative")
    axis = np.arange(-r, r + 1, dtype=np.int64)
    grids = np.meshgrid(*([axis] * d), indexing="ij")
    ks = np.stack([g.reshape(-1) for g in grids], axis=1)
    keep = np.sum(ks.astype(np.float64) ** 2, axis=1) <= radius**2 + 1e-9
    if not include_origin:
        keep &= np.any(ks != 0, axis=1)
    return ks[keep]


@dataclass(frozen=True)
class TrigPolynomial:
    """Real-valued trigonometric polynomial given by its coefficient map."""

    d: int
    terms: dict

    def __post_init__(self):
        if self.d not in (1, 2, 3):
            raise ValueError(f"dimension must be 1, 2 or 3, got {self.d}")
        clean: dict[tuple[int, ...], complex] = {}
        for k, a in self.terms.items():
            key = tuple(int(c) for c in k)
            if len(key) != self.d:
                raise ValueError(f"frequency {key} has wrong dimension")
            a = complex(a)
            if not (math.isfinite(a.real) and math.isfinite(a.imag)):
                raise ValueError(f"coefficient at {key} is not finite")
            if a != 0:
                clean[key] = a
        scale = max((abs(a) for a in clean.values()), default=0.0)
        tol = _SYMMETRY_TOL * max(scale, 1.0)
        for k, a in clean.items():
            mirror = tuple(-c for c in k)
            b = clean.get(mirror, 0j)
            if abs(b - a.conjugate()) > tol:
                raise ValueError(
                    f"coefficients at {k} and {mirror} are not conjugate: {a} vs {b}"
                )
        object.__setattr__(self, "terms", clean)

    @property
    def support_radius(self) -> float:
        """Largest Euclidean |k| over the support (0 for the zero polynomial)."""
        if not self.terms:
            return 0.0
        return max(math.sqrt(sum(c * c for c in k)) for k in self.terms)

    def frequencies(self) -> np.ndarray:
        """Support as an (n, d) int64 array, in insertion order."""
        if not self.terms:
            return np.zeros((0, self.d), dtype=np.int64)
        return np.array(list(self.terms.keys()), dtype=np.int64)

    def coefficients(self) -> np.ndarray:
        if not self.terms:
            return np.zeros(0, dtype=np.complex128)
        return np.array(list(self.terms.values()), dtype=np.complex128)

    def evaluate_complex(self, points) -> np.ndarray:
        """Raw coefficient sum at points in the unit cube (complex values)."""
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        if pts.shape[1] != self.d:
            raise ValueError(f"points must have {self.d} columns")
        if not self.terms:
            return np.zeros(pts.shape[0], dtype=np.complex128)
        ks = self.frequencies()
        a = self.coefficients()
        phases = np.exp(2j * np.pi * (pts @ ks.T.astype(np.float64)))
        return phases @ a

    def evaluate(self, points) -> np.ndarray:
        """f at points in the unit cube; the Hermitian imaginary residue is dropped."""
        return self.evaluate_complex(points).real


@dataclass(frozen=True)
class FamilySpec:
    """Parameters naming one family instance.

    extras:
      bump-sum: ``width`` (default 0.1), ``centers`` or ``n_bumps`` (default 3)
      modulated-wave: ``carrier`` (default 2K along the first axis),
      ``envelope_band`` (default K)
    """

    family: str
    d: int
    K: int | None = None
    alpha: float | None = None
    seed: int = 0
    extras: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}, expected one of {FAMILIES}")
        if self.d not in (1, 2, 3):
            raise ValueError(f"dimension must be 1, 2 or 3, got {self.d}")
        if self.K is None:
            object.__setattr__(self, "K", default_band(self.d))
        if self.K < 1:
            raise ValueError(f"band parameter K must be >= 1, got {self.K}")
        if self.family == "rough-spectrum":
            if self.alpha is None or self.alpha <= self.d / 2:
                raise BadExponent(
                    f"rough-spectrum needs alpha > d/2 = {self.d / 2}, got {self.alpha}"
                )
        if self.family == "bump-sum":
            width = self.extras.get("width", 0.1)
            if not width > 0:
                raise ValueError(f"bump width must be positive, got {width}")


def _symmetrize(raw: dict) -> dict:
    """Average conjugate pairs: a_k = (raw_k + conj(raw_{-k})) / 2.

    The support becomes the union of the raw support and its mirror, so the
    result is Hermitian even when raw is one-sided.
    """
    keys = set(raw)
    keys.update(tuple(-c for c in k) for k in raw)
    out = {}
    for k in sorted(keys):
        mirror = tuple(-c for c in k)
        out[k] = 0.5 * (complex(raw.get(k, 0j)) + complex(raw.get(mirror, 0j)).conjugate())
    return out


def random_trig_poly(spec: FamilySpec) -> TrigPolynomial:
    """Gaussian band-limited family: unit draws for |k| <= K, 0.2 up to 2K.

    Real standard-normal draws on the whole ball, symmetrized by averaging
    conjugate pairs; deterministic in spec.seed.
    """
    if spec.family != "random-trig":
        raise ValueError("spec.family must be 'random-trig'")
    ks = lattice_ball(spec.d, 2 * spec.K)
    g = rng.make_generator(spec.seed, rng.STREAM_FAMILY).standard_normal(len(ks))
    norms = np.sqrt(np.sum(ks.astype(np.float64) ** 2, axis=1))
    amp = np.where(norms <= spec.K, 1.0, 0.2)
    raw = {tuple(int(c) for c in k): complex(s) for k, s in zip(ks, amp * g)}
    return TrigPolynomial(d=spec.d, terms=_symmetrize(raw))


def rough_spectrum_poly(spec: FamilySpec) -> TrigPolynomial:
    """Slowly decaying family a_k = |k|^(-alpha) xi_k, xi symmetric random signs.

    alpha must exceed d/2 (square-summable coefficients); the caller picks the
    cutoff K, typically floor(N/2) - 1 so discretization at side N is
    alias-free.
    """
    if spec.family != "rough-spectrum":
        raise ValueError("spec.family must be 'rough-spectrum'")
    if spec.alpha is None or spec.alpha <= spec.d / 2:
        raise BadExponent(f"alpha must exceed d/2 = {spec.d / 2}, got {spec.alpha}")
    ks = lattice_ball(spec.d, spec.K, include_origin=False)
    # draw one sign per conjugate pair on the lexicographically positive half
    half = [tuple(int(c) for c in k) for k in ks if _lex_positive(k)]
    signs = rng.make_generator(spec.seed, rng.STREAM_FAMILY).integers(0, 2, size=len(half))
    terms: dict[tuple[int, ...], complex] = {}
    for k, s in zip(half, signs * 2 - 1):
        mag = math.sqrt(sum(c * c for c in k)) ** (-spec.alpha)
        terms[k] = complex(s * mag)
        terms[tuple(-c for c in k)] = complex(s * mag)
    return TrigPolynomial(d=spec.d, terms=terms)


def _lex_positive(k) -> bool:
    for c in k:
        if c > 0:
            return True
        if c < 0:
            return False
    return False


def bump_sum_poly(spec: FamilySpec) -> TrigPolynomial:
    """Sum of periodized Gaussian bumps with closed-form coefficients.

    a_k = (sum_j exp(-2 pi i k.c_j)) * exp(-2 pi^2 w^2 |k|^2), truncated where
    |a_k| < 1e-14 * max |a_k|.  Centers come from extras['centers'] or are
    drawn uniformly (extras['n_bumps'], default 3).
    """
    if spec.family != "bump-sum":
        raise ValueError("spec.family must be 'bump-sum'")
    width = float(spec.extras.get("width", 0.1))
    centers = spec.extras.get("centers")
    if centers is None:
        n_bumps = int(spec.extras.get("n_bumps", 3))
        if n_bumps < 1:
            raise ValueError("n_bumps must be >= 1")
        g = rng.make_generator(spec.seed, rng.STREAM_FAMILY)
        centers = g.random((n_bumps, spec.d))
    centers = np.atleast_2d(np.asarray(centers, dtype=np.float64))
    if centers.shape[1] != spec.d:
        raise ValueError(f"centers must have {spec.d} columns")
    # Gaussian factor falls below 1e-14 beyond |k| = sqrt(14 ln 10 / (2 pi^2 w^2))
    radius = math.sqrt(14 * math.log(10) / (2 * math.pi**2)) / width
    ks = lattice_ball(spec.d, radius)
    kf = ks.astype(np.float64)
    phase_sum = np.exp(-2j * np.pi * (kf @ centers.T)).sum(axis=1)
    gauss = np.exp(-2 * math.pi**2 * width**2 * np.sum(kf**2, axis=1))
    a = phase_sum * gauss
    cutoff = 1e-14 * np.max(np.abs(a))
    terms = {
        tuple(int(c) for c in k): complex(v)
        for k, v in zip(ks, a)
        if abs(v) >= cutoff
    }
    return TrigPolynomial(d=spec.d, terms=terms)


def modulated_wave_poly(spec: FamilySpec) -> TrigPolynomial:
    """Low-frequency complex Gaussian envelope carried to frequency k0, made real.

    The envelope has complex Gaussian coefficients on |j| <= envelope band;
    shifting by the carrier gives b_k, and a_k = (b_k + conj(b_{-k})) / 2.
    A constant envelope therefore leaves exactly the pair +-k0.
    """
    if spec.family != "modulated-wave":
        raise ValueError("spec.family must be 'modulated-wave'")
    carrier = spec.extras.get("carrier")
    if carrier is None:
        carrier = (2 * spec.K,) + (0,) * (spec.d - 1)
    carrier = tuple(int(c) for c in carrier)
    if len(carrier) != spec.d:
        raise ValueError(f"carrier must have {spec.d} coordinates")
    band = int(spec.extras.get("envelope_band", spec.K))
    if band < 0:
        raise ValueError("envelope_band must be >= 0")
    if band == 0:
        envelope = {(0,) * spec.d: 1.0 + 0j}
    else:
        ks = lattice_ball(spec.d, band)
        g = rng.make_generator(spec.seed, rng.STREAM_FAMILY).standard_normal(2 * len(ks))
        coeffs = (g[0::2] + 1j * g[1::2]) / math.sqrt(2.0)
        envelope = {tuple(int(c) for c in k): complex(v) for k, v in zip(ks, coeffs)}
    shifted = {
        tuple(k[j] + carrier[j] for j in range(spec.d)): v for k, v in envelope.items()
    }
    return TrigPolynomial(d=spec.d, terms=_symmetrize(shifted))


def build_family(spec: FamilySpec) -> TrigPolynomial:
    """Dispatch on spec.family."""
    builder = {
        "random-trig": random_trig_poly,
        "rough-spectrum": rough_spectrum_poly,
        "bump-sum": bump_sum_poly,
        "modulated-wave": modulated_wave_poly,
    }[spec.family]
    return builder(spec)


def discretize(poly: TrigPolynomial, N: int) -> GridField:
    """Sample f on the grid: g(x) = f(x/N), via exact aliasing.

    Each coefficient a_k lands in DFT bin k mod N, so the grid spectrum is
    built exactly and one inverse FFT yields g; this matches pointwise
    evaluation of the series to rounding.
    """
    if not (isinstance(N, (int, np.integer)) and N >= 2):
        raise ValueError(f"grid side must be an integer >= 2, got {N}")
    N = int(N)
    bins = np.zeros((N,) * poly.d, dtype=np.complex128).reshape(-1)
    if poly.terms:
        ks = poly.frequencies()
        flat = np.zeros(len(ks), dtype=np.int64)
        for j in range(poly.d):
            flat = flat * N + (ks[:, j] % N)
        np.add.at(bins, flat, poly.coefficients())
    bins *= float(N) ** (poly.d / 2.0)
    return idft(Spectrum(N=N, d=poly.d, coeffs=bins))


def continuous_l2(poly: TrigPolynomial) -> float:
    """Exact L2 norm over the unit cube (Parseval on the coefficients)."""
    if not poly.terms:
        return 0.0
    return float(np.linalg.norm(poly.coefficients()))


def continuous_mean(poly: TrigPolynomial) -> float:
    """The zero-frequency coefficient (real by Hermitian symmetry)."""
    return float(poly.terms.get((0,) * poly.d, 0j).real)


def ck_bound(poly: TrigPolynomial, r: int) -> float:
    """sum_k (1 + 2 pi |k|)^r |a_k|, an upper bound for the C^r norm."""
    if r not in (0, 1, 2, 3):
        raise ValueError(f"derivative order r must be in 0..3, got {r}")
    if not poly.terms:
        return 0.0
    ks = poly.frequencies().astype(np.float64)
    norms = np.sqrt(np.sum(ks**2, axis=1))
    return float(np.sum((1.0 + 2.0 * np.pi * norms) ** r * np.abs(poly.coefficients())))
