"""Index arithmetic, unitary DFT, norms, and the Fourier ratio on Z_N^d.

Conventions
-----------
The grid is the cube ``{0, ..., N-1}^d`` with d in {1, 2, 3}.  Fields are
real-valued and stored flat in row-major order, ``x -> sum_j x_j N^(d-1-j)``.
The transform pair is unitary:

    coeffs[m] = N^(-d/2) sum_x exp(-2 pi i x.m / N) field[x]
    field[x]  = N^(-d/2) sum_m exp(+2 pi i x.m / N) coeffs[m]

so Parseval holds with no extra factors.  Frequencies are reduced to the
wrapped representative in ``{-floor(N/2), ..., ceil(N/2)-1}`` (even N sends
N/2 to -N/2); the wrapped Euclidean magnitude defines |m|.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptySampleSet, NonHermitianSpectrum


def _validate_shape(N: int, d: int, n_values: int) -> None:
    if not (isinstance(N, (int, np.integer)) and N >= 2):
        raise ValueError(f"grid side must be an integer >= 2, got {N}")
    if d not in (1, 2, 3):
        raise ValueError(f"dimension must be 1, 2 or 3, got {d}")
    if n_values != N**d:
        raise ValueError(f"expected N^d = {N**d} values, got {n_values}")


@dataclass(frozen=True)
class GridIndex:
    """A point of Z_N^d, each coordinate in [0, N)."""

    coords: tuple[int, ...]
    N: int

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))
        if not self.coords or len(self.coords) > 3:
            raise ValueError("coords must have length 1..3")
        if any(c < 0 or c >= self.N for c in self.coords):
            raise ValueError(f"coords {self.coords} outside [0, {self.N})")

    @property
    def d(self) -> int:
        return len(self.coords)


@dataclass(frozen=True)
class GridField:
    """Real-valued function on Z_N^d, values flat in row-major order."""

    N: int
    d: int
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64).reshape(-1)
        _validate_shape(self.N, self.d, v.size)
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_grid(cls, grid: np.ndarray) -> "GridField":
        """Build from a d-dimensional cube-shaped array."""
        grid = np.asarray(grid, dtype=np.float64)
        n = grid.shape[0]
        if grid.shape != (n,) * grid.ndim:
            raise ValueError(f"grid must be a cube, got shape {grid.shape}")
        return cls(N=n, d=grid.ndim, values=grid.reshape(-1))

    def grid(self) -> np.ndarray:
        """The values reshaped to (N,)*d (a view, read-only)."""
        return self.values.reshape((self.N,) * self.d)


@dataclass(frozen=True)
class Spectrum:
    """Complex DFT coefficients on Z_N^d, flat in row-major order."""

    N: int
    d: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.complex128).reshape(-1)
        _validate_shape(self.N, self.d, c.size)
        if not np.all(np.isfinite(c)):
            raise ValueError("spectrum coefficients must be finite")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_grid(cls, grid: np.ndarray) -> "Spectrum":
        grid = np.asarray(grid, dtype=np.complex128)
        n = grid.shape[0]
        if grid.shape != (n,) * grid.ndim:
            raise ValueError(f"grid must be a cube, got shape {grid.shape}")
        return cls(N=n, d=grid.ndim, coeffs=grid.reshape(-1))

    def grid(self) -> np.ndarray:
        return self.coeffs.reshape((self.N,) * self.d)

    def hermitian_defect(self) -> float:
        """l2 distance between the spectrum and its conjugate reversal."""
        s = self.grid()
        return float(np.linalg.norm(s - _conjugate_reversal(s)))


def _conjugate_reversal(s: np.ndarray) -> np.ndarray:
    # T[m] = conj(S[-m mod N]); real fields satisfy S == T
    axes = tuple(range(s.ndim))
    return np.conj(np.roll(np.flip(s, axis=axes), 1, axis=axes))


def flat_index(coords, N: int) -> int:
    """Row-major flat index of a coordinate vector."""
    out = 0
    for c in coords:
        if c < 0 or c >= N:
            raise ValueError(f"coordinate {c} outside [0, {N})")
        out = out * N + int(c)
    return out


def index_coords(flat: int, N: int, d: int) -> tuple[int, ...]:
    """Inverse of :func:`flat_index`."""
    if flat < 0 or flat >= N**d:
        raise ValueError(f"flat index {flat} outside [0, N^d)")
    out = []
    for j in range(d):
        out.append(flat // N ** (d - 1 - j) % N)
    return tuple(int(c) for c in out)


def dft(field: GridField) -> Spectrum:
    """Unitary discrete Fourier transform of a real field.

    Returns the spectrum with ``coeffs[m] = N^(-d/2) sum_x e^(-2pi i x.m/N)
    field[x]``; Parseval gives ``l2(coeffs) == grid_l2_norm(field)``.
    """
    g = field.grid()
    s = np.fft.fftn(g) * float(field.N) ** (-field.d / 2.0)
    return Spectrum(N=field.N, d=field.d, coeffs=s.reshape(-1))


def idft(spectrum: Spectrum) -> GridField:
    """Inverse unitary transform onto a real field.

    The spectrum must be Hermitian-symmetric (coeffs[-m] = conj(coeffs[m]))
    to within ``1e-8 * l2(coeffs)``; the rounding-level imaginary residue of
    the inverse FFT is discarded.

    Raises
    ------
    NonHermitianSpectrum
        If the symmetry defect exceeds the tolerance.
    """
    s = spectrum.grid()
    norm = float(np.linalg.norm(s))
    defect = float(np.linalg.norm(s - _conjugate_reversal(s)))
    if defect > 1e-8 * norm:
        raise NonHermitianSpectrum(
            f"symmetry defect {defect:.3e} exceeds 1e-8 * |s|_2 = {1e-8 * norm:.3e}"
        )
    g = np.fft.ifftn(s) * float(spectrum.N) ** (spectrum.d / 2.0)
    return GridField(N=spectrum.N, d=spectrum.d, values=g.real.reshape(-1))


def _as_coords(m, N: int | None):
    if isinstance(m, GridIndex):
        return np.asarray(m.coords, dtype=np.int64), m.N, False
    if N is None:
        raise ValueError("N is required when m is not a GridIndex")
    if np.isscalar(m):
        return np.asarray([m], dtype=np.int64), int(N), True
    return np.asarray(m, dtype=np.int64), int(N), False


def wrapped_representative(m, N: int | None = None):
    """Coordinates reduced mod N into {-floor(N/2), ..., ceil(N/2)-1}.

    Accepts a GridIndex, an integer (with ``N=``), or a coordinate sequence.
    Even N maps the Nyquist index N/2 to -N/2.
    """
    coords, n, scalar = _as_coords(m, N)
    half = n // 2
    rep = (coords + half) % n - half
    return int(rep[0]) if scalar else rep


def wrapped_magnitude(m, N: int | None = None) -> float:
    """Euclidean norm of the wrapped representative; 0 iff m = 0 mod N."""
    coords, n, _ = _as_coords(m, N)
    half = n // 2
    rep = (coords + half) % n - half
    return float(np.sqrt(np.sum(rep.astype(np.float64) ** 2)))


def grid_l2_norm(field: GridField) -> float:
    """Unnormalized grid norm (sum_x |h(x)|^2)^(1/2)."""
    return float(np.linalg.norm(field.values))


def empirical_norm(field: GridField, X) -> float:
    """Root mean square of the field over the sample set X.

    X may be a SampleSet or any sequence of flat row-major indices.
    """
    indices = np.asarray(getattr(X, "indices", X), dtype=np.int64).reshape(-1)
    if indices.size == 0:
        raise EmptySampleSet("empirical norm over an empty sample set")
    if indices.min() < 0 or indices.max() >= field.values.size:
        raise ValueError("sample indices outside the grid")
    vals = field.values[indices]
    return float(np.sqrt(np.mean(vals**2)))


def fourier_ratio(field) -> float:
    """l1/l2 ratio of the DFT coefficients; 0 for the zero field.

    Accepts a GridField (transformed first) or a Spectrum.  For nonzero
    fields the value lies in [1, N^(d/2)].
    """
    if isinstance(field, Spectrum):
        coeffs = field.coeffs
    else:
        coeffs = dft(field).coeffs
    l2 = float(np.linalg.norm(coeffs))
    if l2 == 0.0:
        return 0.0
    l1 = float(np.sum(np.abs(coeffs)))
    return l1 / l2
