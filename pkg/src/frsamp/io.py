"""On-disk interchange formats.

SPFD (binary): header = magic "SPFD", version u32, d u32, N u32, kind u8
(0 real field, 1 complex spectrum), all little-endian; then the payload as
little-endian f64 in row-major order (complex payloads interleave re, im).

SPTP (text): header line "SPTP d", then one line per coefficient
"k1 ... kd re im" with full-precision decimals, sorted by frequency.

Samples (CSV): header "x1,...,xd,value", one row per observed point.  The
grid side is not part of the schema, so loading needs N from elsewhere
(typically the SPFD field the samples came from).
"""

from __future__ import annotations

import struct

import numpy as np

from .fields import TrigPolynomial
from .gridfft import GridField, Spectrum, flat_index
from .recovery import SampleSet

_MAGIC = b"SPFD"
_VERSION = 1
_HEADER = struct.Struct("<4sIIIB")

KIND_REAL = 0
KIND_COMPLEX = 1


def _io_error(path, exc) -> OSError:
    return OSError(f"{path}: {exc}")


def save_field(field: GridField, path) -> None:
    _save_spfd(path, field.d, field.N, KIND_REAL, field.values)


def save_spectrum(spectrum: Spectrum, path) -> None:
    payload = np.empty(2 * spectrum.coeffs.size, dtype=np.float64)
    payload[0::2] = spectrum.coeffs.real
    payload[1::2] = spectrum.coeffs.imag
    _save_spfd(path, spectrum.d, spectrum.N, KIND_COMPLEX, payload)


def _save_spfd(path, d: int, N: int, kind: int, payload: np.ndarray) -> None:
    try:
        with open(path, "wb") as fh:
            fh.write(_HEADER.pack(_MAGIC, _VERSION, d, N, kind))
            fh.write(np.asarray(payload, dtype="<f8").tobytes())
    except OSError as exc:
        raise _io_error(path, exc) from exc


def load_spfd(path):
    """Load an SPFD file; returns a GridField or a Spectrum by kind byte."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise _io_error(path, exc) from exc
    if len(raw) < _HEADER.size:
        raise ValueError(f"{path}: truncated SPFD header")
    magic, version, d, N, kind = _HEADER.unpack_from(raw)
    if magic != _MAGIC:
        raise ValueError(f"{path}: bad magic {magic!r}")
    if version != _VERSION:
        raise ValueError(f"{path}: unsupported SPFD version {version}")
    payload = np.frombuffer(raw, dtype="<f8", offset=_HEADER.size)
    count = N**d
    if kind == KIND_REAL:
        if payload.size != count:
            raise ValueError(f"{path}: expected {count} values, found {payload.size}")
        return GridField(N=N, d=d, values=payload.astype(np.float64))
    if kind == KIND_COMPLEX:
        if payload.size != 2 * count:
            raise ValueError(f"{path}: expected {2 * count} values, found {payload.size}")
        return Spectrum(N=N, d=d, coeffs=payload[0::2] + 1j * payload[1::2])
    raise ValueError(f"{path}: unknown kind byte {kind}")


def load_field(path) -> GridField:
    obj = load_spfd(path)
    if not isinstance(obj, GridField):
        raise ValueError(f"{path}: expected a real field, found a spectrum")
    return obj


def load_spectrum(path) -> Spectrum:
    obj = load_spfd(path)
    if not isinstance(obj, Spectrum):
        raise ValueError(f"{path}: expected a spectrum, found a real field")
    return obj


def save_poly(poly: TrigPolynomial, path) -> None:
    lines = [f"SPTP {poly.d}"]
    for k in sorted(poly.terms):
        a = poly.terms[k]
        coords = " ".join(str(c) for c in k)
        lines.append(f"{coords} {a.real!r} {a.imag!r}")
    try:
        with open(path, "w", encoding="ascii") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise _io_error(path, exc) from exc


def load_poly(path) -> TrigPolynomial:
    try:
        with open(path, "r", encoding="ascii") as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
    except OSError as exc:
        raise _io_error(path, exc) from exc
    if not lines or not lines[0].startswith("SPTP"):
        raise ValueError(f"{path}: missing SPTP header")
    try:
        d = int(lines[0].split()[1])
    except (IndexError, ValueError) as exc:
        raise ValueError(f"{path}: malformed SPTP header {lines[0]!r}") from exc
    terms = {}
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != d + 2:
            raise ValueError(f"{path}: expected {d + 2} columns, got {ln!r}")
        k = tuple(int(c) for c in parts[:d])
        terms[k] = complex(float(parts[d]), float(parts[d + 1]))
    return TrigPolynomial(d=d, terms=terms)


def save_samples(samples: SampleSet, path) -> None:
    header = ",".join(f"x{j + 1}" for j in range(samples.d)) + ",value"
    coords = samples.coords()
    rows = [header]
    for pt, val in zip(coords, samples.values):
        rows.append(",".join(str(int(c)) for c in pt) + f",{float(val)!r}")
    try:
        with open(path, "w", encoding="ascii") as fh:
            fh.write("\n".join(rows) + "\n")
    except OSError as exc:
        raise _io_error(path, exc) from exc


def load_samples(path, N: int, tau: float = 0.0) -> SampleSet:
    """Read a samples CSV; the grid side N is supplied by the caller."""
    try:
        with open(path, "r", encoding="ascii") as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
    except OSError as exc:
        raise _io_error(path, exc) from exc
    if not lines:
        raise ValueError(f"{path}: empty samples file")
    cols = lines[0].split(",")
    if cols[-1] != "value" or len(cols) < 2:
        raise ValueError(f"{path}: malformed samples header {lines[0]!r}")
    d = len(cols) - 1
    indices = []
    values = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != d + 1:
            raise ValueError(f"{path}: expected {d + 1} columns, got {ln!r}")
        coords = tuple(int(c) for c in parts[:d])
        indices.append(flat_index(coords, N))
        values.append(float(parts[d]))
    return SampleSet(N=N, d=d, indices=np.array(indices), values=np.array(values), tau=tau)
