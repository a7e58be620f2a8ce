"""Exception types shared across the package."""


class FrsampError(Exception):
    """Base class for all frsamp errors."""


class NonHermitianSpectrum(FrsampError):
    """Inverse transform requested for a spectrum that is not conjugate-symmetric."""


class EmptySampleSet(FrsampError):
    """An empirical norm or sample set was built from zero points."""


class BadExponent(FrsampError):
    """Rough-spectrum decay exponent alpha must exceed d/2 for square-summability."""


class WaveDimensionMismatch(FrsampError):
    """Wave snapshots default to d=3; other dimensions need an explicit override."""


class ZeroField(FrsampError):
    """Operation requires a nonzero field or spectrum."""


class DegenerateSnapshot(FrsampError):
    """Snapshot has (numerically) zero L2 norm, e.g. wave at an exceptional time."""


class BadParams(FrsampError):
    """Budget or bound parameters outside their documented domain."""


class BadCardinality(FrsampError):
    """Requested sample count outside 1..N^d."""


class ZeroTruth(FrsampError):
    """Relative error against an identically zero reference is undefined."""


class ConfigError(FrsampError):
    """Experiment configuration failed validation."""
