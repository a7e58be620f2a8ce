"""Fourier-ratio sampling experiments on periodic grids.

Core objects: grid fields and unitary DFTs (`gridfft`), structured random
field families (`fields`), constant-coefficient evolution snapshots
(`propagators`), Fourier-ratio and sampling-budget bounds (`bounds`),
noise-aware l1 recovery from point samples (`recovery`), and the experiment
harness with CSV/SVG output (`harness`).
"""

from ._kernels import backend
from .bounds import (
    BudgetCurve,
    FrBoundReport,
    aliasing_check,
    aliasing_check_all,
    budget_over_time,
    calibrate,
    decay_constant,
    fr_bound_heat,
    fr_bound_initial,
    fr_bound_wave,
    gaussian_lattice_sum,
    heat_decay_rate,
    lattice_power_sum,
    riemann_l2_error,
    riemann_mean_error,
    s_d,
    sample_budget,
)
from .errors import (
    BadCardinality,
    BadExponent,
    BadParams,
    ConfigError,
    DegenerateSnapshot,
    EmptySampleSet,
    FrsampError,
    NonHermitianSpectrum,
    WaveDimensionMismatch,
    ZeroField,
    ZeroTruth,
)
from .fields import (
    FAMILIES,
    FamilySpec,
    TrigPolynomial,
    build_family,
    ck_bound,
    continuous_l2,
    continuous_mean,
    discretize,
    lattice_ball,
)
from .gridfft import (
    GridField,
    GridIndex,
    Spectrum,
    dft,
    empirical_norm,
    fourier_ratio,
    grid_l2_norm,
    idft,
    wrapped_magnitude,
    wrapped_representative,
)
from .harness import (
    ExperimentConfig,
    ResultTable,
    build_config,
    emit_csv,
    emit_svg,
    minimal_budget,
    parse_config_file,
    run_budget_study,
    run_fr_sweep,
    run_recovery_sweep,
    wilson_interval,
)
from .io import (
    load_field,
    load_poly,
    load_samples,
    load_spectrum,
    save_field,
    save_poly,
    save_samples,
    save_spectrum,
)
from .propagators import (
    PdeKind,
    apply_snapshot,
    heat_multiplier,
    snapshot_grid,
    wave_multiplier,
)
from .recovery import (
    RecoveryResult,
    SampleSet,
    SolverConfig,
    is_success,
    observe,
    recover_l1,
    rel_err,
    sample_uniform,
)

__version__ = "0.1.0"

__all__ = [
    "BadCardinality",
    "BadExponent",
    "BadParams",
    "BudgetCurve",
    "ConfigError",
    "DegenerateSnapshot",
    "EmptySampleSet",
    "ExperimentConfig",
    "FAMILIES",
    "FamilySpec",
    "FrBoundReport",
    "FrsampError",
    "GridField",
    "GridIndex",
    "NonHermitianSpectrum",
    "PdeKind",
    "RecoveryResult",
    "ResultTable",
    "SampleSet",
    "SolverConfig",
    "Spectrum",
    "TrigPolynomial",
    "WaveDimensionMismatch",
    "ZeroField",
    "ZeroTruth",
    "aliasing_check",
    "aliasing_check_all",
    "apply_snapshot",
    "backend",
    "budget_over_time",
    "build_config",
    "build_family",
    "calibrate",
    "ck_bound",
    "continuous_l2",
    "continuous_mean",
    "decay_constant",
    "dft",
    "discretize",
    "emit_csv",
    "emit_svg",
    "empirical_norm",
    "fourier_ratio",
    "fr_bound_heat",
    "fr_bound_initial",
    "fr_bound_wave",
    "gaussian_lattice_sum",
    "grid_l2_norm",
    "heat_decay_rate",
    "heat_multiplier",
    "idft",
    "is_success",
    "lattice_ball",
    "lattice_power_sum",
    "load_field",
    "load_poly",
    "load_samples",
    "load_spectrum",
    "minimal_budget",
    "observe",
    "parse_config_file",
    "recover_l1",
    "rel_err",
    "riemann_l2_error",
    "riemann_mean_error",
    "run_budget_study",
    "run_fr_sweep",
    "run_recovery_sweep",
    "s_d",
    "sample_budget",
    "sample_uniform",
    "save_field",
    "save_poly",
    "save_samples",
    "save_spectrum",
    "snapshot_grid",
    "wave_multiplier",
    "wilson_interval",
    "wrapped_magnitude",
    "wrapped_representative",
]
