"""Experiment sweeps, budget studies, and deterministic CSV/SVG emission.

Every sweep is a pure function of its ExperimentConfig (master_seed included):
trial seeds come from ``rng.split(master_seed, trial)``, per-trial results are
stored and reduced in trial order, so the worker count never changes the
output bytes.  Wall-clock timings are kept on the in-memory rows for
reporting but never written to CSV, which keeps the CSV bytes reproducible.

The rough-spectrum family is re-banded per grid: its cutoff is tied to the
evaluation grid as K = floor(N/2) - 1, so discretization stays alias-free
while the band grows with N.
"""

from __future__ import annotations

import dataclasses
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field

from . import rng
from .bounds import BudgetCurve, budget_over_time
from .errors import ConfigError
from .fields import FamilySpec, TrigPolynomial, build_family, discretize
from .gridfft import fourier_ratio
from .propagators import PdeKind, snapshot_grid
from .recovery import SolverConfig, is_success, observe, recover_l1, rel_err, sample_uniform

SCHEMA_VERSION = 1

SWEEP_COLUMNS = (
    "N",
    "t",
    "M",
    "success_rate",
    "mean_rel_err",
    "FR_g",
    "FR_gt",
    "trials",
    "not_converged",
    "wilson_lo",
    "wilson_hi",
    "wall_time",
)

SVG_KINDS = ("fr_vs_t", "success_vs_M", "err_vs_M", "fr_vs_N")


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a sweep needs; validated on construction.

    Ns defaults to the desk-scale grids (64, 128, 256 in d <= 2; 16, 32, 64
    in d = 3).  Ms defaults to powers of two from 8 up to half the smallest
    grid.  eps, C, m0, lam only matter for budget studies.
    """

    family: FamilySpec
    pde: str = "heat"
    Ns: tuple = ()
    times: tuple = (0.0, 0.01, 0.05, 0.1)
    Ms: tuple = ()
    trials: int = 50
    sigma: float = 0.0
    threshold: float = 0.05
    master_seed: int = 0
    eps: float = 0.1
    C: float = 1.0
    m0: float | None = None
    lam: float | None = None
    workers: int = 1
    max_iters: int = 20000
    target_prob: float = 0.9

    def __post_init__(self):
        if self.pde not in ("heat", "wave"):
            raise ConfigError(f"pde must be 'heat' or 'wave', got {self.pde!r}")
        ns = tuple(int(n) for n in self.Ns)
        if not ns:
            ns = (16, 32, 64) if self.family.d == 3 else (64, 128, 256)
        if any(n < 2 for n in ns):
            raise ConfigError(f"grid sides must be >= 2, got {ns}")
        object.__setattr__(self, "Ns", ns)
        times = tuple(float(t) for t in self.times)
        if not times or any(t < 0 for t in times):
            raise ConfigError(f"times must be nonempty and >= 0, got {times}")
        object.__setattr__(self, "times", times)
        min_d = min(ns) ** self.family.d
        ms = tuple(int(m) for m in self.Ms)
        if not ms:
            ms = tuple(2**k for k in range(3, max(4, int(math.log2(min_d)))))
            ms = tuple(m for m in ms if m <= min_d) or (min_d,)
        if any(m < 1 or m > min_d for m in ms):
            raise ConfigError(f"Ms must lie in [1, {min_d}], got {ms}")
        object.__setattr__(self, "Ms", tuple(sorted(ms)))
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if self.sigma < 0:
            raise ConfigError(f"sigma must be >= 0, got {self.sigma}")
        if not (0 < self.threshold <= 1):
            raise ConfigError(f"threshold must be in (0, 1], got {self.threshold}")
        if not (0 < self.eps < 0.5):
            raise ConfigError(f"eps must be in (0, 1/2), got {self.eps}")
        if self.C <= 0:
            raise ConfigError(f"C must be positive, got {self.C}")
        if (self.m0 is None) != (self.lam is None):
            raise ConfigError("sensor decay needs both m0 and lambda")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        if self.max_iters < 1:
            raise ConfigError(f"max_iters must be >= 1, got {self.max_iters}")
        if not (0 < self.target_prob <= 1):
            raise ConfigError(f"target_prob must be in (0, 1], got {self.target_prob}")


@dataclass
class ResultTable:
    """Columnar results; one list entry per row, aligned with `columns`."""

    columns: tuple
    rows: list = dc_field(default_factory=list)
    schema_version: int = SCHEMA_VERSION

    def column(self, name: str) -> list:
        j = self.columns.index(name)
        return [row[j] for row in self.rows]

    def cell(self, i: int, name: str):
        return self.rows[i][self.columns.index(name)]


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def family_for(config: ExperimentConfig, N: int) -> FamilySpec:
    """Per-grid family spec: rough-spectrum gets its cutoff tied to N."""
    if config.family.family == "rough-spectrum":
        return dataclasses.replace(config.family, K=N // 2 - 1)
    return config.family


def _target_field(poly: TrigPolynomial, pde: str, t: float, N: int):
    """Ground-truth grid field at time t.

    The wave snapshot at t = 0 is identically zero, so t = 0 is read as "the
    initial data" for both evolutions (for heat this is the exact identity).
    """
    if pde == "wave" and t == 0.0:
        return discretize(poly, N)
    return snapshot_grid(poly, PdeKind(pde, t), N, allow_any_dim=True)


def run_fr_sweep(config: ExperimentConfig) -> ResultTable:
    """FR of the discretized initial data and of each snapshot, per (N, t)."""
    table = ResultTable(columns=SWEEP_COLUMNS)
    for N in config.Ns:
        poly = build_family(family_for(config, N))
        t0 = time.perf_counter()
        fr_g = fourier_ratio(discretize(poly, N))
        for t in config.times:
            fr_gt = fourier_ratio(_target_field(poly, config.pde, t, N))
            table.rows.append(
                (N, t, None, None, None, fr_g, fr_gt, None, None, None, None,
                 time.perf_counter() - t0)
            )
    return table


def _run_trial(args) -> tuple[bool, bool, float]:
    """(success, converged, rel_err) for one recovery trial; order-free."""
    truth, M, sigma, threshold, trial_seed, solver_cfg = args
    mask = sample_uniform(truth.N, truth.d, M, seed=trial_seed)
    samples = observe(truth, mask, sigma, seed=trial_seed)
    result = recover_l1(samples, solver_cfg)
    err = rel_err(result.estimate, truth)
    success = result.converged and err <= threshold
    return success, result.converged, err


def _cell_tasks(config: ExperimentConfig, truth, M: int):
    solver_cfg = SolverConfig(max_iters=config.max_iters)
    return [
        (truth, M, config.sigma, config.threshold,
         rng.split(config.master_seed, trial), solver_cfg)
        for trial in range(config.trials)
    ]


def _aggregate(results: list) -> tuple[float, float, int]:
    """Reduce per-trial results (in trial order) to cell statistics."""
    successes = sum(1 for s, _, _ in results if s)
    not_conv = sum(1 for _, c, _ in results if not c)
    mean_err = sum(e for _, _, e in results) / len(results)
    return successes / len(results), mean_err, not_conv


def run_recovery_sweep(config: ExperimentConfig, executor=None) -> ResultTable:
    """Success probability and mean RelErr per (N, t, M), `trials` each.

    Per-trial seeds depend only on the trial index, so sample sets are shared
    across cells (paired comparisons across t, nested masks across M).
    NotConverged trials count as failures and are tallied in the
    `not_converged` diagnostics column.
    """
    table = ResultTable(columns=SWEEP_COLUMNS)
    own_pool = config.workers > 1 and executor is None
    pool = ProcessPoolExecutor(max_workers=config.workers) if own_pool else executor
    try:
        for N in config.Ns:
            poly = build_family(family_for(config, N))
            fr_g = fourier_ratio(discretize(poly, N))
            for t in config.times:
                truth = _target_field(poly, config.pde, t, N)
                fr_gt = fourier_ratio(truth)
                for M in config.Ms:
                    t0 = time.perf_counter()
                    tasks = _cell_tasks(config, truth, M)
                    if pool is not None:
                        results = list(pool.map(_run_trial, tasks))
                    else:
                        results = [_run_trial(task) for task in tasks]
                    rate, mean_err, not_conv = _aggregate(results)
                    successes = round(rate * config.trials)
                    lo, hi = wilson_interval(successes, config.trials)
                    table.rows.append(
                        (N, t, M, rate, mean_err, fr_g, fr_gt, config.trials,
                         not_conv, lo, hi, time.perf_counter() - t0)
                    )
    finally:
        if own_pool:
            pool.shutdown()
    return table


def minimal_budget(config: ExperimentConfig, target_prob: float | None = None) -> ResultTable:
    """Smallest M in config.Ms reaching the target success rate, per (N, t).

    Bisection over the Ms grid with full trial counts at each probe (the
    success curve is treated as monotone); cells that never reach the target
    are recorded as "above range".
    """
    target = config.target_prob if target_prob is None else float(target_prob)
    if not (0 < target <= 1):
        raise ConfigError(f"target_prob must be in (0, 1], got {target}")
    table = ResultTable(columns=("N", "t", "M_star"))
    own_pool = config.workers > 1
    pool = ProcessPoolExecutor(max_workers=config.workers) if own_pool else None
    try:
        for N in config.Ns:
            poly = build_family(family_for(config, N))
            for t in config.times:
                truth = _target_field(poly, config.pde, t, N)
                cache: dict[int, float] = {}

                def rate_at(M: int) -> float:
                    if M not in cache:
                        tasks = _cell_tasks(config, truth, M)
                        if pool is not None:
                            results = list(pool.map(_run_trial, tasks))
                        else:
                            results = [_run_trial(task) for task in tasks]
                        cache[M] = _aggregate(results)[0]
                    return cache[M]

                ms = config.Ms
                if rate_at(ms[-1]) < target:
                    table.rows.append((N, t, "above range"))
                    continue
                lo, hi = 0, len(ms) - 1
                while lo < hi:
                    mid = (lo + hi) // 2
                    if rate_at(ms[mid]) >= target:
                        hi = mid
                    else:
                        lo = mid + 1
                table.rows.append((N, t, ms[lo]))
    finally:
        if own_pool:
            pool.shutdown()
    return table


def run_budget_study(config: ExperimentConfig) -> tuple[dict, ResultTable]:
    """Sampling budget M(t) from measured FR values, with sensor feasibility.

    Returns ({N: BudgetCurve}, table); the table has one row per (N, t) with
    the measured r, the budget M, the sensor availability m (if configured),
    and window membership.
    """
    fr_table = run_fr_sweep(config)
    curves: dict[int, BudgetCurve] = {}
    table = ResultTable(columns=("N", "t", "r", "M", "m", "in_window"))
    for N in config.Ns:
        rows = [row for row in fr_table.rows if row[0] == N]
        times = [row[1] for row in rows]
        rs = [row[6] for row in rows]
        curve = budget_over_time(
            times, rs, config.eps, N**config.family.d, config.C,
            m0=config.m0, lam=config.lam,
        )
        curves[N] = curve
        for i, t in enumerate(curve.times):
            m_val = None if curve.m_of_t is None else curve.m_of_t[i]
            in_win = (
                curve.window is not None
                and curve.window[0] <= t <= curve.window[1]
            )
            table.rows.append((N, t, curve.r_of_t[i], curve.M_of_t[i], m_val, in_win))
    return curves, table


def _render_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def emit_csv(table: ResultTable, path) -> None:
    """Write the table as CSV: fixed header order, 12 significant digits.

    Wall-clock columns are dropped so the bytes are a pure function of the
    config; the schema version rides in a leading comment line.
    """
    if not table.rows:
        raise ValueError(f"{path}: refusing to write an empty table")
    keep = [j for j, c in enumerate(table.columns) if c != "wall_time"]
    lines = [f"# schema_version={table.schema_version}"]
    lines.append(",".join(table.columns[j] for j in keep))
    for row in table.rows:
        lines.append(",".join(_render_cell(row[j]) for j in keep))
    try:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"{path}: {exc}") from exc


_PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
)

_SVG_SPECS = {
    "fr_vs_t": ("t", "FR(g_t)", "Fourier ratio vs time"),
    "success_vs_M": ("M", "success rate", "Recovery success vs sample count"),
    "err_vs_M": ("M", "mean RelErr", "Reconstruction error vs sample count"),
    "fr_vs_N": ("N", "FR", "Fourier ratio vs grid size"),
}


def _svg_series(table: ResultTable, kind: str):
    """(label, points) series for each chart kind, in sorted label order."""
    col = table.columns.index
    series: dict[str, list] = {}
    if kind == "fr_vs_t":
        for row in table.rows:
            series.setdefault(f"N={row[col('N')]}", []).append(
                (row[col("t")], row[col("FR_gt")])
            )
    elif kind in ("success_vs_M", "err_vs_M"):
        y_name = "success_rate" if kind == "success_vs_M" else "mean_rel_err"
        for row in table.rows:
            if row[col("M")] is None:
                continue
            label = f"N={row[col('N')]} t={_render_cell(row[col('t')])}"
            series.setdefault(label, []).append((row[col("M")], row[col(y_name)]))
    elif kind == "fr_vs_N":
        seen_g = set()
        for row in table.rows:
            n = row[col("N")]
            if n not in seen_g:
                seen_g.add(n)
                series.setdefault("FR(g)", []).append((n, row[col("FR_g")]))
            series.setdefault(f"FR(g_t) t={_render_cell(row[col('t')])}", []).append(
                (n, row[col("FR_gt")])
            )
    else:
        raise ValueError(f"unknown chart kind {kind!r}, expected one of {SVG_KINDS}")
    out = []
    for label in sorted(series):
        pts = [(x, y) for x, y in series[label] if x is not None and y is not None]
        if pts:
            out.append((label, sorted(pts)))
    return out


def emit_svg(table: ResultTable, kind: str, path) -> None:
    """Render one of the four chart kinds as a standalone SVG line chart."""
    if not table.rows:
        raise ValueError(f"{path}: refusing to plot an empty table")
    x_label, y_label, title = _SVG_SPECS.get(kind, (None, None, None))
    if x_label is None:
        raise ValueError(f"unknown chart kind {kind!r}, expected one of {SVG_KINDS}")
    series = _svg_series(table, kind)
    if not series:
        raise ValueError(f"{path}: no plottable values for kind {kind!r}")
    width, height = 720.0, 440.0
    left, right, top, bottom = 70.0, 180.0, 40.0, 50.0
    xs = [x for _, pts in series for x, _ in pts]
    ys = [y for _, pts in series for _, y in pts]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 1.0, x_hi + 1.0
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 1.0, y_hi + 1.0
    y_lo, y_hi = y_lo - 0.05 * (y_hi - y_lo), y_hi + 0.05 * (y_hi - y_lo)
    px = width - left - right
    py = height - top - bottom

    def sx(x: float) -> float:
        return left + (x - x_lo) / (x_hi - x_lo) * px

    def sy(y: float) -> float:
        return top + py - (y - y_lo) / (y_hi - y_lo) * py

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {width:.0f} {height:.0f}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<text x="{left:.1f}" y="24" font-family="sans-serif" font-size="15">{title}</text>',
        f'<line x1="{left:.1f}" y1="{top + py:.1f}" x2="{left + px:.1f}" y2="{top + py:.1f}" '
        'stroke="black" stroke-width="1"/>',
        f'<line x1="{left:.1f}" y1="{top:.1f}" x2="{left:.1f}" y2="{top + py:.1f}" '
        'stroke="black" stroke-width="1"/>',
    ]
    for i in range(5):
        fx = x_lo + (x_hi - x_lo) * i / 4
        fy = y_lo + (y_hi - y_lo) * i / 4
        parts.append(
            f'<text x="{sx(fx):.1f}" y="{top + py + 18:.1f}" font-family="sans-serif" '
            f'font-size="11" text-anchor="middle">{fx:.6g}</text>'
        )
        parts.append(
            f'<text x="{left - 8:.1f}" y="{sy(fy) + 4:.1f}" font-family="sans-serif" '
            f'font-size="11" text-anchor="end">{fy:.6g}</text>'
        )
    parts.append(
        f'<text x="{left + px / 2:.1f}" y="{height - 10:.1f}" font-family="sans-serif" '
        f'font-size="12" text-anchor="middle">{x_label}</text>'
    )
    parts.append(
        f'<text x="18" y="{top + py / 2:.1f}" font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 18 {top + py / 2:.1f})" text-anchor="middle">{y_label}</text>'
    )
    for i, (label, pts) in enumerate(series):
        color = _PALETTE[i % len(_PALETTE)]
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
        parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        ly = top + 14 + 16 * i
        lx = left + px + 12
        parts.append(f'<rect x="{lx:.1f}" y="{ly - 9:.1f}" width="10" height="10" fill="{color}"/>')
        parts.append(
            f'<text x="{lx + 14:.1f}" y="{ly:.1f}" font-family="sans-serif" font-size="11">'
            f"{label}</text>"
        )
    parts.append("</svg>")
    try:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write("\n".join(parts) + "\n")
    except OSError as exc:
        raise OSError(f"{path}: {exc}") from exc


# ---------------------------------------------------------------------------
# flat key=value config files
# ---------------------------------------------------------------------------

_LIST_KEYS = {"Ns", "times", "Ms", "carrier", "centers"}
_CONFIG_KEYS = {
    "family", "d", "K", "alpha", "seed", "width", "n_bumps", "carrier",
    "envelope_band", "pde", "Ns", "times", "Ms", "trials", "sigma",
    "threshold", "master_seed", "eps", "C", "m0", "lambda", "workers",
    "max_iters", "target_prob",
}


def parse_config_file(path) -> dict:
    """Flat key=value lines; '#' comments; lists are comma-separated."""
    try:
        with open(path, "r", encoding="ascii") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    out: dict[str, str] = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def build_config(mapping: dict) -> ExperimentConfig:
    """ExperimentConfig from a flat string mapping (config file or CLI merge)."""
    unknown = set(mapping) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    def get(key, conv, default=None):
        if key not in mapping or mapping[key] in ("", None):
            return default
        try:
            return conv(mapping[key])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key!r}: {mapping[key]!r}") from exc

    def int_list(text):
        if isinstance(text, (tuple, list)):
            return tuple(int(v) for v in text)
        return tuple(int(v) for v in str(text).split(",") if v != "")

    def float_list(text):
        if isinstance(text, (tuple, list)):
            return tuple(float(v) for v in text)
        return tuple(float(v) for v in str(text).split(",") if v != "")

    family_name = get("family", str, "random-trig")
    d = get("d", int, 2)
    extras = {}
    width = get("width", float)
    if width is not None:
        extras["width"] = width
    n_bumps = get("n_bumps", int)
    if n_bumps is not None:
        extras["n_bumps"] = n_bumps
    carrier = get("carrier", int_list)
    if carrier is not None:
        extras["carrier"] = carrier
    env_band = get("envelope_band", int)
    if env_band is not None:
        extras["envelope_band"] = env_band
    try:
        family = FamilySpec(
            family=family_name,
            d=d,
            K=get("K", int),
            alpha=get("alpha", float),
            seed=get("seed", int, 0),
            extras=extras,
        )
        return ExperimentConfig(
            family=family,
            pde=get("pde", str, "heat"),
            Ns=get("Ns", int_list, ()),
            times=get("times", float_list, (0.0, 0.01, 0.05, 0.1)),
            Ms=get("Ms", int_list, ()),
            trials=get("trials", int, 50),
            sigma=get("sigma", float, 0.0),
            threshold=get("threshold", float, 0.05),
            master_seed=get("master_seed", int, 0),
            eps=get("eps", float, 0.1),
            C=get("C", float, 1.0),
            m0=get("m0", float),
            lam=get("lambda", float),
            workers=get("workers", int, 1),
            max_iters=get("max_iters", int, 20000),
            target_prob=get("target_prob", float, 0.9),
        )
    except (ValueError, ConfigError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc
