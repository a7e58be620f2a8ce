"""End-to-end gate: one test per advertised guarantee, at its stated tolerance.

Each test here pins a headline behavior of the package: transform exactness,
the aliasing identity, lattice-sum growth regimes, smoothing and roughness of
the Fourier ratio under the two evolutions, solver certificates, the recovery
phase transition, the budget calculus, and byte determinism of sweeps.
Golden numbers were derived with the independent oracles in `oracles.py`
before being frozen; tolerances and runtime caps are part of the contract.
"""

import math
import time

import numpy as np
import pytest

import oracles
from frsamp import (
    FamilySpec,
    GridField,
    PdeKind,
    SampleSet,
    apply_snapshot,
    budget_over_time,
    build_family,
    dft,
    discretize,
    fourier_ratio,
    gaussian_lattice_sum,
    grid_l2_norm,
    idft,
    lattice_power_sum,
    observe,
    recover_l1,
    sample_budget,
    sample_uniform,
    snapshot_grid,
)
from frsamp.bounds import aliasing_check_all
from frsamp.harness import ExperimentConfig, emit_csv, run_fr_sweep, run_recovery_sweep


def test_transforms_match_naive_sum_oracle_with_parseval_roundtrip():
    t0 = time.perf_counter()
    combos = [(N, d) for d in (1, 2, 3) for N in range(2, 9)]
    for i in range(100):
        N, d = combos[i % len(combos)]
        gen = np.random.default_rng(i)
        f = GridField(N=N, d=d, values=gen.standard_normal(N**d))
        want = oracles.naive_dft(f.values, N, d)
        got = dft(f).coeffs
        assert np.max(np.abs(got - want)) <= 1e-12, (N, d, i)

    for N, d in [(256, 1), (256, 2), (64, 3)]:
        gen = np.random.default_rng(N + d)
        f = GridField(N=N, d=d, values=gen.standard_normal(N**d))
        s = dft(f)
        norm = grid_l2_norm(f)
        assert abs(float(np.linalg.norm(s.coeffs)) - norm) <= 1e-10 * norm
        back = idft(s)
        assert float(np.linalg.norm(back.values - f.values)) <= 1e-10 * norm
    assert time.perf_counter() - t0 < 30.0


def test_aliasing_identity_exhaustive_over_bins_and_families():
    t0 = time.perf_counter()
    for N in (8, 16):
        families = [
            FamilySpec("random-trig", d=2, seed=1),
            FamilySpec("rough-spectrum", d=2, K=N // 2 - 1, alpha=2.0, seed=1),
            FamilySpec("bump-sum", d=2, seed=1),
            FamilySpec("modulated-wave", d=2, seed=1),
        ]
        for spec in families:
            poly = build_family(spec)
            lhs, rhs = aliasing_check_all(poly, N)
            scale = 1.0 + float(np.max(np.abs(rhs)))
            assert np.max(np.abs(lhs - rhs)) <= 1e-10 * scale, (spec.family, N)
    assert time.perf_counter() - t0 < 10.0


def test_lattice_sum_growth_regimes_match_enumeration_oracle():
    t0 = time.perf_counter()
    # the sums themselves against the plain-loop enumeration
    assert lattice_power_sum(32, 3, 2.0) == pytest.approx(
        oracles.lattice_power_sum_loop(32, 3, 2.0), rel=1e-12
    )
    assert gaussian_lattice_sum(32, 3, 0.5) == pytest.approx(
        oracles.gaussian_lattice_sum_loop(32, 3, 0.5), rel=1e-12
    )

    # linear growth in d=3 at the critical power
    ratio = lattice_power_sum(64, 3, 2.0) / lattice_power_sum(32, 3, 2.0)
    assert 1.7 <= ratio <= 2.3

    # logarithmic growth in d=2: one doubling adds about 2*pi*ln(2)
    diff = lattice_power_sum(64, 2, 2.0) - lattice_power_sum(32, 2, 2.0)
    assert 0.5 <= diff / (2 * math.pi * math.log(2)) <= 1.5

    # convergent regimes barely move
    p4_32, p4_64 = lattice_power_sum(32, 3, 4.0), lattice_power_sum(64, 3, 4.0)
    assert abs(p4_64 - p4_32) / p4_32 < 0.05
    g_32, g_64 = gaussian_lattice_sum(32, 3, 0.5), gaussian_lattice_sum(64, 3, 0.5)
    assert abs(g_64 - g_32) / g_32 < 0.05
    assert time.perf_counter() - t0 < 60.0


def test_heat_snapshot_fr_grid_independent_and_monotone_in_time():
    t0 = time.perf_counter()
    times = (0.0, 0.01, 0.05, 0.1)
    for seed in (0, 1, 2):
        poly = build_family(FamilySpec("random-trig", d=2, seed=seed))
        at_t05 = []
        for N in (64, 128, 256):
            frs = [
                fourier_ratio(snapshot_grid(poly, PdeKind("heat", t), N))
                for t in times
            ]
            assert all(b <= 1.01 * a for a, b in zip(frs, frs[1:])), (seed, N)
            at_t05.append(frs[2])
        spread = max(at_t05) / min(at_t05) - 1.0
        assert spread < 0.10, (seed, at_t05)
    assert time.perf_counter() - t0 < 60.0


# frozen from the coefficient-folding oracle (rough-spectrum d=3, alpha=2,
# cutoff N//2 - 1; sign draws cancel in FR, so the values are seed-free)
WAVE_CONTRAST_GOLDEN = {
    16: (20.5027560637, 7.4478878456),
    32: (45.3406612195, 9.7410672823),
    64: (94.7087135971, 11.9009579252),
}


def test_wave_snapshot_fr_stays_flat_while_initial_data_grows():
    t0 = time.perf_counter()
    measured = {}
    for N, (want_g, want_w) in WAVE_CONTRAST_GOLDEN.items():
        spec = FamilySpec("rough-spectrum", d=3, K=N // 2 - 1, alpha=2.0, seed=0)
        poly = build_family(spec)
        snap = apply_snapshot(poly, PdeKind("wave", 0.25))
        fr_g = fourier_ratio(discretize(poly, N))
        fr_w = fourier_ratio(discretize(snap, N))
        # package route and independent folding route agree with the goldens
        assert fr_g == pytest.approx(want_g, rel=1e-9)
        assert fr_w == pytest.approx(want_w, rel=1e-9)
        assert oracles.fr_from_coefficients(poly.terms, N, 3) == pytest.approx(
            want_g, rel=1e-9
        )
        assert oracles.fr_from_coefficients(snap.terms, N, 3) == pytest.approx(
            want_w, rel=1e-9
        )
        measured[N] = (fr_g, fr_w)
    for small, large in ((16, 32), (32, 64)):
        growth_g = measured[large][0] / measured[small][0]
        growth_w = measured[large][1] / measured[small][1]
        assert 1.5 <= growth_g <= 2.5, (small, large, growth_g)
        assert growth_w < 1.4, (small, large, growth_w)
    assert time.perf_counter() - t0 < 120.0


def test_solver_certificates_and_exact_small_instance_objectives():
    cvxpy = pytest.importorskip("cvxpy")
    t0 = time.perf_counter()
    N = 8
    gen = np.random.default_rng(0)
    checked = 0
    for sparsity in (1, 2):
        for M in (4, 6, 8):
            for tau_frac in (0.0, 0.05):
                coeffs = np.zeros(N, dtype=complex)
                for k in gen.choice([1, 2, 3], size=sparsity, replace=False):
                    coeffs[k] = gen.standard_normal() + 1j * gen.standard_normal()
                    coeffs[(-k) % N] = coeffs[k].conjugate()
                q = np.fft.ifft(coeffs) * math.sqrt(N)
                truth = GridField(N=N, d=1, values=q.real)
                X = sample_uniform(N, 1, M, seed=M + sparsity)
                y = truth.values[X]
                tau = tau_frac * float(np.linalg.norm(y))
                out = recover_l1(SampleSet(N=N, d=1, indices=X, values=y, tau=tau))
                assert out.converged
                y_norm = float(np.linalg.norm(y))
                assert out.feasibility_residual <= 1e-6 * (1 + y_norm)
                # truth is feasible, so the solved objective cannot exceed its l1
                truth_obj = float(np.sum(np.abs(dft(truth).coeffs)))
                assert out.objective <= truth_obj * (1 + 1e-6)
                want = oracles.cone_l1_objective(N, X, y, tau)
                assert out.objective == pytest.approx(want, rel=1e-6)
                checked += 1
    assert checked == 12

    # noisy 2d instances: certificates hold with a nonzero constraint radius
    f = discretize(build_family(FamilySpec("random-trig", d=2, K=3, seed=2)), 16)
    for M, sigma in ((128, 0.05), (200, 0.01)):
        s = observe(f, sample_uniform(16, 2, M, seed=M), sigma, seed=1)
        out = recover_l1(s)
        assert out.converged
        y_norm = float(np.linalg.norm(s.values))
        assert out.feasibility_residual <= 1e-6 * (1 + y_norm)
        truth_obj = float(np.sum(np.abs(dft(f).coeffs)))
        assert out.objective <= truth_obj * (1 + 1e-6)
    assert time.perf_counter() - t0 < 120.0


def test_recovery_phase_transition_smoothed_snapshot_needs_fewer_samples():
    t0 = time.perf_counter()
    config = ExperimentConfig(
        family=FamilySpec("rough-spectrum", d=2, K=8, alpha=2.0, seed=0),
        pde="heat",
        Ns=(64,),
        times=(0.0, 0.05),
        Ms=(100, 200, 400, 800),
        trials=50,
        sigma=0.0,
        threshold=0.05,
        master_seed=0,
    )
    table = run_recovery_sweep(config)
    slack = 2 / config.trials

    def rates(t):
        rows = [
            (table.cell(i, "M"), table.cell(i, "success_rate"))
            for i in range(len(table.rows))
            if table.cell(i, "t") == t
        ]
        return sorted(rows)

    def m_star(t, target=0.9):
        for m, rate in rates(t):
            if rate >= target:
                return m
        return math.inf

    for t in config.times:
        rs = [rate for _, rate in rates(t)]
        assert all(b >= a - slack for a, b in zip(rs, rs[1:])), (t, rs)

    assert m_star(0.05) < math.inf  # the smoothed field is recoverable in range
    assert m_star(0.05) <= m_star(0.0)
    assert time.perf_counter() - t0 < 900.0


def test_budget_rule_window_matches_hand_scan_and_is_monotone():
    t0 = time.perf_counter()
    times = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5]
    rs = [9.0, 5.0, 2.5, 1.8, 1.6, 1.5]
    curve = budget_over_time(times, rs, eps=0.45, D=1e9, m0=2000.0, lam=2.0)
    assert curve.window == oracles.window_hand_scan(times, curve.m_of_t, curve.M_of_t)
    assert curve.window is not None

    r_grid = np.linspace(1.0, 30.0, 10)
    eps_grid = np.linspace(0.01, 0.45, 10)
    d_grid = np.logspace(math.log10(2.0), 9, 10)
    budgets = {
        (i, j, k): sample_budget(float(r), float(e), float(D))
        for i, r in enumerate(r_grid)
        for j, e in enumerate(eps_grid)
        for k, D in enumerate(d_grid)
    }
    for i in range(10):
        for j in range(10):
            for k in range(10):
                if i:
                    assert budgets[(i, j, k)] >= budgets[(i - 1, j, k)]
                if j:
                    assert budgets[(i, j, k)] <= budgets[(i, j - 1, k)]
                if k:
                    assert budgets[(i, j, k)] >= budgets[(i, j, k - 1)]
    assert time.perf_counter() - t0 < 10.0


def test_sweeps_emit_byte_identical_csv_on_repeat_runs(tmp_path):
    fr_cfg = ExperimentConfig(
        family=FamilySpec("random-trig", d=2, seed=7), Ns=(32, 64),
        times=(0.0, 0.05),
    )
    rec_cfg = ExperimentConfig(
        family=FamilySpec(
            "modulated-wave", d=1, K=2, seed=0,
            extras={"envelope_band": 0, "carrier": (5,)},
        ),
        Ns=(16,),
        times=(0.0,),
        Ms=(2, 8),
        trials=4,
    )
    pairs = []
    for tag, runner, cfg in (
        ("fr", run_fr_sweep, fr_cfg),
        ("rec", run_recovery_sweep, rec_cfg),
    ):
        paths = []
        for rep in ("a", "b"):
            p = tmp_path / f"{tag}_{rep}.csv"
            emit_csv(runner(cfg), p)
            paths.append(p)
        pairs.append(paths)
    for pa, pb in pairs:
        assert pa.read_bytes() == pb.read_bytes()
