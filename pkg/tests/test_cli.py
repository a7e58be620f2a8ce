"""Command-line entry points: outputs, exit codes, config plumbing."""

import math

import numpy as np
import pytest

from frsamp import FamilySpec, build_family, discretize, fourier_ratio, sample_budget
from frsamp.cli import main
from frsamp.io import load_field, load_samples, save_field, save_poly, save_samples
from frsamp.recovery import observe, sample_uniform

SPARSE_CFG = """\
family = modulated-wave
d = 1
K = 2
carrier = 5
envelope_band = 0
Ns = 16
times = 0.0
Ms = 2, 8
trials = 4
"""


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestFr:
    def test_fresh_family(self, capsys):
        code, out, _ = run(capsys, "fr", "--family", "random-trig", "--d", "2",
                           "--K", "8", "--seed", "7", "--N", "64")
        assert code == 0
        assert out.strip() == "FR=17.42211528"

    def test_from_file(self, capsys, tmp_path):
        f = discretize(build_family(FamilySpec("random-trig", d=1, K=3, seed=2)), 32)
        p = tmp_path / "f.spfd"
        save_field(f, p)
        code, out, _ = run(capsys, "fr", "--input", str(p))
        assert code == 0
        assert out.strip() == f"FR={fourier_ratio(f):.12g}"

    def test_bad_family_params_exit_2(self, capsys):
        code, _, err = run(capsys, "fr", "--family", "rough-spectrum", "--d", "2",
                           "--alpha", "0.5")
        assert code == 2
        assert "error:" in err


class TestSnapshot:
    def test_writes_field_and_reports_ratios(self, capsys, tmp_path):
        code, out, _ = run(
            capsys, "snapshot", "--family", "random-trig", "--d", "2", "--K", "4",
            "--seed", "1", "--pde", "heat", "--t", "0.05", "--N", "32",
            "--out-dir", str(tmp_path), "--out", "snap.spfd",
        )
        assert code == 0
        lines = dict(ln.split("=", 1) for ln in out.strip().splitlines())
        snap = load_field(tmp_path / "snap.spfd")
        assert float(lines["FR_gt"]) == pytest.approx(fourier_ratio(snap), rel=1e-10)
        assert float(lines["FR_gt"]) < float(lines["FR_g"])

    def test_from_coefficient_file(self, capsys, tmp_path):
        poly = build_family(FamilySpec("random-trig", d=2, K=3, seed=5))
        p = tmp_path / "p.sptp"
        save_poly(poly, p)
        code, out, _ = run(
            capsys, "snapshot", "--input", str(p), "--t", "0.01", "--N", "16",
            "--out-dir", str(tmp_path),
        )
        assert code == 0
        assert (tmp_path / "snapshot.spfd").exists()

    def test_wave_dimension_guard_exit_2(self, capsys, tmp_path):
        code, _, err = run(
            capsys, "snapshot", "--family", "random-trig", "--d", "2",
            "--pde", "wave", "--t", "0.1", "--out-dir", str(tmp_path),
        )
        assert code == 2
        assert "allow_any_dim" in err or "allow-any-dim" in err

    def test_wave_override_accepted(self, capsys, tmp_path):
        code, _, _ = run(
            capsys, "snapshot", "--family", "random-trig", "--d", "2", "--K", "2",
            "--pde", "wave", "--t", "0.1", "--N", "16", "--allow-any-dim",
            "--out-dir", str(tmp_path),
        )
        assert code == 0


class TestRecover:
    def make_samples(self, tmp_path, M=8, N=16):
        truth = discretize(
            build_family(
                FamilySpec("modulated-wave", d=1, K=2,
                           extras={"envelope_band": 0, "carrier": (5,)})
            ),
            N,
        )
        samples = observe(truth, sample_uniform(N, 1, M, seed=3), 0.0, seed=0)
        p = tmp_path / "s.csv"
        save_samples(samples, p)
        return truth, p

    def test_roundtrip_recovery(self, capsys, tmp_path):
        truth, p = self.make_samples(tmp_path)
        code, out, _ = run(
            capsys, "recover", "--samples", str(p), "--N", "16",
            "--out-dir", str(tmp_path), "--out", "est.spfd",
        )
        assert code == 0
        lines = dict(ln.split("=", 1) for ln in out.strip().splitlines())
        assert lines["converged"] == "true"
        est = load_field(tmp_path / "est.spfd")
        err = float(np.linalg.norm(est.values - truth.values))
        err /= float(np.linalg.norm(truth.values))
        assert err <= 1e-6

    def test_unconverged_exit_3(self, capsys, tmp_path):
        _, p = self.make_samples(tmp_path)
        code, out, _ = run(
            capsys, "recover", "--samples", str(p), "--N", "16",
            "--max-iters", "1", "--out-dir", str(tmp_path),
        )
        assert code == 3
        assert "converged=false" in out

    def test_missing_samples_exit_1(self, capsys, tmp_path):
        code, _, err = run(
            capsys, "recover", "--samples", str(tmp_path / "nope.csv"), "--N", "16",
        )
        assert code == 1
        assert "error:" in err


class TestSweep:
    def test_fr_outputs(self, capsys, tmp_path):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text("family = random-trig\nd = 2\nK = 8\nNs = 32\ntimes = 0.0, 0.05\n")
        code, out, _ = run(capsys, "sweep", "fr", "--config", str(cfg),
                           "--out-dir", str(tmp_path))
        assert code == 0
        assert "rows=2" in out
        assert (tmp_path / "fr_sweep.csv").read_text().startswith("# schema_version=1")
        assert (tmp_path / "fr_vs_t.svg").exists()
        assert (tmp_path / "fr_vs_N.svg").exists()

    def test_recovery_outputs_and_determinism(self, capsys, tmp_path):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text(SPARSE_CFG)
        a_dir, b_dir = tmp_path / "a", tmp_path / "b"
        code, out, _ = run(capsys, "sweep", "recovery", "--config", str(cfg),
                           "--out-dir", str(a_dir))
        assert code == 0
        assert "not_converged=0/8" in out
        code, _, _ = run(capsys, "sweep", "recovery", "--config", str(cfg),
                         "--out-dir", str(b_dir))
        assert code == 0
        assert (a_dir / "recovery_sweep.csv").read_bytes() == (
            b_dir / "recovery_sweep.csv"
        ).read_bytes()
        assert (a_dir / "success_vs_M.svg").read_bytes() == (
            b_dir / "success_vs_M.svg"
        ).read_bytes()
        assert (a_dir / "err_vs_M.svg").exists()

    def test_mostly_unconverged_exit_3(self, capsys, tmp_path):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text(SPARSE_CFG + "max_iters = 2\n")
        code, out, _ = run(capsys, "sweep", "recovery", "--config", str(cfg),
                           "--out-dir", str(tmp_path))
        assert code == 3
        assert "not_converged=8/8" in out

    def test_config_error_exit_2(self, capsys, tmp_path):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text("trials = -3\n")
        code, _, err = run(capsys, "sweep", "recovery", "--config", str(cfg),
                           "--out-dir", str(tmp_path))
        assert code == 2
        assert "error:" in err


class TestBudget:
    def test_one_shot_matches_library(self, capsys):
        code, out, _ = run(capsys, "budget", "--r", "2.5", "--eps", "0.1", "--D", "4096")
        assert code == 0
        assert out.strip() == f"M={sample_budget(2.5, 0.1, 4096.0)}"
        assert out.strip() == "M=4096"

    def test_one_shot_needs_all_three(self, capsys):
        code, _, err = run(capsys, "budget", "--r", "2.5")
        assert code == 2
        assert "needs" in err

    def test_study_reports_windows(self, capsys, tmp_path):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text(
            "family = random-trig\nd = 2\nK = 8\nNs = 32\n"
            "times = 0.0, 0.05, 0.1\neps = 0.45\nm0 = 2000\nlambda = 2.0\n"
        )
        code, out, _ = run(capsys, "budget", "--config", str(cfg),
                           "--out-dir", str(tmp_path))
        assert code == 0
        assert "N=32 window=" in out
        head = (tmp_path / "budget.csv").read_text().splitlines()
        assert head[1] == "N,t,r,M,m,in_window"


class TestMinimalBudget:
    def test_reports_m_star(self, capsys, tmp_path):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text(SPARSE_CFG)
        code, out, _ = run(capsys, "minimal-budget", "--config", str(cfg),
                           "--out-dir", str(tmp_path))
        assert code == 0
        assert "N=16 t=0 M_star=8" in out
        body = (tmp_path / "minimal_budget.csv").read_text().splitlines()
        assert body[1] == "N,t,M_star"
        assert body[2] == "16,0,8"

    def test_above_range_rendered(self, capsys, tmp_path):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text(SPARSE_CFG.replace("Ms = 2, 8", "Ms = 2, 4"))
        code, out, _ = run(capsys, "minimal-budget", "--config", str(cfg),
                           "--out-dir", str(tmp_path))
        assert code == 0
        assert "M_star=above range" in out
