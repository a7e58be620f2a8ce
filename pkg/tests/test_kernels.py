"""Counter-based random streams and the numba/numpy kernel pair."""

import math
import subprocess
import sys

import numpy as np
import pytest

from frsamp import backend
from frsamp import rng
from frsamp._kernels import (
    _gaussian_lattice_sum_np,
    _lattice_power_sum_np,
    _primal_update_np,
    _soft_threshold_np,
    gaussian_lattice_sum_kernel,
    lattice_power_sum_kernel,
    primal_update,
    soft_threshold,
)


class TestStreams:
    def test_generator_deterministic(self):
        a = rng.make_generator(42, rng.STREAM_FAMILY).standard_normal(5)
        b = rng.make_generator(42, rng.STREAM_FAMILY).standard_normal(5)
        assert np.array_equal(a, b)

    def test_streams_independent(self):
        fam = rng.make_generator(42, rng.STREAM_FAMILY).standard_normal(5)
        smp = rng.make_generator(42, rng.STREAM_SAMPLE).standard_normal(5)
        noi = rng.make_generator(42, rng.STREAM_NOISE).standard_normal(5)
        assert not np.array_equal(fam, smp)
        assert not np.array_equal(smp, noi)

    def test_split_deterministic_and_distinct(self):
        seeds = [rng.split(7, i) for i in range(100)]
        assert seeds == [rng.split(7, i) for i in range(100)]
        assert len(set(seeds)) == 100
        assert all(0 <= s < 2**63 for s in seeds)

    def test_split_differs_by_master(self):
        assert rng.split(1, 0) != rng.split(2, 0)


class TestKernelPairs:
    """Both backends must agree to rounding; the active one is under test."""

    def test_lattice_power_sum(self):
        for n, d, p in [(8, 1, 2.0), (8, 2, 2.0), (8, 2, 3.5), (8, 3, 4.0), (16, 3, 2.0)]:
            a = lattice_power_sum_kernel(n, d, p)
            b = _lattice_power_sum_np(n, d, p)
            assert a == pytest.approx(b, rel=1e-13)

    def test_gaussian_lattice_sum(self):
        for n, d, a in [(8, 1, 0.3), (8, 2, 0.3), (16, 3, 1.0)]:
            x = gaussian_lattice_sum_kernel(n, d, a)
            y = _gaussian_lattice_sum_np(n, d, a)
            assert x == pytest.approx(y, rel=1e-13)

    def test_soft_threshold_formula(self):
        z = np.array([3 + 4j, 0.5j, 0.0, -2.0], dtype=complex)
        out = soft_threshold(z, 1.0)
        want = np.array([(3 + 4j) * (4 / 5), 0.0, 0.0, -1.0])
        assert np.allclose(out, want, atol=1e-15)
        assert np.allclose(out, _soft_threshold_np(z, 1.0), atol=1e-15)

    def test_soft_threshold_random_agreement(self):
        gen = np.random.default_rng(0)
        z = gen.standard_normal(257) + 1j * gen.standard_normal(257)
        for t in (0.0, 0.1, 2.0):
            assert np.allclose(soft_threshold(z, t), _soft_threshold_np(z, t), atol=1e-14)

    def test_primal_update_relations(self):
        gen = np.random.default_rng(1)
        z = gen.standard_normal(64) + 1j * gen.standard_normal(64)
        g = gen.standard_normal(64) + 1j * gen.standard_normal(64)
        step = 0.7
        z_new, z_bar, dz2, zn2 = primal_update(z, g, step)
        assert np.allclose(z_new, soft_threshold(z - step * g, step), atol=1e-14)
        assert np.allclose(z_bar, 2 * z_new - z, atol=1e-14)
        assert dz2 == pytest.approx(float(np.real(np.vdot(z_new - z, z_new - z))), rel=1e-12)
        assert zn2 == pytest.approx(float(np.real(np.vdot(z_new, z_new))), rel=1e-12)
        ref = _primal_update_np(z, g, step)
        assert np.allclose(z_new, ref[0], atol=1e-14)

    def test_preserves_hermitian_symmetry(self):
        # conjugate-symmetric input stays conjugate-symmetric through the prox
        gen = np.random.default_rng(2)
        n = 16
        z = gen.standard_normal(n) + 1j * gen.standard_normal(n)
        z = z + np.conj(z[(-np.arange(n)) % n])
        out = soft_threshold(z, 0.4)
        assert np.allclose(out, np.conj(out[(-np.arange(n)) % n]), atol=1e-14)


class TestBackendSelection:
    def test_backend_reports_a_known_name(self):
        assert backend() in ("numba", "numpy")

    def test_env_flag_forces_numpy(self):
        code = "import frsamp; print(frsamp.backend())"
        out = subprocess.run(
            [sys.executable, "-c", code],
            capture_output=True,
            text=True,
            env={"PATH": "/usr/bin:/bin", "FRSAMP_NO_NUMBA": "1"},
        )
        assert out.stdout.strip() == "numpy"

    def test_backends_match_through_public_api(self):
        from frsamp import gaussian_lattice_sum, lattice_power_sum

        code = (
            "from frsamp import lattice_power_sum, gaussian_lattice_sum;"
            "print(repr(lattice_power_sum(16, 2, 2.0)));"
            "print(repr(gaussian_lattice_sum(16, 2, 0.5)))"
        )
        out = subprocess.run(
            [sys.executable, "-c", code],
            capture_output=True,
            text=True,
            env={"PATH": "/usr/bin:/bin", "FRSAMP_NO_NUMBA": "1"},
        )
        line1, line2 = out.stdout.strip().splitlines()
        assert float(line1) == pytest.approx(lattice_power_sum(16, 2, 2.0), rel=1e-13)
        assert float(line2) == pytest.approx(gaussian_lattice_sum(16, 2, 0.5), rel=1e-13)
