"""Binary field/spectrum files, coefficient text files, samples CSV."""

import numpy as np
import pytest

from frsamp import (
    FamilySpec,
    GridField,
    SampleSet,
    TrigPolynomial,
    build_family,
    dft,
    discretize,
    observe,
    sample_uniform,
)
from frsamp.io import (
    load_field,
    load_poly,
    load_samples,
    load_spectrum,
    load_spfd,
    save_field,
    save_poly,
    save_samples,
    save_spectrum,
)


class TestFieldFiles:
    def test_roundtrip_all_dims(self, tmp_path):
        for N, d in [(8, 1), (8, 2), (4, 3)]:
            f = discretize(build_family(FamilySpec("random-trig", d=d, K=2, seed=N)), N)
            p = tmp_path / f"f{N}{d}.spfd"
            save_field(f, p)
            back = load_field(p)
            assert back.N == N and back.d == d
            assert np.array_equal(back.values, f.values)  # bitwise

    def test_spectrum_roundtrip(self, tmp_path):
        f = discretize(build_family(FamilySpec("random-trig", d=2, K=2, seed=0)), 8)
        s = dft(f)
        p = tmp_path / "s.spfd"
        save_spectrum(s, p)
        back = load_spectrum(p)
        assert np.array_equal(back.coeffs, s.coeffs)

    def test_kind_dispatch(self, tmp_path):
        f = GridField(N=2, d=1, values=np.array([1.0, 2.0]))
        p = tmp_path / "f.spfd"
        save_field(f, p)
        assert isinstance(load_spfd(p), GridField)
        with pytest.raises(ValueError, match="expected a spectrum"):
            load_spectrum(p)

    def test_header_validation(self, tmp_path):
        p = tmp_path / "bad.spfd"
        p.write_bytes(b"NOPE" + bytes(20))
        with pytest.raises(ValueError, match="bad magic"):
            load_spfd(p)
        p.write_bytes(b"SP")
        with pytest.raises(ValueError, match="truncated"):
            load_spfd(p)

    def test_version_and_size_checks(self, tmp_path):
        f = GridField(N=2, d=1, values=np.array([1.0, 2.0]))
        p = tmp_path / "f.spfd"
        save_field(f, p)
        raw = bytearray(p.read_bytes())
        raw[4] = 9  # version byte
        p.write_bytes(bytes(raw))
        with pytest.raises(ValueError, match="version"):
            load_spfd(p)
        save_field(f, p)
        p.write_bytes(p.read_bytes()[:-8])  # drop one value
        with pytest.raises(ValueError, match="expected 2 values"):
            load_spfd(p)

    def test_missing_file_is_oserror(self, tmp_path):
        with pytest.raises(OSError):
            load_spfd(tmp_path / "absent.spfd")


class TestPolyFiles:
    def test_exact_roundtrip(self, tmp_path):
        poly = build_family(FamilySpec("random-trig", d=2, K=2, seed=3))
        p = tmp_path / "p.sptp"
        save_poly(poly, p)
        back = load_poly(p)
        assert back.d == poly.d
        assert back.terms == poly.terms  # repr() of floats is lossless

    def test_file_shape(self, tmp_path):
        poly = TrigPolynomial(d=1, terms={(2,): 0.5 + 0.25j, (-2,): 0.5 - 0.25j})
        p = tmp_path / "p.sptp"
        save_poly(poly, p)
        lines = p.read_text().splitlines()
        assert lines[0] == "SPTP 1"
        assert lines[1] == "-2 0.5 -0.25"  # sorted by frequency
        assert lines[2] == "2 0.5 0.25"

    def test_header_errors(self, tmp_path):
        p = tmp_path / "p.sptp"
        p.write_text("WRONG 1\n")
        with pytest.raises(ValueError, match="SPTP header"):
            load_poly(p)
        p.write_text("SPTP x\n")
        with pytest.raises(ValueError, match="malformed"):
            load_poly(p)
        p.write_text("SPTP 2\n1 0.5 0.5\n")
        with pytest.raises(ValueError, match="columns"):
            load_poly(p)

    def test_loaded_symmetry_still_checked(self, tmp_path):
        p = tmp_path / "p.sptp"
        p.write_text("SPTP 1\n1 1.0 0.0\n")
        with pytest.raises(ValueError, match="conjugate"):
            load_poly(p)


class TestSampleFiles:
    def test_roundtrip(self, tmp_path):
        f = discretize(build_family(FamilySpec("random-trig", d=2, K=2, seed=1)), 8)
        s = observe(f, sample_uniform(8, 2, 12, seed=4), sigma=0.1, seed=5)
        p = tmp_path / "s.csv"
        save_samples(s, p)
        back = load_samples(p, N=8, tau=s.tau)
        assert np.array_equal(back.indices, s.indices)
        assert np.array_equal(back.values, s.values)
        assert back.tau == s.tau

    def test_csv_shape(self, tmp_path):
        s = SampleSet(N=4, d=2, indices=[1, 7], values=[0.5, -1.25])
        p = tmp_path / "s.csv"
        save_samples(s, p)
        assert p.read_text() == "x1,x2,value\n0,1,0.5\n1,3,-1.25\n"

    def test_header_errors(self, tmp_path):
        p = tmp_path / "s.csv"
        p.write_text("")
        with pytest.raises(ValueError, match="empty"):
            load_samples(p, N=4)
        p.write_text("x1,x2\n")
        with pytest.raises(ValueError, match="header"):
            load_samples(p, N=4)
        p.write_text("x1,value\n0,1.0\n2\n")
        with pytest.raises(ValueError, match="columns"):
            load_samples(p, N=4)
