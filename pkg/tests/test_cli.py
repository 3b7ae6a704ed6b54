import hashlib

import numpy as np
import pytest

from gctv.cli import EXIT_IO, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, main
from gctv.fieldio import read_csv, read_field, write_csv, write_field
from gctv.fields import ScalarField


def sha(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


class TestSynthCommand:
    def test_writes_readable_field(self, tmp_path):
        out = tmp_path / "cone.csv"
        assert main(["synth", "cone", "--size", "64", "64", "--out", str(out)]) == EXIT_OK
        f = read_csv(out)
        assert f.shape == (64, 64)
        # bit-exact round trip through the same writer
        twice = tmp_path / "cone2.csv"
        write_csv(twice, f)
        assert sha(out) == sha(twice)

    def test_stripes_pattern(self, tmp_path):
        out = tmp_path / "s.csv"
        code = main(["synth", "stripes", "--size", "16", "16", "--width", "2", "--gap", "3",
                     "--out", str(out)])
        assert code == EXIT_OK
        f = read_csv(out)
        expected = np.tile([1.0, 1.0, 0.0, 0.0, 0.0], 4)[:16]
        assert np.array_equal(f.data[0], expected)

    def test_invalid_kind_is_usage_error(self, tmp_path, capsys):
        code = main(["synth", "torus", "--size", "16", "16", "--out", str(tmp_path / "t.csv")])
        assert code == EXIT_USAGE

    def test_bad_geometry_is_usage_error(self, tmp_path):
        code = main(["synth", "cone", "--size", "16", "16", "--radius", "-5",
                     "--out", str(tmp_path / "t.csv")])
        assert code == EXIT_USAGE


class TestAddNoiseCommand:
    def test_sigma_zero_bit_exact(self, tmp_path):
        src = tmp_path / "in.csv"
        rng = np.random.default_rng(0)
        write_csv(src, ScalarField(rng.random((16, 16))))
        out = tmp_path / "out.csv"
        assert main(["add-noise", str(src), "--sigma", "0", "--out", str(out)]) == EXIT_OK
        assert sha(src) == sha(out)

    def test_seed_reproducible_hash(self, tmp_path):
        src = tmp_path / "in.csv"
        write_csv(src, ScalarField(np.zeros((32, 32))))
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["add-noise", str(src), "--sigma", "0.01", "--seed", "5", "--out", str(a)])
        main(["add-noise", str(src), "--sigma", "0.01", "--seed", "5", "--out", str(b)])
        assert sha(a) == sha(b)

    def test_reported_std(self, tmp_path, capsys):
        src = tmp_path / "in.csv"
        write_csv(src, ScalarField(np.zeros((64, 64))))
        main(["add-noise", str(src), "--sigma", "0.01", "--seed", "1",
              "--out", str(tmp_path / "n.csv")])
        text = capsys.readouterr().out
        std = float(text.split("sample std")[1].strip(" )\n"))
        assert abs(std - 0.1) < 0.01

    def test_missing_input_is_io_error(self, tmp_path):
        code = main(["add-noise", str(tmp_path / "nope.csv"), "--sigma", "0.01",
                     "--out", str(tmp_path / "o.csv")])
        assert code == EXIT_IO


class TestDenoiseCommand:
    def test_constant_input_round_trip(self, tmp_path, capsys):
        src = tmp_path / "c.csv"
        write_csv(src, ScalarField(np.full((16, 16), 0.5)))
        out = tmp_path / "u.csv"
        hist = tmp_path / "h.csv"
        code = main(["denoise", str(src), "--out", str(out), "--history", str(hist)])
        assert code == EXIT_OK
        result = read_csv(out)
        assert np.abs(result.data - 0.5).max() <= 1e-10
        text = capsys.readouterr().out
        assert "status: converged" in text
        iterations = int(text.split("iterations:")[1].split()[0])
        assert iterations <= 2
        rows = hist.read_text().strip().splitlines()
        assert rows[0] == "n,energy,relative_error,p_inner_iters,H_inner_iters"
        assert len(rows) - 1 == iterations

    def test_preset_and_reference_metrics(self, tmp_path, capsys):
        import gctv

        clean = gctv.synth("plateau", 32, 32, height=0.8)
        noisy = gctv.add_gaussian_noise(clean, gctv.NoiseSpec(sigma=0.01, seed=3))
        ref, src = tmp_path / "ref.csv", tmp_path / "in.csv"
        write_csv(ref, clean)
        write_csv(src, noisy)
        out = tmp_path / "out.csv"
        code = main(["denoise", str(src), "--preset", "image", "--out", str(out),
                     "--reference", str(ref)])
        assert code == EXIT_OK
        text = capsys.readouterr().out
        assert "input vs reference" in text and "output vs reference" in text
        psnr_in = float(text.split("input vs reference: PSNR")[1].split()[0])
        psnr_out = float(text.split("output vs reference: PSNR")[1].split()[0])
        assert psnr_out > psnr_in

    def test_surface_preset_history_reaches_tolerance(self, tmp_path):
        import gctv

        clean = gctv.cone(64, 64, height=0.5)
        write_csv(tmp_path / "clean.csv", clean)
        main(["add-noise", str(tmp_path / "clean.csv"), "--sigma", "1e-4", "--seed", "123",
              "--out", str(tmp_path / "noisy.csv")])
        hist = tmp_path / "hist.csv"
        code = main(["denoise", str(tmp_path / "noisy.csv"), "--preset", "surface",
                     "--out", str(tmp_path / "u.csv"), "--history", str(hist)])
        assert code == EXIT_OK
        rows = hist.read_text().strip().splitlines()
        final_relerr = float(rows[-1].split(",")[2])
        assert final_relerr <= 1e-5

    def test_deterministic_output_bytes(self, tmp_path):
        import gctv

        noisy = gctv.add_gaussian_noise(gctv.synth("cone", 16, 16),
                                        gctv.NoiseSpec(sigma=0.001, seed=9))
        src = tmp_path / "in.csv"
        write_csv(src, noisy)
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["--tau", "0.05", "--max-iter", "40"]
        main(["denoise", str(src), "--out", str(a), *args])
        main(["denoise", str(src), "--out", str(b), *args])
        assert sha(a) == sha(b)

    def test_config_file_and_flag_override(self, tmp_path, capsys):
        src = tmp_path / "in.csv"
        write_csv(src, ScalarField(np.full((16, 16), 0.25)))
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# settings\npreset=image\nmax_iter=7\ntol=1e9\n")
        out = tmp_path / "o.csv"
        code = main(["denoise", str(src), "--config", str(cfg), "--tol", "1e-5",
                     "--out", str(out)])
        assert code == EXIT_OK
        text = capsys.readouterr().out
        # flag overrides config tol=1e9; constant input still converges at once
        assert "status: converged" in text

    def test_bad_config_key_is_usage_error(self, tmp_path):
        src = tmp_path / "in.csv"
        write_csv(src, ScalarField(np.zeros((16, 16))))
        cfg = tmp_path / "run.cfg"
        cfg.write_text("bogus_key=1\n")
        code = main(["denoise", str(src), "--config", str(cfg), "--out", str(tmp_path / "o.csv")])
        assert code == EXIT_USAGE

    def test_tv_baseline_requires_positive_alpha(self, tmp_path):
        src = tmp_path / "in.csv"
        write_csv(src, ScalarField(np.zeros((16, 16))))
        code = main(["denoise", str(src), "--tv-baseline", "--alpha", "0",
                     "--out", str(tmp_path / "o.csv")])
        assert code == EXIT_USAGE

    def test_numerical_abort_exit_code(self, tmp_path):
        src = tmp_path / "in.csv"
        data = np.zeros((8, 8))
        data[0, 0] = np.nan
        np.savetxt(src, data, delimiter=",")
        code = main(["denoise", str(src), "--out", str(tmp_path / "o.csv")])
        assert code == EXIT_NUMERIC

    def test_threads_validation(self, tmp_path):
        src = tmp_path / "in.csv"
        write_csv(src, ScalarField(np.zeros((16, 16))))
        code = main(["denoise", str(src), "--threads", "0", "--out", str(tmp_path / "o.csv")])
        assert code == EXIT_USAGE


class TestMetricsCommand:
    def test_identical_fields(self, tmp_path, capsys):
        a = tmp_path / "a.csv"
        rng = np.random.default_rng(1)
        write_csv(a, ScalarField(rng.random((16, 16))))
        assert main(["metrics", str(a), str(a)]) == EXIT_OK
        text = capsys.readouterr().out
        assert "PSNR inf" in text
        assert "SSIM 1" in text
        assert "L1 0" in text

    def test_noisy_unit_image_reports_near_20db(self, tmp_path, capsys):
        import gctv

        clean = gctv.plateau(64, 64, height=0.9)
        noisy = gctv.add_gaussian_noise(clean, gctv.NoiseSpec(sigma=0.01, seed=2))
        a, b = tmp_path / "clean.csv", tmp_path / "noisy.csv"
        write_csv(a, clean)
        write_csv(b, noisy)
        assert main(["metrics", str(a), str(b)]) == EXIT_OK
        psnr_value = float(capsys.readouterr().out.split("PSNR")[1].split()[0])
        assert 19.5 < psnr_value < 20.5

    def test_dimension_mismatch_error(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        write_csv(a, ScalarField(np.zeros((16, 16))))
        write_csv(b, ScalarField(np.zeros((16, 17))))
        assert main(["metrics", str(a), str(b)]) == EXIT_USAGE

    def test_missing_file(self, tmp_path):
        a = tmp_path / "a.csv"
        write_csv(a, ScalarField(np.zeros((16, 16))))
        assert main(["metrics", str(a), str(tmp_path / "missing.csv")]) == EXIT_IO


class TestUsage:
    def test_no_command(self):
        assert main([]) == EXIT_USAGE

    def test_help_exits_ok(self):
        assert main(["--help"]) == EXIT_OK

    def test_pgm_output(self, tmp_path):
        out = tmp_path / "p.pgm"
        assert main(["synth", "plateau", "--size", "16", "16", "--out", str(out)]) == EXIT_OK
        f = read_field(out)
        assert f.shape == (16, 16)
