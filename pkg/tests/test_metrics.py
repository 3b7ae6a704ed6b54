import math

import numpy as np
import pytest

from conftest import rand_field
from gctv.fields import ScalarField
from gctv.metrics import LpErrors, NoiseSpec, SsimParams, add_gaussian_noise, lp_errors, psnr, ssim


class TestNoise:
    def test_sigma_zero_is_identity(self):
        rng = np.random.default_rng(0)
        f = rand_field(rng, 16, 16)
        out = add_gaussian_noise(f, NoiseSpec(sigma=0.0, seed=3))
        assert np.array_equal(out.data, f.data)

    def test_same_seed_bitwise_reproducible(self):
        rng = np.random.default_rng(1)
        f = rand_field(rng, 32, 32)
        a = add_gaussian_noise(f, NoiseSpec(sigma=0.01, seed=99))
        b = add_gaussian_noise(f, NoiseSpec(sigma=0.01, seed=99))
        assert np.array_equal(a.data, b.data)

    def test_different_seeds_differ(self):
        rng = np.random.default_rng(2)
        f = rand_field(rng, 16, 16)
        a = add_gaussian_noise(f, NoiseSpec(sigma=0.01, seed=1))
        b = add_gaussian_noise(f, NoiseSpec(sigma=0.01, seed=2))
        assert not np.array_equal(a.data, b.data)

    def test_sample_variance_matches_spec(self):
        f = ScalarField(np.zeros((256, 256)))
        out = add_gaussian_noise(f, NoiseSpec(sigma=0.01, seed=7))
        var = out.data.var()
        assert abs(var - 0.01) < 0.0005

    def test_sample_mean_near_zero(self):
        f = ScalarField(np.zeros((256, 256)))
        out = add_gaussian_noise(f, NoiseSpec(sigma=0.01, seed=11))
        assert abs(out.data.mean()) < 0.001

    def test_negative_sigma_rejected(self):
        with pytest.raises(ValueError):
            NoiseSpec(sigma=-0.1)


class TestPsnr:
    def test_identical_fields_give_infinity(self):
        rng = np.random.default_rng(3)
        f = rand_field(rng, 8, 8)
        assert psnr(f, f) == math.inf

    def test_known_mse(self):
        ref = ScalarField(np.zeros((10, 10)))
        u = ScalarField(np.full((10, 10), 0.1))  # MSE = 0.01
        assert psnr(u, ref, peak=1.0) == pytest.approx(20.0)

    def test_symmetry(self):
        rng = np.random.default_rng(4)
        a, b = rand_field(rng, 8, 8), rand_field(rng, 8, 8)
        assert psnr(a, b) == pytest.approx(psnr(b, a))

    def test_strictly_decreasing_in_mse(self):
        rng = np.random.default_rng(5)
        ref = rand_field(rng, 16, 16)
        noise = rng.standard_normal((16, 16))
        values = [psnr(ref.like(ref.data + s * noise), ref) for s in (0.01, 0.02, 0.05, 0.1)]
        assert all(x > y for x, y in zip(values, values[1:]))

    def test_validation(self):
        rng = np.random.default_rng(6)
        with pytest.raises(ValueError):
            psnr(rand_field(rng, 8, 8), rand_field(rng, 8, 9))
        with pytest.raises(ValueError):
            psnr(rand_field(rng, 8, 8), rand_field(rng, 8, 8), peak=0.0)

    def test_unit_range_image_at_variance_0p01_sits_near_20db(self):
        import gctv

        img = gctv.plateau(64, 64, height=0.9)
        noisy = add_gaussian_noise(img, NoiseSpec(sigma=0.01, seed=17))
        assert 19.5 < psnr(noisy, img, peak=1.0) < 20.5


class TestSsim:
    def test_identical_fields_give_one(self):
        rng = np.random.default_rng(7)
        f = rand_field(rng, 16, 16)
        assert ssim(f, f) == pytest.approx(1.0)

    def test_constant_offset_penalized(self):
        rng = np.random.default_rng(8)
        f = rand_field(rng, 16, 16, scale=0.2)
        assert ssim(f.like(f.data + 5.0), f) < 1.0

    def test_symmetry(self):
        rng = np.random.default_rng(9)
        a, b = rand_field(rng, 16, 16), rand_field(rng, 16, 16)
        assert ssim(a, b) == pytest.approx(ssim(b, a), rel=1e-12)

    def test_range_on_random_pairs(self):
        rng = np.random.default_rng(10)
        for _ in range(50):
            a, b = rand_field(rng, 12, 12), rand_field(rng, 12, 12)
            v = ssim(a, b)
            assert -1.0 <= v <= 1.0

    def test_window_validation(self):
        with pytest.raises(ValueError):
            SsimParams(window=4)
        with pytest.raises(ValueError):
            SsimParams(window=1)
        with pytest.raises(ValueError):
            SsimParams(k1=0.0)
        rng = np.random.default_rng(11)
        small = rand_field(rng, 8, 8)
        with pytest.raises(ValueError):
            ssim(small, small)  # default 11-pixel window does not fit

    def test_noise_lowers_ssim(self):
        import gctv

        clean = gctv.plateau(32, 32, height=0.8)
        noisy = add_gaussian_noise(clean, NoiseSpec(sigma=0.01, seed=13))
        assert ssim(noisy, clean) < 1.0


class TestLpErrors:
    def test_identical_fields(self):
        rng = np.random.default_rng(12)
        f = rand_field(rng, 8, 8)
        assert lp_errors(f, f) == LpErrors(0.0, 0.0, 0.0)

    def test_single_pixel_difference(self):
        ref = ScalarField(np.zeros((8, 8)))
        data = np.zeros((8, 8))
        data[2, 5] = -0.75
        e = lp_errors(ScalarField(data), ref)
        assert e.l1 == e.linf == 0.75
        assert e.l2 == pytest.approx(0.75)

    def test_norm_ordering(self):
        rng = np.random.default_rng(13)
        for _ in range(200):
            a, b = rand_field(rng, 6, 7), rand_field(rng, 6, 7)
            e = lp_errors(a, b)
            assert e.linf <= e.l2 + 1e-12
            assert e.l2 <= e.l1 + 1e-12

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            lp_errors(ScalarField(np.zeros((4, 4))), ScalarField(np.zeros((4, 5))))
