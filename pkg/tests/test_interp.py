import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from ibpsr.image import Image, const
from ibpsr.interp import (BICUBIC, BILINEAR, NEAREST, KernelSpec, _resampling_weights,
                          kernel_eval, kernel_frequency_response, resample, resample_matrix)

KERNELS = [NEAREST, BILINEAR, BICUBIC, KernelSpec("bicubic", -0.75)]
OFFSETS = np.linspace(0.0, 1.0, 1000, endpoint=False)


def brute_force_resample(img, scale, shift, spec):
    """Direct 2-D summation over a padded index range, clamping indices."""
    h, w = img.shape
    oh, ow = int(math.floor(h * scale + 0.5)), int(math.floor(w * scale + 0.5))
    dx, dy = shift

    def weight(t):
        if spec.kind == "nearest":
            # round-half-up tie: the tap at floor(x + 0.5) gets everything
            return 1.0 if -0.5 <= t < 0.5 else 0.0
        return float(kernel_eval(spec, t))

    out = np.zeros((oh, ow))
    for r in range(oh):
        y = r / scale - dy
        for c in range(ow):
            x = c / scale - dx
            acc = 0.0
            for i in range(-6, h + 6):
                wy = weight(y - i)
                if wy == 0.0:
                    continue
                for j in range(-6, w + 6):
                    wx = weight(x - j)
                    if wx:
                        acc += wy * wx * img.data[min(max(i, 0), h - 1), min(max(j, 0), w - 1)]
            out[r, c] = acc
    return out


def test_kernel_examples():
    assert kernel_eval(NEAREST, 0.3) == 1.0
    assert kernel_eval(NEAREST, 0.7) == 0.0
    assert kernel_eval(NEAREST, 0.5) == 0.0
    assert kernel_eval(BILINEAR, 0.25) == 0.75
    assert kernel_eval(BICUBIC, 0.0) == 1.0
    assert kernel_eval(BICUBIC, 1.0) == 0.0
    assert kernel_eval(BICUBIC, 2.0) == 0.0
    a = -0.5
    assert kernel_eval(BICUBIC, 0.5) == pytest.approx((a + 2) / 8 - (a + 3) / 4 + 1, abs=1e-15)
    assert kernel_eval(BICUBIC, 0.5) == pytest.approx(0.5625, abs=1e-15)


@pytest.mark.parametrize("spec", KERNELS, ids=lambda s: f"{s.kind}{s.a}")
def test_kernel_structure(spec):
    xs = np.concatenate([OFFSETS, OFFSETS + 1, OFFSETS + 2, [2.5, 7.0]])
    np.testing.assert_array_equal(kernel_eval(spec, xs), kernel_eval(spec, -xs))
    assert kernel_eval(spec, 0.0) == 1.0
    for k in range(1, 4):
        assert kernel_eval(spec, k) == 0.0
    beyond = np.linspace(spec.radius, spec.radius + 3, 50)
    assert not np.any(kernel_eval(spec, beyond))


@pytest.mark.parametrize("spec", KERNELS, ids=lambda s: f"{s.kind}{s.a}")
def test_partition_of_unity(spec):
    taps = np.arange(-3, 4)
    sums = _resampling_weights(spec, OFFSETS[:, None] - taps[None, :]).sum(axis=1)
    np.testing.assert_allclose(sums, 1.0, rtol=0, atol=1e-12)


def test_nearest_tie_only_in_resampler():
    # Eq.-style half-open kernel is 0 at |x| = 0.5; the resampler takes the left tap
    assert kernel_eval(NEAREST, -0.5) == 0.0
    assert _resampling_weights(NEAREST, np.array([-0.5, 0.5])).tolist() == [1.0, 0.0]


@given(st.floats(-10, 10, allow_nan=False))
def test_symmetry_property(x):
    for spec in KERNELS:
        assert kernel_eval(spec, x) == kernel_eval(spec, -x)


@pytest.mark.parametrize("spec", KERNELS, ids=lambda s: s.kind)
def test_identity_resample(spec, rng):
    img = Image(rng.uniform(0, 255, (7, 9)))
    out = resample(img, 1.0, (0.0, 0.0), spec)
    np.testing.assert_allclose(out.data, img.data, rtol=0, atol=1e-12)
    # the matrix route, bypassing the shortcut, is the identity as well
    np.testing.assert_allclose(resample_matrix(9, 9, 1.0, 0.0, spec), np.eye(9), atol=1e-12)


@pytest.mark.parametrize("spec", KERNELS, ids=lambda s: s.kind)
@pytest.mark.parametrize("scale, shift", [(2, (0, 0)), (1, (0.3, -0.7)), (1.5, (0.25, 0.5)),
                                          (0.5, (0, 0))])
def test_constant_preserved(spec, scale, shift):
    out = resample(const(42.0, (6, 8)), scale, shift, spec)
    np.testing.assert_allclose(out.data, 42.0, rtol=0, atol=1e-12)


def test_bilinear_two_column_example():
    img = Image([[0.0, 100.0], [0.0, 100.0]])
    out = resample(img, 2, (0, 0), BILINEAR)
    oracle = brute_force_resample(img, 2, (0, 0), BILINEAR)
    np.testing.assert_allclose(out.data, oracle, atol=1e-12)
    assert out.shape == (4, 4)
    assert np.all((out.data >= 0) & (out.data <= 100))
    np.testing.assert_allclose(out.data[:, 1], 50.0)


@pytest.mark.parametrize("spec", KERNELS, ids=lambda s: s.kind)
@pytest.mark.parametrize("scale, shift", [(2, (0.0, 0.0)), (1, (0.37, -0.61)),
                                          (2, (0.5, 0.25)), (1.5, (-1.2, 0.8)), (0.75, (0, 0))])
def test_separable_matches_brute_force(spec, scale, shift, rng):
    img = Image(rng.uniform(0, 255, (8, 8)))
    out = resample(img, scale, shift, spec)
    np.testing.assert_allclose(out.data, brute_force_resample(img, scale, shift, spec),
                               rtol=0, atol=1e-9)


def test_output_size_and_errors():
    img = const(1.0, (5, 3))
    assert resample(img, 2.0).shape == (10, 6)
    assert resample(img, 1.5).shape == (8, 5)  # round half up: 7.5 -> 8, 4.5 -> 5
    with pytest.raises(ValueError):
        resample(img, 0.0)
    with pytest.raises(ValueError, match="degenerate"):
        resample(img, 0.05)
    with pytest.raises(ValueError):
        KernelSpec("lanczos")


W_GRID = np.linspace(-8 * np.pi, 8 * np.pi, 161)


def test_frequency_response_nearest_bilinear():
    for w in W_GRID:
        half = np.sinc(w / (2 * np.pi))  # sin(w/2) / (w/2)
        assert kernel_frequency_response(NEAREST, w, 4096) == pytest.approx(half, abs=1e-6)
        assert kernel_frequency_response(BILINEAR, w, 4096) == pytest.approx(half ** 2, abs=1e-6)


@pytest.mark.parametrize("spec", KERNELS, ids=lambda s: s.kind)
def test_frequency_response_dc(spec):
    assert kernel_frequency_response(spec, 0.0, 1024) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("w", [0.3, 1.0, np.pi, 5.0, 12.0, 8 * np.pi])
def test_frequency_response_bicubic_against_adaptive_quadrature(w):
    def piece(lo, hi):
        return integrate.quad(lambda x: kernel_eval(BICUBIC, x) * np.cos(w * x), lo, hi,
                              epsabs=1e-13, epsrel=1e-13)[0]
    oracle = 2 * (piece(0, 1) + piece(1, 2))
    assert kernel_frequency_response(BICUBIC, w, 4096) == pytest.approx(oracle, abs=1e-8)


def test_frequency_response_needs_dense_sampling():
    with pytest.raises(ValueError):
        kernel_frequency_response(BICUBIC, 1.0, 100)
