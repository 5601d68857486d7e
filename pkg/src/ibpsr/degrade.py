"""Forward acquisition model: shift, Gaussian blur, decimation, noise.

An observed low-resolution frame is produced from a high-resolution image
``f`` as ``g = decimate(blur(shift(f))) + noise``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import ndimage

from .image import Image
from .interp import BICUBIC, resample

__all__ = [
    "DegradationModel",
    "LrFrame",
    "gaussian_weights",
    "blur",
    "decimate",
    "zero_insert",
    "splitmix64",
    "gaussian_noise",
    "shift_image",
    "forward",
    "generate_lr_set",
    "quarter_shift_models",
]


@dataclass(frozen=True)
class DegradationModel:
    """Acquisition parameters of one low-resolution frame.

    ``psf_sigma`` and ``shift`` are in high-resolution pixels, ``shift`` is
    ``(dx, dy)``; ``noise_sigma`` is in intensity units.
    """

    psf_sigma: float = 1.0
    psf_radius: int = 3
    shift: tuple[float, float] = (0.0, 0.0)
    decimation: int = 2
    noise_sigma: float = 0.0
    noise_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "shift", (float(self.shift[0]), float(self.shift[1])))
        if not self.psf_sigma > 0:
            raise ValueError(f"psf_sigma must be positive, got {self.psf_sigma}")
        _check_radius(self.psf_sigma, self.psf_radius)
        if int(self.decimation) != self.decimation or self.decimation < 1:
            raise ValueError(f"decimation must be an integer >= 1, got {self.decimation}")
        if not self.noise_sigma >= 0:
            raise ValueError(f"noise_sigma must be non-negative, got {self.noise_sigma}")

    def noiseless(self) -> "DegradationModel":
        return self.replace(noise_sigma=0.0)

    def replace(self, **changes) -> "DegradationModel":
        return replace(self, **changes)


@dataclass(frozen=True)
class LrFrame:
    image: Image
    model: DegradationModel = field(default_factory=DegradationModel)


def _check_radius(sigma: float, radius: int) -> None:
    if radius < math.ceil(3 * sigma):
        raise ValueError(
            f"psf_radius {radius} too small for sigma {sigma}; need >= {math.ceil(3 * sigma)}")


def gaussian_weights(sigma: float, radius: int) -> np.ndarray:
    """Normalized 1-D Gaussian taps on ``[-radius, radius]``."""
    _check_radius(sigma, radius)
    k = np.arange(-radius, radius + 1, dtype=np.float64)
    w = np.exp(-0.5 * (k / sigma) ** 2)
    return w / w.sum()


def _blur_array(data: np.ndarray, weights: np.ndarray) -> np.ndarray:
    out = ndimage.correlate1d(data, weights, axis=0, mode="nearest")
    return ndimage.correlate1d(out, weights, axis=1, mode="nearest")


def blur(img: Image, psf_sigma: float, psf_radius: int) -> Image:
    """Separable Gaussian blur with edge replication."""
    return img.with_data(_blur_array(img.data, gaussian_weights(psf_sigma, psf_radius)))


def _check_divisible(shape, factor: int) -> None:
    h, w = shape
    if factor < 1 or h % factor or w % factor:
        raise ValueError(f"decimation factor {factor} does not divide image dims {w}x{h}")


def decimate(img: Image, factor: int) -> Image:
    """Keep every ``factor``-th pixel, starting at (0, 0)."""
    _check_divisible(img.shape, factor)
    return img.with_data(img.data[::factor, ::factor])


def zero_insert(img: Image, factor: int) -> Image:
    """Adjoint of :func:`decimate`: place samples on a zero HR grid."""
    out = np.zeros((img.height * factor, img.width * factor))
    out[::factor, ::factor] = img.data
    return img.with_data(out)


# -- noise -------------------------------------------------------------------

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)


def splitmix64(seed: int, n: int) -> np.ndarray:
    """First ``n`` outputs of the SplitMix64 generator seeded with ``seed``.

    Output ``j`` (0-based) is ``mix(seed + (j + 1) * 0x9E3779B97F4A7C15)``
    modulo 2**64, with the standard Stafford variant-13 finalizer.
    """
    with np.errstate(over="ignore"):
        z = np.uint64(seed % 2**64) + (np.arange(1, n + 1, dtype=np.uint64) * _GOLDEN)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))


def gaussian_noise(seed: int, n: int) -> np.ndarray:
    """``n`` standard normal deviates, reproducible from ``seed``.

    Uniforms are ``(x >> 11) * 2**-53`` from :func:`splitmix64`; consecutive
    pairs ``(u1, u2)`` become ``r cos(2 pi u2)``, ``r sin(2 pi u2)`` with
    ``r = sqrt(-2 log(1 - u1))`` (Box-Muller).
    """
    pairs = (n + 1) // 2
    u = (splitmix64(seed, 2 * pairs) >> np.uint64(11)).astype(np.float64) * 2.0 ** -53
    r = np.sqrt(-2.0 * np.log1p(-u[0::2]))
    theta = 2.0 * np.pi * u[1::2]
    z = np.empty(2 * pairs)
    z[0::2] = r * np.cos(theta)
    z[1::2] = r * np.sin(theta)
    return z[:n]


# -- forward model -----------------------------------------------------------

def shift_image(img: Image, shift) -> Image:
    return resample(img, 1.0, shift, BICUBIC)


def forward(hr: Image, model: DegradationModel) -> Image:
    """Noise-free part of the acquisition: shift, blur, decimate."""
    _check_divisible(hr.shape, model.decimation)
    out = blur(shift_image(hr, model.shift), model.psf_sigma, model.psf_radius)
    return decimate(out, model.decimation)


def generate_lr_set(hr: Image, models) -> list[LrFrame]:
    """Synthesize one observed frame per model.

    Deterministic: noise for each frame is drawn from its own
    ``noise_seed``, filling the frame in row-major order.
    """
    models = list(models)
    if not models:
        raise ValueError("at least one degradation model is required")
    frames = []
    for m in models:
        g = forward(hr, m)
        if m.noise_sigma > 0:
            noise = gaussian_noise(m.noise_seed, g.data.size).reshape(g.shape)
            g = g.with_data(g.data + m.noise_sigma * noise)
        frames.append(LrFrame(g, m))
    return frames


def quarter_shift_models(psf_sigma: float = 1.0, psf_radius: int = 3, decimation: int = 2,
                         noise_sigma: float = 0.0, seed: int = 0) -> list[DegradationModel]:
    """The four half-pixel (HR units) shifted models used for D = 2 benchmarks."""
    shifts = [(0.0, 0.0), (0.5, 0.0), (0.0, 0.5), (0.5, 0.5)]
    return [DegradationModel(psf_sigma, psf_radius, s, decimation, noise_sigma, seed + k)
            for k, s in enumerate(shifts)]
