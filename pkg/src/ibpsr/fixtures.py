"""Synthetic test images that ship with the package.

All generators return 8-bit-range :class:`~ibpsr.image.Image` objects and
are fully deterministic.
"""

from __future__ import annotations

import numpy as np

from .degrade import splitmix64
from .image import Image

__all__ = ["gradient", "checkerboard", "blobs", "scene", "FIXTURES"]


def _grid(size):
    y, x = np.mgrid[0:size, 0:size].astype(np.float64)
    return y, x


def gradient(size: int = 256) -> Image:
    """Diagonal linear ramp from 0 to 255."""
    y, x = _grid(size)
    return Image(255.0 * (x + y) / (2 * (size - 1)))


def checkerboard(size: int = 256, cell: int = 16, low: float = 32.0, high: float = 224.0) -> Image:
    y, x = _grid(size)
    mask = ((y // cell) + (x // cell)) % 2 == 0
    return Image(np.where(mask, high, low))


def blobs(size: int = 256, count: int = 24, seed: int = 7) -> Image:
    """Sum of isotropic Gaussian blobs at pseudo-random positions."""
    y, x = _grid(size)
    u = (splitmix64(seed, 4 * count) >> np.uint64(11)).astype(np.float64) * 2.0 ** -53
    cy, cx, rad, amp = u.reshape(4, count)
    out = np.full((size, size), 40.0)
    for i in range(count):
        r = 4.0 + rad[i] * size / 10
        out += (60.0 + 120.0 * amp[i]) * np.exp(
            -((y - cy[i] * size) ** 2 + (x - cx[i] * size) ** 2) / (2 * r * r))
    return Image(np.clip(out, 0.0, 255.0))


def scene(size: int = 256) -> Image:
    """Mixed-content image: smooth shading, hard-edged shapes and a chirp.

    Meant as a stand-in for a natural photograph in tests that need edges
    and texture at several scales.
    """
    y, x = _grid(size)
    s = size / 256.0
    img = 70.0 + 60.0 * (x / size) + blobs(size, 12, seed=3).data * 0.35
    disc = (y - 80 * s) ** 2 + (x - 90 * s) ** 2 < (45 * s) ** 2
    img = np.where(disc, 210.0, img)
    square = (np.abs(y - 170 * s) < 40 * s) & (np.abs(x - 175 * s) < 40 * s)
    img = np.where(square, 25.0, img)
    # radial chirp patch in the lower-left quadrant
    r2 = ((y - 190 * s) ** 2 + (x - 60 * s) ** 2) / (s * s)
    patch = r2 < 45.0 ** 2
    img = np.where(patch, 128.0 + 90.0 * np.cos(r2 / 90.0), img)
    stripes = (np.abs(y - 30 * s) < 14 * s) & (x > 150 * s)
    img = np.where(stripes, 128.0 + 100.0 * np.sign(np.sin(np.pi * x / (3 * s))), img)
    return Image(np.clip(img, 0.0, 255.0))


FIXTURES = {
    "gradient": gradient,
    "checkerboard": checkerboard,
    "blobs": blobs,
    "scene": scene,
}
