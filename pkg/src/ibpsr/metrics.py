"""Full-reference quality metrics: PSNR and SSIM."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, fields

import numpy as np
from scipy import signal

from .image import Image

__all__ = ["psnr", "ssim", "ssim_map", "QualityReport", "reports_to_csv", "CSV_HEADER"]

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03


def _check_pair(reference: Image, test: Image) -> None:
    if reference.shape != test.shape:
        raise ValueError(f"shape mismatch: {reference.shape} vs {test.shape}")
    if reference.peak != test.peak:
        raise ValueError(f"peak mismatch: {reference.peak:g} vs {test.peak:g}")


def psnr(reference: Image, test: Image) -> float:
    """Peak signal-to-noise ratio in dB, using the images' declared peak.

    Returns ``math.inf`` for identical images.
    """
    _check_pair(reference, test)
    mse = float(np.mean((reference.data - test.data) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(reference.peak ** 2 / mse)


def _gaussian_window() -> np.ndarray:
    half = SSIM_WINDOW // 2
    k = np.arange(-half, half + 1, dtype=np.float64)
    g = np.exp(-(k ** 2) / (2 * SSIM_SIGMA ** 2))
    return g / g.sum()


def _filter_valid(x: np.ndarray, g: np.ndarray) -> np.ndarray:
    return signal.convolve2d(x, np.outer(g, g), mode="valid")


def ssim_map(reference: Image, test: Image) -> np.ndarray:
    """Local SSIM values for every 11x11 window lying fully inside the image."""
    _check_pair(reference, test)
    if min(reference.shape) < SSIM_WINDOW:
        raise ValueError(f"SSIM needs images of at least {SSIM_WINDOW}x{SSIM_WINDOW}, "
                         f"got {reference.width}x{reference.height}")
    c1 = (SSIM_K1 * reference.peak) ** 2
    c2 = (SSIM_K2 * reference.peak) ** 2
    g = _gaussian_window()
    x, y = reference.data, test.data
    mu_x, mu_y = _filter_valid(x, g), _filter_valid(y, g)
    sxx = _filter_valid(x * x, g) - mu_x * mu_x
    syy = _filter_valid(y * y, g) - mu_y * mu_y
    sxy = _filter_valid(x * y, g) - mu_x * mu_y
    num = (2 * mu_x * mu_y + c1) * (2 * sxy + c2)
    den = (mu_x * mu_x + mu_y * mu_y + c1) * (sxx + syy + c2)
    return num / den


def ssim(reference: Image, test: Image) -> float:
    """Mean structural similarity (Gaussian window 11x11, sigma 1.5)."""
    return float(np.mean(ssim_map(reference, test)))


@dataclass(frozen=True)
class QualityReport:
    image: str
    method: str
    psnr_db: float
    ssim: float
    runtime_ms: float
    config_digest: str

    def row(self) -> list[str]:
        p = "inf" if math.isinf(self.psnr_db) else f"{self.psnr_db:.6f}"
        return [self.image, self.method, p, f"{self.ssim:.6f}", f"{self.runtime_ms:.1f}",
                self.config_digest]


CSV_HEADER = [f.name for f in fields(QualityReport)]


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in reports:
        w.writerow(r.row())
    return buf.getvalue()
