"""Super-resolution methods and the registry used by benchmarks.

The proposed method enlarges every low-resolution frame with bicubic
interpolation and then fuses the enlarged frames with IBP on the
high-resolution grid (decimation 1, original sub-pixel shifts and PSF).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .degrade import LrFrame, shift_image
from .ibp import IbpConfig, ibp_solve, irani_peleg_sr
from .image import Image
from .interp import BICUBIC, KernelSpec, resample, resample_matrix

__all__ = [
    "METHODS",
    "MethodSpec",
    "proposed_sr",
    "interpolated_frames",
    "run_method",
    "estimate_shift",
]

METHODS = ("nearest", "bilinear", "bicubic", "irani-peleg", "proposed")
_INTERPOLATORS = ("nearest", "bilinear", "bicubic")


def _canonical(name: str) -> str:
    return name.replace("_", "-")


@dataclass(frozen=True)
class MethodSpec:
    """Which method to run and with what settings.

    ``kernel`` is only read by the interpolation methods; ``ibp`` only by
    ``irani-peleg`` and ``proposed``. For interpolation methods the kernel
    kind follows the method name.
    """

    name: str
    kernel: KernelSpec = BICUBIC
    ibp: IbpConfig = field(default_factory=IbpConfig)

    def __post_init__(self):
        name = _canonical(self.name)
        if name not in METHODS:
            raise ValueError(f"unknown method {self.name!r}; valid methods: {', '.join(METHODS)}")
        object.__setattr__(self, "name", name)
        if name in _INTERPOLATORS and self.kernel.kind != name:
            object.__setattr__(self, "kernel", KernelSpec(name, self.kernel.a))


def _check_same_dims(frames) -> None:
    shapes = {fr.image.shape for fr in frames}
    if len(shapes) != 1:
        raise ValueError(f"frames have mixed dimensions: {sorted(shapes)}")


def interpolated_frames(frames, scale: int) -> list[LrFrame]:
    """Bicubic-enlarge each frame and attach its HR-grid model (D = 1)."""
    return [LrFrame(resample(fr.image, scale, (0.0, 0.0), BICUBIC),
                    fr.model.replace(decimation=1, noise_sigma=0.0))
            for fr in frames]


def _unshifted_mean(frames) -> Image:
    acc = np.zeros(frames[0].image.shape)
    for fr in frames:
        dx, dy = fr.model.shift
        acc += shift_image(fr.image, (-dx, -dy)).data
    return frames[0].image.with_data(acc / len(frames))


def proposed_sr(frames, scale: int, config: IbpConfig = IbpConfig(), init: str = "mean",
                return_trace: bool = False):
    """Interpolate every frame, then fuse the results with IBP.

    Parameters
    ----------
    frames : list of LrFrame
        Observed frames with their acquisition models.
    scale : int
        Enlargement factor (>= 2).
    config : IbpConfig
        Solver settings.
    init : {"mean", "first"}
        Starting estimate: the shift-compensated mean of the enlarged
        frames, or the first enlarged frame alone.
    return_trace : bool
        Also return the :class:`IbpTrace`.
    """
    frames = list(frames)
    if not frames:
        raise ValueError("proposed_sr needs at least one frame")
    if int(scale) != scale or scale < 2:
        raise ValueError(f"scale must be an integer >= 2, got {scale}")
    _check_same_dims(frames)
    hr_frames = interpolated_frames(frames, int(scale))
    if init == "mean":
        start = _unshifted_mean(hr_frames)
    elif init == "first":
        start = hr_frames[0].image
    else:
        raise ValueError(f"init must be 'mean' or 'first', got {init!r}")
    out, trace = ibp_solve(hr_frames, start, config)
    return (out, trace) if return_trace else out


def run_method(spec: MethodSpec, frames, scale: int, return_trace: bool = False):
    """Dispatch ``spec`` on ``frames``.

    Interpolation methods use only the first frame. With ``return_trace``
    an ``(image, trace)`` pair is returned, where ``trace`` is ``None`` for
    the interpolation methods.
    """
    frames = list(frames)
    if not frames:
        raise ValueError("no frames given")
    first = frames[0].image
    if spec.name in _INTERPOLATORS:
        out, trace = resample(first, scale, (0.0, 0.0), spec.kernel), None
    elif spec.name == "irani-peleg":
        dims = (first.width * scale, first.height * scale)
        out, trace = irani_peleg_sr(frames, dims, spec.ibp, return_trace=True)
    else:
        out, trace = proposed_sr(frames, scale, spec.ibp, return_trace=True)
    return (out, trace) if return_trace else out


def estimate_shift(ref: Image, moved: Image, search_radius: float = 1.0,
                   grid_step: float = 0.25) -> tuple[float, float]:
    """Exhaustive sub-pixel search for the translation of ``moved`` against ``ref``.

    Every candidate ``(dx, dy)`` on the grid ``-r, -r + step, ..., r`` is
    applied to ``ref`` with the bicubic shifter and scored by mean squared
    difference to ``moved`` over an interior window. Ties go to the
    candidate with the smaller norm, then to the lexicographically smaller
    ``(dx, dy)``.
    """
    if ref.shape != moved.shape:
        raise ValueError(f"shape mismatch: {ref.shape} vs {moved.shape}")
    if not 0 < grid_step <= 1:
        raise ValueError(f"grid_step must be in (0, 1], got {grid_step}")
    if not 0 <= search_radius <= 3:
        raise ValueError(f"search_radius must be in [0, 3], got {search_radius}")
    n = int(round(search_radius / grid_step))
    offsets = [k * grid_step for k in range(-n, n + 1)]
    margin = int(np.ceil(search_radius)) + 2
    h, w = ref.shape
    if h <= 2 * margin or w <= 2 * margin:
        raise ValueError(f"image {w}x{h} too small for search radius {search_radius}")
    inner = (slice(margin, h - margin), slice(margin, w - margin))
    target = moved.data[inner]
    row_ops = {d: resample_matrix(h, h, 1.0, d, BICUBIC)[inner[0]] for d in offsets}
    col_ops = {d: resample_matrix(w, w, 1.0, d, BICUBIC)[inner[1]] for d in offsets}

    best_key, best = None, (0.0, 0.0)
    for dy, dx in itertools.product(offsets, offsets):
        cand = row_ops[dy] @ ref.data @ col_ops[dx].T
        key = (float(np.mean((cand - target) ** 2)), dx * dx + dy * dy, dx, dy)
        if best_key is None or key < best_key:
            best_key, best = key, (dx, dy)
    return best
