"""Iterative back-projection (IBP) reconstruction.

Each iteration simulates every observed frame from the current estimate,
spreads the observation error back onto the high-resolution grid and adds
the frame-averaged correction::

    f <- f + step / K * sum_k BP_k(g_k - A_k f)

where ``A_k`` is the forward model of frame ``k`` and ``BP_k`` is zero
insertion (scaled by D**2), inverse shift and a Gaussian back-projection
kernel.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .degrade import (DegradationModel, LrFrame, _blur_array, forward, gaussian_weights,
                      shift_image)
from .image import Image, NumericalError
from .interp import BICUBIC, resample

__all__ = [
    "IbpConfig",
    "IbpTrace",
    "simulate_lr",
    "back_project_error",
    "ibp_solve",
    "irani_peleg_sr",
]

log = logging.getLogger(__name__)

STOP_TOL = "tol"
STOP_MAX_ITERS = "max_iters"
STOP_DIVERGED = "diverged"

# consecutive growth steps of the aggregate error that trigger the guard
_DIVERGENCE_RUN = 5


@dataclass(frozen=True)
class IbpConfig:
    """Solver settings.

    Attributes
    ----------
    bp_sigma, bp_radius : float, int
        Gaussian back-projection kernel.
    step : float
        Relaxation factor on the frame-averaged correction.
    max_iters : int
        Upper bound on the number of error evaluations.
    tol : float
        Stop once the mean absolute LR error over all frames drops below this.
    clamp_each_iter : bool
        Clip the estimate to ``[0, peak]`` after every update.
    """

    bp_sigma: float = 1.0
    bp_radius: int = 3
    step: float = 1.0
    max_iters: int = 50
    tol: float = 1e-3
    clamp_each_iter: bool = False

    def __post_init__(self):
        if not self.bp_sigma > 0:
            raise ValueError(f"bp_sigma must be positive, got {self.bp_sigma}")
        gaussian_weights(self.bp_sigma, self.bp_radius)
        if self.max_iters < 0:
            raise ValueError(f"max_iters must be non-negative, got {self.max_iters}")
        if self.tol < 0:
            raise ValueError(f"tol must be non-negative, got {self.tol}")
        if not 0 < self.step <= 2:
            log.warning("IBP step %g outside the stable range (0, 2]", self.step)


@dataclass
class IbpTrace:
    """Per-iteration mean absolute LR errors.

    ``frame_errors[n][k]`` is the error of frame ``k`` measured at the start
    of iteration ``n`` (before its update); ``aggregate[n]`` is their mean.
    ``final_error`` is the aggregate error of the returned estimate.
    """

    frame_errors: list[list[float]] = field(default_factory=list)
    aggregate: list[float] = field(default_factory=list)
    stop_reason: str = STOP_MAX_ITERS
    final_error: float = math.nan

    @property
    def iterations_run(self) -> int:
        return len(self.aggregate)

    def to_csv(self) -> str:
        k = len(self.frame_errors[0]) if self.frame_errors else 0
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["iteration"] + [f"frame_{i}" for i in range(k)] + ["aggregate"])
        for n, (errs, agg) in enumerate(zip(self.frame_errors, self.aggregate)):
            w.writerow([n] + [repr(e) for e in errs] + [repr(agg)])
        return buf.getvalue()


def _hr_shape(lr_shape, factor):
    return (lr_shape[0] * factor, lr_shape[1] * factor)


def simulate_lr(estimate: Image, model: DegradationModel) -> Image:
    """Noise-free LR frame predicted from ``estimate`` under ``model``."""
    return forward(estimate, model)


def back_project_error(error_lr: Image, model: DegradationModel, config: IbpConfig,
                       hr_dims) -> Image:
    """Spread an LR error image onto the HR grid.

    ``hr_dims`` is ``(width, height)``. The error is zero-inserted and
    scaled by ``D**2``, shifted back by ``-model.shift`` and smoothed with
    the back-projection Gaussian.
    """
    d = model.decimation
    w, h = hr_dims
    if (error_lr.height * d, error_lr.width * d) != (h, w):
        raise ValueError(
            f"error image {error_lr.width}x{error_lr.height} with D={d} "
            f"does not match HR dims {w}x{h}")
    up = np.zeros((h, w))
    up[::d, ::d] = error_lr.data * (d * d)
    up = shift_image(error_lr.with_data(up), (-model.shift[0], -model.shift[1])).data
    return error_lr.with_data(_blur_array(up, gaussian_weights(config.bp_sigma, config.bp_radius)))


def ibp_solve(frames, init: Image, config: IbpConfig = IbpConfig()):
    """Run IBP from ``init`` against the observed ``frames``.

    Returns
    -------
    estimate : Image
        Final estimate, or the lowest-error estimate seen if the divergence
        guard fired.
    trace : IbpTrace
    """
    frames = list(frames)
    if not frames:
        raise ValueError("ibp_solve needs at least one frame")
    for fr in frames:
        d = fr.model.decimation
        if _hr_shape(fr.image.shape, d) != init.shape:
            raise ValueError(
                f"frame {fr.image.width}x{fr.image.height} with D={d} incompatible with "
                f"init {init.width}x{init.height}")

    trace = IbpTrace()
    f = init
    best, best_err = init, math.inf
    growth = 0
    hr_dims = (init.width, init.height)
    scale = config.step / len(frames)

    for _ in range(config.max_iters):
        errors, per_frame, agg = _residuals(frames, f)
        if not math.isfinite(agg):
            raise NumericalError("IBP error became non-finite")
        if trace.aggregate and agg > trace.aggregate[-1]:
            growth += 1
        else:
            growth = 0
        trace.frame_errors.append(per_frame)
        trace.aggregate.append(agg)
        if agg < best_err:
            best, best_err = f, agg
        if agg < config.tol:
            trace.stop_reason, trace.final_error = STOP_TOL, agg
            return f, trace
        if growth >= _DIVERGENCE_RUN:
            trace.stop_reason, trace.final_error = STOP_DIVERGED, best_err
            log.warning("IBP error grew for %d iterations; returning best estimate", growth)
            return best, trace

        correction = np.zeros(init.shape)
        for fr, e in zip(frames, errors):
            correction += back_project_error(fr.image.with_data(e), fr.model, config, hr_dims).data
        data = f.data + scale * correction
        if config.clamp_each_iter:
            data = np.clip(data, 0.0, f.peak)
        f = f.with_data(data)

    trace.stop_reason = STOP_MAX_ITERS
    trace.final_error = _residuals(frames, f)[2]
    return f, trace


def _residuals(frames, estimate: Image):
    errors = [fr.image.data - simulate_lr(estimate, fr.model).data for fr in frames]
    per_frame = [float(np.mean(np.abs(e))) for e in errors]
    return errors, per_frame, float(np.mean(per_frame))


def irani_peleg_sr(frames, target_dims, config: IbpConfig = IbpConfig(),
                   return_trace: bool = False):
    """Multi-frame IBP baseline on the native LR frames.

    The estimate starts from a bicubic enlargement of the first frame to
    ``target_dims = (width, height)``. With ``return_trace`` the solver
    trace is returned alongside the image.
    """
    frames = list(frames)
    if not frames:
        raise ValueError("irani_peleg_sr needs at least one frame")
    first = frames[0].image
    w, h = target_dims
    scale = w / first.width
    init = resample(first, scale, (0.0, 0.0), BICUBIC)
    if init.shape != (h, w):
        raise ValueError(f"cannot reach target {w}x{h} from frame {first.width}x{first.height}")
    out, trace = ibp_solve(frames, init, config)
    return (out, trace) if return_trace else out
