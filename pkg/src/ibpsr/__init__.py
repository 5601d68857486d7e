"""Multi-frame super-resolution by interpolation followed by iterative back-projection.

The building blocks are re-exported here; see the submodules for details:

- :mod:`ibpsr.image` -- grayscale image type and PGM/PPM I/O
- :mod:`ibpsr.interp` -- interpolation kernels and the separable resampler
- :mod:`ibpsr.degrade` -- forward acquisition model and LR frame synthesis
- :mod:`ibpsr.ibp` -- iterative back-projection solver
- :mod:`ibpsr.pipeline` -- SR methods and the method registry
- :mod:`ibpsr.metrics` -- PSNR and SSIM
"""

from .degrade import (DegradationModel, LrFrame, blur, decimate, forward, generate_lr_set,
                      quarter_shift_models, shift_image, zero_insert)
from .ibp import IbpConfig, IbpTrace, back_project_error, ibp_solve, irani_peleg_sr, simulate_lr
from .image import Image, NumericalError, PnmError, diff, load, read_pnm, save, write_pnm
from .interp import (BICUBIC, BILINEAR, NEAREST, KernelSpec, kernel_eval,
                     kernel_frequency_response, resample)
from .metrics import QualityReport, psnr, ssim
from .pipeline import METHODS, MethodSpec, estimate_shift, proposed_sr, run_method

__version__ = "0.1.0"
