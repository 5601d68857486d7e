"""
Comparing super-resolution methods
==================================

PSNR and SSIM of every registered method against the original image, for
noiseless frames and for frames with additive Gaussian noise.

Pass a PGM path to use your own 256x256 test image instead of the bundled
synthetic scene::

    python compare_methods.py lena.pgm
"""

import sys
import time

from ibpsr import METHODS, MethodSpec, generate_lr_set, load, quarter_shift_models, run_method
from ibpsr.fixtures import scene
from ibpsr.metrics import psnr, ssim

hr = load(sys.argv[1]) if len(sys.argv) > 1 else scene(256)

for noise in (0.0, 5.0):
    frames = generate_lr_set(hr, quarter_shift_models(noise_sigma=noise, seed=1))
    print(f"\nnoise sigma {noise:g}")
    print(f"{'method':<12} {'PSNR dB':>8} {'SSIM':>7} {'ms':>7}")
    for name in METHODS:
        t0 = time.perf_counter()
        out = run_method(MethodSpec(name), frames, 2).clamped()
        ms = 1e3 * (time.perf_counter() - t0)
        print(f"{name:<12} {psnr(hr, out):8.2f} {ssim(hr, out):7.4f} {ms:7.0f}")
