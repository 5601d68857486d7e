"""
Interpolation kernels and their spectra
=======================================

The three kernels used for enlargement, drawn side by side in space and in
frequency. The spectra are computed numerically from the spatial kernels.
"""

import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from ibpsr.interp import (BICUBIC, BILINEAR, NEAREST, KernelSpec, kernel_eval,
                          kernel_frequency_response)

# The kernels are plain functions of the offset x.
x = np.linspace(-2.5, 2.5, 1001)
kernels = [NEAREST, BILINEAR, BICUBIC, KernelSpec("bicubic", a=-0.75)]

fig, (ax_space, ax_freq) = plt.subplots(1, 2, figsize=(11, 4))
for spec in kernels:
    label = spec.kind if spec.kind != "bicubic" else f"bicubic a={spec.a}"
    ax_space.plot(x, kernel_eval(spec, x), label=label)
ax_space.set_title("h(x)")
ax_space.legend()

# H(w) = integral of h(x) cos(w x) dx; nearest and bilinear have closed forms
# sinc(w/2) and sinc(w/2)^2, plotted dashed for comparison.
w = np.linspace(0, 4 * np.pi, 400)
for spec in kernels:
    ax_freq.plot(w, [kernel_frequency_response(spec, wi, 2048) for wi in w])
ax_freq.plot(w, np.sinc(w / (2 * np.pi)), "k--", lw=0.8)
ax_freq.plot(w, np.sinc(w / (2 * np.pi)) ** 2, "k:", lw=0.8)
ax_freq.axvline(np.pi, color="grey", lw=0.5)
ax_freq.set_title("H(w)")
fig.tight_layout()
fig.savefig("kernels.png", dpi=120)
print("wrote kernels.png")
