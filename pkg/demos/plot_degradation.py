"""
Synthesizing low-resolution frames
==================================

Four observations of one high-resolution image, each shifted by half an HR
pixel in a different direction, blurred with a Gaussian PSF and decimated
by two.
"""

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from ibpsr import generate_lr_set, quarter_shift_models
from ibpsr.fixtures import scene

hr = scene(256)

# quarter_shift_models() gives shifts (0,0), (0.5,0), (0,0.5), (0.5,0.5) with
# sigma 1.0, radius 3, D = 2. A little noise makes the frames differ in more
# than geometry; every frame draws from its own seed.
models = quarter_shift_models(psf_sigma=1.0, noise_sigma=2.0, seed=100)
frames = generate_lr_set(hr, models)

fig, axes = plt.subplots(1, 5, figsize=(15, 3.4))
axes[0].imshow(hr.data, cmap="gray", vmin=0, vmax=255)
axes[0].set_title(f"HR {hr.width}x{hr.height}")
for ax, fr in zip(axes[1:], frames):
    ax.imshow(fr.image.data, cmap="gray", vmin=0, vmax=255)
    ax.set_title(f"shift {fr.model.shift}")
for ax in axes:
    ax.axis("off")
fig.tight_layout()
fig.savefig("degradation.png", dpi=100)
print([fr.image.shape for fr in frames])
