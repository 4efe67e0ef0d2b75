# %% [markdown]
# # Gaussian-window STFT on a sampled grid
#
# The transform of the window itself has a closed form, so we start there,
# then look at how much of ``||g||^2`` lands in a finite phase-space box.

# %%
import numpy as np

from gabden.signal import TimeGrid, make_preset, norm_sq
from gabden.stft import PhaseGrid, gaussian_stft_modulus, stft_field, stft_values

g = make_preset("gaussian")
xs = np.linspace(-2, 2, 41)
V = stft_values(g, xs, xs)
print("max relative error vs closed form:",
      np.max(np.abs(np.abs(V) - gaussian_stft_modulus(xs[:, None], xs[None, :]))
             / gaussian_stft_modulus(xs[:, None], xs[None, :])))

# %% [markdown]
# Box mass for smooth and discontinuous generators. The indicator's transform
# decays only like ``1/|y|``, so the box ``[-8, 8]^2`` misses a visible slice.

# %%
grid = TimeGrid.cell_centered(12.0, 0.01)
for kind, params in [("gaussian", []), ("hermite", [1]), ("indicator", [1])]:
    f = make_preset(kind, params, grid)
    fld = stft_field(f, PhaseGrid.square(8, 0.05))
    print(f"{f.label:16s} box mass {fld.mass():.6f}  norm^2 {norm_sq(f):.6f}")

# %%
# tail of the indicator versus the box half-side
ind = make_preset("indicator", [1], grid)
for half in (4, 8, 11):
    fld = stft_field(ind, PhaseGrid.square(half, 0.05))
    print(half, 1 - fld.mass() / 2)
