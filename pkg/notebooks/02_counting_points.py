# %% [markdown]
# # Extremal counts in translated cubes
#
# ``extremal_counts`` finds the largest and smallest number of points in a
# closed cube of half-side ``R`` whose center ranges over a search region.
# For lattices one fundamental domain of centers is enough.

# %%
import numpy as np

from gabden.pointset import (Cube, Lattice2D, PointSet, angular_sector_family, density_profile,
                             extremal_counts, lattice_points)

lat = Lattice2D.rectangular(0.5, 0.5)
ps = lattice_points(lat, Cube((0, 0), 14))
rep = density_profile(ps, [1, 2, 4, 8], Cube((0, 0), 0.5))
for row in rep.rows():
    print("R={:g} max={} min={} norm_max={:.4f} norm_min={:.4f}".format(*row))
print("lattice density:", lat.density)

# %% [markdown]
# A family of shifted angular sectors of the integer lattice. Each member is
# sparse far from the origin but the summed counts still see density 1.

# %%
fam = angular_sector_family(4, Cube((0, 0), 12))
rep = density_profile(fam, [1, 2, 4], Cube((0, 0), 1))
print(rep.normalized_max, rep.normalized_min)

# %%
rng = np.random.default_rng(0)
pts = rng.uniform(-6, 6, size=(150, 2))
print(extremal_counts(PointSet(pts), 1.0, Cube((0, 0), 2)))
