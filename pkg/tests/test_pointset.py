import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gabden.pointset import (BOUNDARY_TOL, Cube, Lattice2D, PointFamily, PointSet,
                             angular_sector_family, count_in_cube, density_profile,
                             extremal_counts, lattice_points, rho_alpha, separation_constant)

from oracles import brute_force_counts


def test_lattice_window_and_counts():
    ps = lattice_points(Lattice2D.rectangular(1, 1), Cube((0, 0), 5))
    assert len(ps) == 121
    assert count_in_cube(ps, Cube((0, 0), 1)) == 9
    assert count_in_cube(ps, Cube((0.5, 0.5), 0.4)) == 0
    ext = extremal_counts(ps, 0.5, Cube((0, 0), 1))
    assert (ext.min, ext.max) == (1, 4)


def test_closed_cube_boundary():
    assert Cube((0, 0), 1).contains(np.array([[1 + BOUNDARY_TOL / 2, -1.0]]))[0]


def test_duplicate_points_rejected():
    with pytest.raises(ValueError):
        PointSet([[0, 0], [0, 0]])
    with pytest.raises(ValueError):
        PointSet([[0, 0], [0.5, 0]], declared_separation=1.0)


def test_lattice_min_distance_reduces_basis():
    lat = Lattice2D((1, 0), (5, 1))
    assert lat.min_distance() == pytest.approx(1.0)
    assert lat.density == pytest.approx(1.0)


def test_sector_family_covers_punctured_lattice():
    fam = angular_sector_family(4, Cube((0, 0), 3))
    assert sum(len(m) for m in fam.members) == 48
    assert isinstance(fam, PointFamily)


def test_density_profile_normalization():
    ps = lattice_points(Lattice2D.rectangular(0.5, 0.5), Cube((0, 0), 12))
    rep = density_profile(ps, [1, 2, 4], Cube((0, 0), 0.5))
    assert rep.normalized_min == [4.0, 4.0, 4.0]
    assert all(rep.window_ok)


def test_rho_alpha():
    assert rho_alpha(4, 1) == pytest.approx(4)
    assert rho_alpha(4, 2) == pytest.approx(np.log(4))
    assert rho_alpha(4, 3) == 1
    with pytest.raises(ValueError):
        rho_alpha(1, 2)


def test_separation_constant():
    assert separation_constant(PointSet([[0, 0], [3, 4]])) == pytest.approx(5)
    assert separation_constant(PointSet([[0, 0]])) == np.inf


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1), n=st.integers(1, 60), R=st.sampled_from([0.5, 1.0, 2.0]))
def test_sweep_matches_brute_force(seed, n, R):
    rng = np.random.default_rng(seed)
    pts = np.unique(np.round(rng.uniform(-3, 3, size=(n, 2)), 2), axis=0)
    region = Cube((0, 0), 1)
    ext = extremal_counts(PointSet(pts), R, region)
    assert (ext.max, ext.min) == brute_force_counts(pts, R, region)
