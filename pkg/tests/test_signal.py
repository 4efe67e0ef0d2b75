import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gabden.signal import (DEFAULT_GRID, GridMismatchError, ResolutionError, TimeGrid,
                           TruncationError, fourier_transform, hermite_function, inner_product,
                           make_preset, norm_sq, translate_modulate, weighted_norm_sq, zeros)

CELL = TimeGrid.cell_centered(12.0, 0.01)


def test_grid_nodes_symmetric():
    t = DEFAULT_GRID.nodes
    assert t[0] == -12.0 and abs(t[-1] - 12.0) < 1e-12
    assert DEFAULT_GRID.count == 2401


def test_gaussian_unit_norm():
    assert abs(norm_sq(make_preset("gaussian")) - 1) < 1e-14


def test_hermite_functions_orthonormal():
    t = DEFAULT_GRID.nodes
    H = np.array([hermite_function(k, t) for k in range(6)])
    gram = H @ H.T * DEFAULT_GRID.step
    np.testing.assert_allclose(gram, np.eye(6), atol=1e-12)


def test_indicator_exact_on_cell_centered_grid():
    ind = make_preset("indicator", [1], CELL)
    assert norm_sq(ind) == pytest.approx(2.0, abs=1e-12)
    assert weighted_norm_sq(ind, 1.0) == pytest.approx(1.0, abs=1e-10)


def test_weighted_norm_of_gaussian():
    # int t^2 phi^2 = 1/4
    assert weighted_norm_sq(make_preset("gaussian"), 2.0) == pytest.approx(0.25, abs=1e-12)


def test_fourier_transform_of_gaussian_is_gaussian():
    g = make_preset("gaussian")
    gh = fourier_transform(g)
    w = gh.t
    expected = (2 * np.pi) ** 0.25 * np.exp(-np.pi ** 2 * w ** 2)
    assert np.max(np.abs(gh.values - expected)) < 1e-10
    assert norm_sq(gh) == pytest.approx(1.0, abs=1e-12)


def test_overlap_of_shifted_gaussians():
    g = make_preset("gaussian")
    ip = inner_product(translate_modulate(g, 1, 1), g)
    assert abs(ip) == pytest.approx(np.exp(-0.5 - np.pi ** 2 / 2), rel=1e-10)


def test_translate_modulate_closed_form():
    g = make_preset("gaussian")
    s = translate_modulate(g, 0.37, -1.3)
    t = g.t
    ref = np.exp(2j * np.pi * -1.3 * t) * (2 / np.pi) ** 0.25 * np.exp(-(t - 0.37) ** 2)
    assert np.max(np.abs(s.values - ref)) < 1e-14


def test_errors():
    with pytest.raises(ValueError):
        make_preset("sawtooth")
    with pytest.raises(ResolutionError):
        make_preset("gaussian", [], TimeGrid(12, 0.5))
    with pytest.raises(ResolutionError):
        make_preset("indicator", [20])
    with pytest.raises(TruncationError):
        translate_modulate(make_preset("gaussian"), 11.5, 0)
    with pytest.raises(GridMismatchError):
        make_preset("gaussian") + zeros(TimeGrid(10, 0.01))


@settings(max_examples=30, deadline=None)
@given(a=st.floats(-3, 3), b=st.floats(-5, 5))
def test_time_frequency_shift_is_isometric(a, b):
    g = make_preset("hermite", [2])
    assert norm_sq(translate_modulate(g, a, b)) == pytest.approx(1.0, abs=1e-10)
