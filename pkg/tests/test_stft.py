import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gabden.signal import make_preset
from gabden.stft import (PhaseGrid, check_covariance, gaussian_stft, gaussian_stft_modulus,
                         stft_field, stft_point, stft_scattered, weighted_field_norm_sq,
                         weighted_transfer_bound)

G = make_preset("gaussian")


def test_point_matches_closed_form():
    for p in [(0, 0), (0.5, -0.3), (-1.2, 1.1)]:
        assert stft_point(G, p) == pytest.approx(complex(gaussian_stft(0, 0, *p)), abs=1e-12)


def test_shifted_atom_closed_form():
    from gabden.signal import translate_modulate
    s = translate_modulate(G, 0.7, -0.4)
    pts = np.array([[0.1, 0.2], [1.5, -0.9], [0.7, -0.4]])
    np.testing.assert_allclose(stft_scattered(s, pts), gaussian_stft(0.7, -0.4, pts[:, 0], pts[:, 1]),
                               atol=1e-12)


def test_field_mass_equals_norm():
    fld = stft_field(make_preset("hermite", [3]), PhaseGrid.square(8, 0.1))
    assert fld.mass() == pytest.approx(1.0, rel=1e-6)


def test_mass_in_cube_partial_cells():
    fld = stft_field(G, PhaseGrid.square(8, 0.1))
    full = fld.mass_in_cube((0, 0), 100)
    assert full == pytest.approx(fld.mass())
    # closed form: erf(a) * erf(pi b) for |V phi|^2 on [-a, a] x [-b, b]
    from scipy.special import erf
    assert fld.mass_in_cube((0, 0), 1.0) == pytest.approx(erf(1) * erf(np.pi), rel=1e-3)


def test_weighted_norm_below_transfer_bound():
    fld = stft_field(G, PhaseGrid.square(8, 0.1))
    for alpha in (1.0, 2.0):
        assert weighted_field_norm_sq(fld, alpha) <= weighted_transfer_bound(G, alpha)


def test_weighted_norm_warns_on_small_box():
    fld = stft_field(G, PhaseGrid.square(2, 0.1))
    with pytest.warns(RuntimeWarning):
        weighted_field_norm_sq(fld, 3.0)


@settings(max_examples=20, deadline=None)
@given(lam=st.floats(-2, 2), mu=st.floats(-2, 2))
def test_covariance_property(lam, mu):
    rng = np.random.default_rng(0)
    pts = rng.uniform(-3, 3, size=(20, 2))
    rep = check_covariance(make_preset("hermite", [1]), (lam, mu), pts)
    assert rep.passed, rep.measured


def test_modulus_symmetry():
    x, y = np.meshgrid(np.linspace(-2, 2, 9), np.linspace(-1, 1, 9))
    assert np.allclose(np.abs(gaussian_stft(0, 0, x, y)), gaussian_stft_modulus(x, y))
