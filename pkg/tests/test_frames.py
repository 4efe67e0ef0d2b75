import numpy as np
import pytest

from gabden.frames import (ConditioningError, GaborSection, biorthogonal_sum_field,
                           dual_frame_bound, dual_system, gram_matrix, project, riesz_bounds,
                           trace_identity_check, uniform_minimality_margin)
from gabden.pointset import Cube
from gabden.signal import inner_product, make_preset, norm_sq, translate_modulate
from gabden.stft import PhaseGrid, gaussian_stft

G = make_preset("gaussian")
NINE = [(i, j) for i in (-1, 0, 1) for j in (-1, 0, 1)]


def test_gram_matches_closed_form():
    pts = np.array([[0, 0], [1, 0], [0.5, -1.0]])
    gm = gram_matrix(GaborSection.from_points(G, pts))
    # <f_j, f_i> = V phi_j (lam_i, mu_i) for unit Gaussian atoms
    ref = np.array([[gaussian_stft(*pts[j], *pts[i]) for j in range(3)] for i in range(3)])
    np.testing.assert_allclose(gm.entries, ref, atol=1e-12)


def test_bounds_and_dual_bound():
    gm = gram_matrix(GaborSection.from_points(G, NINE))
    b = riesz_bounds(gm)
    assert 0 < b.lower <= 1 <= b.upper
    assert dual_frame_bound(gm) == pytest.approx(1 / b.lower)


def test_singular_gram_raises():
    sec = GaborSection([G, G * 2.0], [(0, 0.0, 0.0), (1, 0.0, 0.0)])
    with pytest.raises(ConditioningError):
        gram_matrix(sec).inverse()
    assert not uniform_minimality_margin(gram_matrix(sec)).minimal


def test_duplicate_atoms_rejected():
    with pytest.raises(ValueError):
        GaborSection.from_points(G, [(0, 0), (0, 0)])


def test_duals_are_biorthogonal():
    sec = GaborSection.from_points(G, NINE)
    duals = dual_system(sec)
    M = np.array([[inner_product(f, h) for h in duals] for f in sec.realized])
    np.testing.assert_allclose(M, np.eye(9), atol=1e-10)


def test_projection_is_idempotent_and_fixes_span():
    sec = GaborSection.from_points(G, NINE[:4])
    f = translate_modulate(G, 0.3, 0.2)
    p = project(sec, f)
    assert norm_sq(project(sec, p)) == pytest.approx(norm_sq(p), rel=1e-10)
    a = sec.realized[2]
    assert norm_sq(project(sec, a) + a * -1.0) < 1e-20


def test_minimality_distance_times_dual_norm():
    mm = uniform_minimality_margin(gram_matrix(GaborSection.from_points(G, NINE)))
    np.testing.assert_allclose(mm.distances * mm.dual_norms, 1.0)


@pytest.mark.parametrize("n", [1, 5])
def test_trace_identity_small(n):
    rep = trace_identity_check(GaborSection.from_points(G, NINE[:n]), Cube((0, 0), 7), 0.1)
    assert rep.passed, rep.measured


def test_biorthogonal_sum_in_unit_interval():
    sec = GaborSection.from_points(G, NINE[:4])
    rep = biorthogonal_sum_field(sec, dual_system(sec), PhaseGrid.square(3, 0.2))
    assert rep.passed, rep.measured
