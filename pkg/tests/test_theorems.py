import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import erf

from gabden.pointset import Cube, Lattice2D, PointSet, lattice_points
from gabden.signal import TimeGrid, make_preset
from gabden.stft import PhaseGrid, gaussian_stft, stft_field
from gabden.theorems import (CaseSpec, commutation_phase, covering_inequality_check,
                             effective_delta, err2_bound_check, error_integral, hap_radius,
                             lattice_dual_generator, point_estimate_constant,
                             point_estimate_ratio, shifted_dual_biorthogonality, tail_radius,
                             verify_density_theorem, verify_uniform_minimality_density)

G = make_preset("gaussian")
FIELD = stft_field(G, PhaseGrid.square(8, 0.1))


def gaussian_error_oracle(R):
    """I_G(R) for |G|^2 = exp(-u^2 - pi^2 v^2) by separable 1D quadrature."""
    ell = lambda u: min(max(2 * R + 0.25 - abs(u), 0.0), 2 * R)
    fu = lambda u: math.exp(-u * u)
    fv = lambda v: math.exp(-math.pi ** 2 * v * v)
    brk = [-2 * R - 0.25, -0.25, 0.25, 2 * R + 0.25]
    mu = quad(fu, -40, 40)[0]
    mv = quad(fv, -40, 40)[0]
    lu = quad(lambda u: fu(u) * ell(u), -40, 40, points=brk, limit=200)[0]
    lv = quad(lambda v: fv(v) * ell(v), -40, 40, points=brk, limit=200)[0]
    return (2 * R) ** 2 * mu * mv - lu * lv


@pytest.mark.parametrize("R", [0.5, 1, 2, 4])
def test_error_integral_matches_oracle(R):
    assert error_integral(FIELD, R) == pytest.approx(gaussian_error_oracle(R), rel=5e-3)


def test_error_integral_brute_force_four_dimensional():
    # direct nested sum over centers in Q(1) and points outside Q(1.25)
    R, h = 1.0, 0.125
    c = np.arange(-R + h / 2, R, h)
    s = np.arange(-6 + h / 2, 6, h)
    X, Y = np.meshgrid(c, c, indexing="ij")
    S, T = np.meshgrid(s, s, indexing="ij")
    outside = (np.abs(S) > R + 0.25) | (np.abs(T) > R + 0.25)
    total = 0.0
    for x, y in zip(X.ravel(), Y.ravel()):
        g2 = np.abs(gaussian_stft(0, 0, S - x, T - y)) ** 2
        total += g2[outside].sum()
    total *= h ** 4
    assert error_integral(FIELD, R) == pytest.approx(total, rel=0.02)


def test_error_integral_warns_when_box_too_small():
    small = stft_field(G, PhaseGrid.square(1.5, 0.1))
    with pytest.warns(RuntimeWarning):
        error_integral(small, 1.0)


def test_point_estimate_oracle_and_monotone():
    r = point_estimate_ratio(lambda x, y: gaussian_stft(0, 0, x, y), (0, 0), 1.0)
    assert r == pytest.approx(1 / (erf(1) * erf(np.pi)), rel=1e-10)
    vals = [point_estimate_constant(d, 100, seed=5) for d in (0.1, 0.25, 0.5, 1.0)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    assert point_estimate_constant(0.25, 100, seed=5) == vals[1]


def test_point_estimate_requires_trials():
    with pytest.raises(ValueError):
        point_estimate_constant(0.25, 10)


def test_effective_delta():
    assert effective_delta(2.0) == 0.25
    assert effective_delta(0.5) == pytest.approx(0.5 / (2 * np.sqrt(2)))


def test_covering_inequality_on_integer_lattice():
    ps = lattice_points(Lattice2D.rectangular(1, 1), Cube((0, 0), 8))
    c = point_estimate_constant(effective_delta(1.0), 200, seed=0)
    rng = np.random.default_rng(1)
    rep = covering_inequality_check(ps, FIELD, Cube((0, 0), 2), 2 * c, rng.uniform(-2, 2, (30, 2)))
    assert rep.passed, rep.measured


def test_density_theorem_riesz_case_passes():
    case = CaseSpec([{"kind": "gaussian"}], Lattice2D.rectangular(2, 2), [1, 2, 4], "riesz_sequence")
    rep = verify_density_theorem(case)
    assert rep.passed and rep.status == "pass"
    assert rep.constants["C"] > 0


def test_density_theorem_duplicate_points_is_hypothesis_failure():
    case = CaseSpec([{"kind": "gaussian"}], np.array([[0, 0], [0, 0], [1, 1]]), [1], "riesz_sequence")
    rep = verify_density_theorem(case)
    assert rep.status == "hypothesis_failure"


def test_density_theorem_is_deterministic():
    case = CaseSpec([{"kind": "gaussian"}], Lattice2D.rectangular(1, 1), [1, 2], "riesz_sequence",
                    seed=11)
    assert verify_density_theorem(case).to_json() == verify_density_theorem(case).to_json()


def test_family_counts_sum_over_members():
    case = CaseSpec([{"kind": "gaussian"}] * 2,
                    [Lattice2D.rectangular(2, 2), PointSet([[1.0, 1.0], [5.0, 5.0]])],
                    [1, 2], "riesz_sequence", section_radius=2)
    rep = verify_density_theorem(case)
    assert rep.measured["sup_count"][0] >= 4


def test_uniform_minimality_case():
    case = CaseSpec([{"kind": "gaussian"}], Lattice2D.rectangular(1, 1), [1, 2, 4],
                    "uniformly_minimal", section_radius=2)
    rep = verify_uniform_minimality_density(case, [0.01, 0.05])
    assert rep.passed
    bs = [e["b"] for e in rep.measured["per_epsilon"]]
    assert bs[0] >= bs[1]
    with pytest.raises(ValueError):
        verify_uniform_minimality_density(case, [1.0])


def test_tail_radius_gaussian():
    # tail of |V phi|^2 outside Q(b) is 1 - erf(b) erf(pi b)
    b = tail_radius(FIELD, 1.0, 0.1)
    assert 1 - erf(b) * erf(np.pi * b) == pytest.approx(0.01, rel=0.05)


def test_err2_alpha_one_is_stable():
    assert err2_bound_check(G, 1.0, [2, 4, 8, 16]).passed


def test_commutation_phase_value():
    xi, res = commutation_phase(0.5, 0.5, G)
    assert xi == pytest.approx(1j)
    assert res < 1e-12


def test_shifted_dual_with_computed_dual():
    lat = Lattice2D.rectangular(2, 2)
    g = make_preset("gaussian", [], TimeGrid(16, 0.01))
    h = lattice_dual_generator(lat, g, 6.0)
    rep = shifted_dual_biorthogonality(lat, g, h, 1, tol=1e-3)
    assert rep.passed, rep.measured


def test_shifted_dual_rejects_non_dual():
    rep = shifted_dual_biorthogonality(Lattice2D.rectangular(0.5, 0.5), G, G, 1)
    assert rep.status == "hypothesis_failure"


def test_hap_radius_dense_lattice():
    ps = lattice_points(Lattice2D.rectangular(0.5, 0.5), Cube((0, 0), 8))
    r = hap_radius(G, ps, 0.01, [(0, 0), (0.25, 0.25)])
    assert r.found and r.radius <= 1.0
    r2 = hap_radius(G, ps, 0.01, [(3, 3), (3.25, 3.25)])
    assert r2.radius == r.radius


def test_hap_radius_sparse_lattice_not_found():
    ps = lattice_points(Lattice2D.rectangular(3, 3), Cube((0, 0), 8))
    r = hap_radius(G, ps, 1e-4, [(1.5, 1.5)], max_radius=2)
    assert not r.found and r.best_error > 1e-4
