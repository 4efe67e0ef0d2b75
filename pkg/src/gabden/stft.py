"""Short-time Fourier transform with the normalized Gaussian window.

Convention::

    V g(x, y) = <g, phi_xy> = int g(t) conj(phi(t - x)) exp(-2 pi i y t) dt

with ``phi(t) = (2/pi)**0.25 exp(-t**2)``. Every value is a direct Riemann sum
over the time grid of ``g``; a whole field is one matrix product.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .report import VerificationReport, finish
from .signal import (GAUSSIAN_CONSTANT, MAX_GAUSSIAN_STEP, TRUNCATION_TOL,
                     ResolutionError, SampledSignal, TimeGrid, TruncationError,
                     fourier_transform, gaussian, make_preset, norm_sq,
                     translate_modulate, weighted_norm_sq)

COVARIANCE_TOL = 1e-5


class PhasePoint(NamedTuple):
    x: float
    y: float


def _axis(lo: float, hi: float, step: float) -> np.ndarray:
    if not step > 0:
        raise ValueError("phase grid steps must be positive")
    if hi < lo:
        return np.empty(0)
    n = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(n)


@dataclass(frozen=True)
class PhaseGrid:
    """Rectangular grid; ``x_range`` and ``y_range`` are ``(low, high, step)``."""

    x_range: tuple
    y_range: tuple

    def __post_init__(self):
        object.__setattr__(self, "x_range", tuple(float(v) for v in self.x_range))
        object.__setattr__(self, "y_range", tuple(float(v) for v in self.y_range))
        if not (self.x_range[2] > 0 and self.y_range[2] > 0):
            raise ValueError("phase grid steps must be positive")

    @classmethod
    def square(cls, half_side: float = 8.0, step: float = 0.1) -> "PhaseGrid":
        return cls((-half_side, half_side, step), (-half_side, half_side, step))

    @property
    def xs(self) -> np.ndarray:
        return _axis(*self.x_range)

    @property
    def ys(self) -> np.ndarray:
        return _axis(*self.y_range)

    @property
    def cell_area(self) -> float:
        return self.x_range[2] * self.y_range[2]

    @property
    def shape(self) -> tuple:
        return (len(self.xs), len(self.ys))


@dataclass(frozen=True, eq=False)
class STFTField:
    """Samples ``values[i, j] = V g(xs[i], ys[j])``."""

    grid: PhaseGrid
    values: np.ndarray
    source: str = ""
    signal_norm: float = float("nan")

    @property
    def xs(self) -> np.ndarray:
        return self.grid.xs

    @property
    def ys(self) -> np.ndarray:
        return self.grid.ys

    @property
    def modulus(self) -> np.ndarray:
        return np.abs(self.values)

    def mass(self) -> float:
        """Quadrature of ``|V g|**2`` over the grid box."""
        return float(np.sum(np.abs(self.values) ** 2) * self.grid.cell_area)

    def _overlap_weights(self, nodes, step, lo, hi):
        left = np.maximum(nodes - step / 2, lo)
        right = np.minimum(nodes + step / 2, hi)
        return np.clip(right - left, 0.0, None)

    def mass_in_cube(self, center: Sequence[float], half_side: float) -> float:
        """Mass of ``|V g|**2`` inside a closed cube, with partial-cell weights."""
        a, b = center
        wx = self._overlap_weights(self.xs, self.grid.x_range[2], a - half_side, a + half_side)
        wy = self._overlap_weights(self.ys, self.grid.y_range[2], b - half_side, b + half_side)
        return float(wx @ (np.abs(self.values) ** 2) @ wy)

    def boundary_max(self) -> float:
        """Largest ``|V g|**2`` on the outer ring of the grid."""
        if self.values.size == 0:
            return 0.0
        m = np.abs(self.values) ** 2
        return float(max(m[0].max(), m[-1].max(), m[:, 0].max(), m[:, -1].max()))


def window(grid: TimeGrid) -> SampledSignal:
    """The unit-norm Gaussian window sampled on ``grid``."""
    return make_preset("gaussian", [], grid)


def _window_matrix(g: SampledSignal, xs: np.ndarray) -> np.ndarray:
    grid = g.grid
    T = grid.half_width
    if grid.step > MAX_GAUSSIAN_STEP:
        raise ResolutionError(f"step {grid.step} cannot resolve the window")
    t = grid.nodes
    if len(xs):
        if np.max(np.abs(xs)) > T:
            raise TruncationError(f"window center |x| = {np.max(np.abs(xs)):g} is off the grid")
        # the integrand g * phi(. - x) must vanish at both ends of the grid
        scale = max(float(np.max(np.abs(g.values))), 1e-300)
        ends = np.abs(g.values[[0, -1]])[None, :] * gaussian(t[[0, -1]][None, :] - xs[:, None])
        if np.max(ends) > TRUNCATION_TOL * scale:
            raise TruncationError(
                f"window shifted to |x| = {np.max(np.abs(xs)):g} meets the signal at the grid edge")
    return gaussian(t[None, :] - xs[:, None])


def stft_point(g: SampledSignal, p) -> complex:
    x, y = p
    t = g.grid.nodes
    w = _window_matrix(g, np.array([float(x)]))[0]
    return complex(np.sum(g.values * w * np.exp(-2j * np.pi * y * t)) * g.grid.step)


def stft_values(g: SampledSignal, xs, ys, chunk: int = 256) -> np.ndarray:
    """``V g`` on the tensor grid ``xs`` x ``ys``."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    out = np.empty((len(xs), len(ys)), dtype=complex)
    if out.size == 0:
        return out
    t = g.grid.nodes
    _window_matrix(g, np.array([xs.min(), xs.max()]))
    for j0 in range(0, len(ys), chunk):
        E = np.exp(-2j * np.pi * np.outer(t, ys[j0:j0 + chunk]))
        for i0 in range(0, len(xs), chunk):
            W = gaussian(t[None, :] - xs[i0:i0 + chunk, None]) * g.values[None, :]
            out[i0:i0 + chunk, j0:j0 + chunk] = W @ E
    return out * g.grid.step


def stft_scattered(g: SampledSignal, points) -> np.ndarray:
    """``V g`` at an arbitrary list of phase points."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        return np.empty(0, dtype=complex)
    t = g.grid.nodes
    W = _window_matrix(g, pts[:, 0]) * g.values[None, :]
    E = np.exp(-2j * np.pi * pts[:, 1:2] * t[None, :])
    return np.sum(W * E, axis=1) * g.grid.step


def stft_field(g: SampledSignal, grid: PhaseGrid) -> STFTField:
    return STFTField(grid, stft_values(g, grid.xs, grid.ys), g.label, g.norm())


# -- closed forms ----------------------------------------------------------

def gaussian_stft(a: float, b: float, x, y):
    """Closed form of ``V phi_ab(x, y)`` for the window itself shifted to (a, b)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d, eta = x - a, y - b
    return np.exp(-d ** 2 / 2 - np.pi ** 2 * eta ** 2 / 2 - 1j * np.pi * eta * (a + x))


def gaussian_stft_modulus(x, y):
    return np.exp(-np.asarray(x) ** 2 / 2 - np.pi ** 2 * np.asarray(y) ** 2 / 2)


# -- identities ------------------------------------------------------------

def check_covariance(g: SampledSignal, shift, sample_points: Iterable) -> VerificationReport:
    """Compare ``|V(M_mu T_lam g)(x, y)|`` with ``|V g(x - lam, y - mu)|``."""
    lam, mu = shift
    pts = np.asarray(list(sample_points), dtype=float).reshape(-1, 2)
    shifted = translate_modulate(g, lam, mu)
    lhs = np.abs(stft_scattered(shifted, pts))
    rhs = np.abs(stft_scattered(g, pts - np.array([lam, mu])))
    discrepancy = float(np.max(np.abs(lhs - rhs))) if len(pts) else 0.0
    report = VerificationReport(
        name="stft_covariance",
        inputs={"signal": g.label, "shift": [lam, mu], "n_points": len(pts)},
        measured={"max_discrepancy": discrepancy},
        bound={"max_discrepancy": COVARIANCE_TOL},
    )
    return finish(report, COVARIANCE_TOL - discrepancy)


def _alpha_weight(xs, ys, alpha):
    return np.abs(xs)[:, None] ** alpha + np.abs(ys)[None, :] ** alpha


def weighted_field_norm_sq(field: STFTField, alpha: float, cauchy_tol: float = 0.01) -> float:
    """Quadrature of ``int (|x|**a + |y|**a) |G|**2`` over the field box.

    Warns when the value on a box shrunk by 1/8 differs by more than
    ``cauchy_tol`` (relative), i.e. when the weighted tail is not captured.
    """
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    xs, ys = field.xs, field.ys
    if field.values.size == 0:
        return 0.0
    dens = _alpha_weight(xs, ys, alpha) * np.abs(field.values) ** 2
    full = float(np.sum(dens) * field.grid.cell_area)
    rx = 0.875 * np.max(np.abs(xs))
    ry = 0.875 * np.max(np.abs(ys))
    inner = float(np.sum(dens[np.abs(xs) <= rx][:, np.abs(ys) <= ry]) * field.grid.cell_area)
    if full > 0 and abs(full - inner) > cauchy_tol * full:
        warnings.warn(
            f"weighted norm not converged on the field box (inner {inner:.6g}, full {full:.6g})",
            RuntimeWarning, stacklevel=2)
    return full


def weighted_transfer_bound(g: SampledSignal, alpha: float) -> float:
    """Right-hand side of the weighted-norm transfer from ``g, ghat`` to ``V g``.

    ``C(alpha) (||g||^2 ||phi||_a^2 + ||g||_a^2 + ||ghat||^2 ||phihat||_a^2
    + ||ghat||_a^2)`` with ``C(alpha) = max(1, 2**(alpha - 1))``, the constant
    in ``|x|**a <= C(a) (|t|**a + |t - x|**a)``. The frequency half uses the
    exact identity ``|V_phi g(x, y)| = |V_phihat ghat(y, -x)|``.
    """
    c_alpha = max(1.0, 2.0 ** (alpha - 1))
    phi = window(g.grid)
    g_hat = fourier_transform(g)
    phi_hat = fourier_transform(phi)
    time_part = norm_sq(g) * weighted_norm_sq(phi, alpha) + norm_sq(phi) * weighted_norm_sq(g, alpha)
    freq_part = (norm_sq(g_hat) * weighted_norm_sq(phi_hat, alpha)
                 + norm_sq(phi_hat) * weighted_norm_sq(g_hat, alpha))
    return c_alpha * (time_part + freq_part)


__all__ = [
    "PhasePoint", "PhaseGrid", "STFTField", "window", "stft_point", "stft_values",
    "stft_scattered", "stft_field", "gaussian_stft", "gaussian_stft_modulus",
    "check_covariance", "weighted_field_norm_sq", "weighted_transfer_bound",
    "GAUSSIAN_CONSTANT",
]
