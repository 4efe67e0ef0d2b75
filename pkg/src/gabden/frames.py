"""Finite Gabor sections as vector systems.

A :class:`GaborSection` is a finite list of time-frequency shifted
generators. Its Gram matrix ``G[i, j] = <f_j, f_i>`` carries everything else:
Riesz bounds are its extreme eigenvalues, the orthogonal projection onto the
span and the biorthogonal dual come from its inverse, and the distance of
each atom to the span of the others is ``1/sqrt(inv(G)[n, n])``.

Inversion always goes through an eigendecomposition so the conditioning is
available for error messages; eigenvalues below ``RANK_TOL * max_eig`` count
as rank deficiency.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .pointset import Cube
from .report import VerificationReport, finish
from .signal import GridMismatchError, SampledSignal, inner_product, translate_modulate
from .stft import PhaseGrid, stft_values

RANK_TOL = 1e-8
HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-6


class ConditioningError(ValueError):
    def __init__(self, message: str, condition: float):
        super().__init__(f"{message} (B/A = {condition:.3g})")
        self.condition = condition


class InconsistencyError(ValueError):
    """The Gram matrix is numerically indefinite."""


class GaborAtomRef(NamedTuple):
    generator_index: int
    lam: float
    mu: float


class GaborSection:
    """Atoms ``M_mu T_lam generators[i]`` realized on a common time grid."""

    def __init__(self, generators: Sequence[SampledSignal], atoms: Sequence[GaborAtomRef]):
        self.generators = list(generators)
        atoms = [GaborAtomRef(int(i), float(l), float(m)) for i, l, m in atoms]
        if len(set(atoms)) != len(atoms):
            raise ValueError("atoms must be distinct")
        for a in atoms:
            if not 0 <= a.generator_index < len(self.generators):
                raise IndexError(f"generator index {a.generator_index} out of range")
        grids = {g.grid for g in self.generators}
        if len(grids) > 1:
            raise GridMismatchError("all generators must share one time grid")
        self.atoms = atoms
        self.realized = [translate_modulate(self.generators[a.generator_index], a.lam, a.mu)
                         for a in atoms]

    @classmethod
    def from_points(cls, generator: SampledSignal, points) -> "GaborSection":
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        return cls([generator], [GaborAtomRef(0, x, y) for x, y in pts])

    @classmethod
    def from_family(cls, generators: Sequence[SampledSignal], members) -> "GaborSection":
        """One generator per point array; member ``n`` uses ``generators[n]``."""
        atoms = []
        for n, pts in enumerate(members):
            pts = getattr(pts, "points", pts)
            atoms += [GaborAtomRef(n, x, y) for x, y in np.asarray(pts, dtype=float).reshape(-1, 2)]
        return cls(generators, atoms)

    def __len__(self):
        return len(self.atoms)

    @property
    def grid(self):
        return self.generators[0].grid if self.generators else None

    def matrix(self) -> np.ndarray:
        """Realized atoms as rows."""
        if not self.realized:
            return np.empty((0, 0), dtype=complex)
        return np.vstack([f.values for f in self.realized])


class GramMatrix:
    def __init__(self, entries):
        G = np.asarray(entries, dtype=complex)
        if G.ndim != 2 or G.shape[0] != G.shape[1]:
            raise ValueError("Gram matrix must be square")
        if G.size and np.max(np.abs(G - G.conj().T)) > HERMITIAN_TOL:
            raise InconsistencyError("Gram matrix is not Hermitian")
        self.entries = (G + G.conj().T) / 2

    def __len__(self):
        return self.entries.shape[0]

    @cached_property
    def eigh(self):
        return np.linalg.eigh(self.entries)

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.eigh[0]

    @property
    def rank(self) -> int:
        ev = self.eigenvalues
        if ev.size == 0:
            return 0
        return int(np.count_nonzero(ev > RANK_TOL * max(ev[-1], 0.0)))

    def pseudo_inverse(self) -> np.ndarray:
        """Inverse on the numerical range, zero on its complement."""
        ev, U = self.eigh
        if ev.size == 0:
            return np.zeros((0, 0), dtype=complex)
        keep = ev > RANK_TOL * max(ev[-1], 0.0)
        inv = np.zeros_like(ev)
        inv[keep] = 1.0 / ev[keep]
        return (U * inv) @ U.conj().T

    def inverse(self) -> np.ndarray:
        ev = self.eigenvalues
        if ev.size and ev[0] <= max(RANK_TOL, RANK_TOL * ev[-1]):
            raise ConditioningError("Gram matrix is numerically singular",
                                    ev[-1] / ev[0] if ev[0] > 0 else np.inf)
        return self.pseudo_inverse()


def gram_matrix(sec: GaborSection) -> GramMatrix:
    F = sec.matrix()
    if F.size == 0:
        return GramMatrix(np.zeros((0, 0)))
    return GramMatrix(F.conj() @ F.T * sec.grid.step)


@dataclass
class BoundsReport:
    lower: float
    upper: float
    kind: str
    conditioning: float

    def to_dict(self):
        return {"lower": self.lower, "upper": self.upper, "kind": self.kind,
                "conditioning": self.conditioning}


def riesz_bounds(gm: GramMatrix, kind: str = "riesz_section") -> BoundsReport:
    """Extreme Gram eigenvalues ``A <= B``.

    On a finite section these are both the Riesz-sequence bounds and the
    frame bounds of the atoms inside their span.
    """
    ev = gm.eigenvalues
    if ev.size == 0:
        return BoundsReport(0.0, 0.0, kind, float("nan"))
    if ev[0] < -PSD_TOL:
        raise InconsistencyError(f"Gram matrix has eigenvalue {ev[0]:.3g} < 0")
    A, B = max(float(ev[0]), 0.0), float(ev[-1])
    return BoundsReport(A, B, kind, B / A if A > 0 else float("inf"))


def dual_frame_bound(gm: GramMatrix) -> float:
    """Upper (Bessel) bound of the canonical dual of the section in its span.

    Equal to ``1/lambda`` for the smallest eigenvalue above the rank cutoff.
    """
    ev = gm.eigenvalues
    if ev.size == 0:
        return 0.0
    kept = ev[ev > RANK_TOL * max(ev[-1], 0.0)]
    return float(1.0 / kept[0])


def _combine(sec: GaborSection, coeffs: np.ndarray, label: str = "") -> SampledSignal:
    """``sum_m coeffs[m] f_m`` keeping a closed form when all atoms have one."""
    grid = sec.grid
    values = coeffs @ sec.matrix() if len(coeffs) else np.zeros(grid.count, dtype=complex)
    func = None
    if sec.realized and all(f.func is not None for f in sec.realized):
        funcs = [f.func for f in sec.realized]
        c = np.array(coeffs)

        def closed(t, funcs=funcs, c=c):
            out = np.zeros(np.shape(t), dtype=complex)
            for cm, fm in zip(c, funcs):
                if cm != 0:
                    out = out + cm * fm(t)
            return out
        func = closed
    return SampledSignal(grid, values, func, label)


def project(sec: GaborSection, f: SampledSignal) -> SampledSignal:
    """Orthogonal projection of ``f`` onto the span of the section."""
    gm = gram_matrix(sec)
    if len(gm) == 0:
        return SampledSignal(f.grid, np.zeros_like(f.values))
    Ginv = gm.inverse()
    b = np.array([inner_product(f, fi) for fi in sec.realized])
    return _combine(sec, Ginv @ b)


def projection_norm_sq(sec: GaborSection, targets: np.ndarray, gm: Optional[GramMatrix] = None) -> np.ndarray:
    """``||P_W g||^2`` for each column ``b[:, k] = (<g_k, f_i>)_i`` in ``targets``.

    Uses the pseudo-inverse, so rank-deficient sections project onto their
    actual span.
    """
    gm = gm or gram_matrix(sec)
    Ginv = gm.pseudo_inverse()
    return np.real(np.einsum("ik,ij,jk->k", targets.conj(), Ginv, targets))


def atom_fields(sec: GaborSection, grid: PhaseGrid) -> np.ndarray:
    """STFT of every atom on ``grid``; shape ``(n_atoms, nx, ny)``."""
    return np.array([stft_values(f, grid.xs, grid.ys) for f in sec.realized]).reshape(
        (len(sec),) + grid.shape)


def projection_norm_field(sec: GaborSection, grid: PhaseGrid, fields: Optional[np.ndarray] = None) -> np.ndarray:
    """``||P_W phi_xy||^2`` on ``grid``.

    ``<phi_xy, f_i> = conj(V f_i(x, y))``, so the field follows from the atom
    transforms and the inverse Gram matrix.
    """
    if len(sec) == 0:
        return np.zeros(grid.shape)
    if fields is None:
        fields = atom_fields(sec, grid)
    b = fields.reshape(len(sec), -1).conj()
    return projection_norm_sq(sec, b).reshape(grid.shape)


def trace_identity_check(sec: GaborSection, quad_box: Cube, quad_step: float,
                         rel_tol: float = 0.02) -> VerificationReport:
    """Quadrature of ``int ||P_W phi_xy||^2 dx dy`` against ``dim W``."""
    a, b = quad_box.center
    R = quad_box.half_side
    grid = PhaseGrid((a - R, a + R, quad_step), (b - R, b + R, quad_step))
    gm = gram_matrix(sec)
    dim = gm.rank
    report = VerificationReport(
        name="trace_identity",
        inputs={"n_atoms": len(sec), "quad_box": [a, b, R], "quad_step": quad_step},
    )
    if len(sec) == 0:
        report.measured = {"integral": 0.0, "dim": 0, "relative_deviation": 0.0}
        report.bound = {"relative_deviation": rel_tol}
        return finish(report, 0.0)
    field = projection_norm_field(sec, grid)
    integral = float(np.sum(field) * grid.cell_area)
    edge = float(max(field[0].max(), field[-1].max(), field[:, 0].max(), field[:, -1].max()))
    if edge > 1e-8:
        warnings.warn(f"quadrature box too small: integrand reaches {edge:.2e} on its edge; "
                      f"missing mass about {dim - integral:.3g}", RuntimeWarning, stacklevel=2)
        report.notes.append(f"tail warning: edge value {edge:.3g}")
    dev = abs(integral - dim) / dim
    report.measured = {"integral": integral, "dim": dim, "relative_deviation": dev,
                       "edge_value": edge}
    report.bound = {"relative_deviation": rel_tol}
    report.constants = {"gram_eigenvalues": [float(gm.eigenvalues[0]), float(gm.eigenvalues[-1])]}
    return finish(report, rel_tol - dev)


def dual_system(sec: GaborSection) -> list:
    """Biorthogonal dual ``h_n = sum_m inv(G)[m, n] f_m`` inside the span.

    With ``G[i, j] = <f_j, f_i>`` this gives ``<f_n, h_m> = delta_nm``.
    """
    Ginv = gram_matrix(sec).inverse()
    return [_combine(sec, Ginv[:, n], f"dual[{n}]") for n in range(len(sec))]


def biorthogonal_sum_field(sec: GaborSection, duals: Sequence[SampledSignal],
                           grid: PhaseGrid) -> VerificationReport:
    """Evaluate ``S = sum_n V f_n conj(V h_n)`` and compare it with ``||P_W phi_xy||^2``."""
    if len(duals) != len(sec):
        raise ValueError("section and dual system differ in length")
    for d in duals:
        if sec.realized and d.grid != sec.grid:
            raise GridMismatchError("duals must live on the section grid")
    F = atom_fields(sec, grid)
    H = np.array([stft_values(h, grid.xs, grid.ys) for h in duals]).reshape(F.shape)
    S = np.sum(F * H.conj(), axis=0)
    proj = projection_norm_field(sec, grid, F)
    im = float(np.max(np.abs(S.imag))) if S.size else 0.0
    re_min = float(S.real.min()) if S.size else 0.0
    re_max = float(S.real.max()) if S.size else 0.0
    match = float(np.max(np.abs(S - proj))) if S.size else 0.0
    tol_im, tol_re, tol_match = 1e-6, 1e-6, 1e-5
    report = VerificationReport(
        name="biorthogonal_sum",
        inputs={"n_atoms": len(sec), "grid": [list(grid.x_range), list(grid.y_range)]},
        measured={"max_abs_imag": im, "min_real": re_min, "max_real": re_max,
                  "max_projection_mismatch": match},
        bound={"max_abs_imag": tol_im, "real_range": [-tol_re, 1 + tol_re],
               "max_projection_mismatch": tol_match},
    )
    margin = min(tol_im - im, re_min + tol_re, 1 + tol_re - re_max, tol_match - match)
    return finish(report, margin)


@dataclass
class MinimalityMargin:
    margin: float
    dual_bound: float
    distances: np.ndarray
    dual_norms: np.ndarray
    minimal: bool


def uniform_minimality_margin(gm: GramMatrix) -> MinimalityMargin:
    """Distance of each atom to the span of the others, and the dual norms.

    ``dist_n = 1/sqrt(inv(G)[n, n])`` and ``||h_n|| = sqrt(inv(G)[n, n])``.
    A singular Gram matrix gives margin 0 and ``minimal=False``.
    """
    n = len(gm)
    if n == 0:
        return MinimalityMargin(float("inf"), 0.0, np.empty(0), np.empty(0), True)
    try:
        Ginv = gm.inverse()
    except ConditioningError:
        return MinimalityMargin(0.0, float("inf"), np.zeros(n), np.full(n, np.inf), False)
    diag = np.real(np.diag(Ginv))
    norms = np.sqrt(diag)
    dists = 1.0 / norms
    return MinimalityMargin(float(dists.min()), float(norms.max()), dists, norms, True)
