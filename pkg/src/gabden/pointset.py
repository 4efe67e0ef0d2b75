"""Phase-space index sets: cubes, counts, extremal counts and density profiles.

Counting uses closed cubes ``|x - a| <= R, |y - b| <= R``. Comparisons carry
an absolute slack of ``BOUNDARY_TOL`` so that lattice points produced by
floating-point arithmetic land on the boundary they belong to.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence, Union

import numpy as np
from scipy.spatial import cKDTree

BOUNDARY_TOL = 1e-9


@dataclass(frozen=True)
class Cube:
    center: tuple
    half_side: float

    def __post_init__(self):
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))
        if not self.half_side > 0:
            raise ValueError("cube half_side must be positive")

    @property
    def bounds(self):
        a, b = self.center
        R = self.half_side
        return a - R, a + R, b - R, b + R

    def contains(self, points: np.ndarray, tol: float = BOUNDARY_TOL) -> np.ndarray:
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        a, b = self.center
        return ((np.abs(pts[:, 0] - a) <= self.half_side + tol)
                & (np.abs(pts[:, 1] - b) <= self.half_side + tol))

    def encloses(self, other: "Cube") -> bool:
        """True when ``other`` lies inside this cube."""
        dx = abs(other.center[0] - self.center[0])
        dy = abs(other.center[1] - self.center[1])
        return max(dx, dy) + other.half_side <= self.half_side + BOUNDARY_TOL


def _min_distance(points: np.ndarray) -> float:
    if len(points) < 2:
        return math.inf
    d, _ = cKDTree(points).query(points, k=2)
    return float(d[:, 1].min())


class PointSet:
    """A finite set of distinct phase-space points.

    ``declared_separation`` is a certified lower bound on all pairwise
    Euclidean distances; it is checked on construction.
    """

    def __init__(self, points, declared_separation: Optional[float] = None):
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        if not np.all(np.isfinite(pts)):
            raise ValueError("points must be finite")
        pts.setflags(write=False)
        self.points = pts
        self._min_distance = _min_distance(pts)
        if self._min_distance == 0.0:
            raise ValueError("points must be distinct")
        if declared_separation is not None:
            if not declared_separation > 0:
                raise ValueError("declared separation must be positive")
            if self._min_distance < declared_separation * (1 - 1e-12):
                raise ValueError(
                    f"minimum distance {self._min_distance:g} is below the declared "
                    f"separation {declared_separation:g}")
        self.declared_separation = declared_separation

    def __len__(self):
        return len(self.points)

    def __repr__(self):
        return f"PointSet(n={len(self)}, declared_separation={self.declared_separation})"

    def restrict(self, cube: Cube) -> "PointSet":
        return PointSet(self.points[cube.contains(self.points)], self.declared_separation)


@dataclass(frozen=True)
class PointFamily:
    members: tuple

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))

    @property
    def stacked(self) -> np.ndarray:
        """All member points as one multiset."""
        if not self.members:
            return np.empty((0, 2))
        return np.vstack([m.points for m in self.members])


PointSource = Union[PointSet, PointFamily]


def _as_array(ps) -> np.ndarray:
    if isinstance(ps, PointFamily):
        return ps.stacked
    if isinstance(ps, PointSet):
        return ps.points
    return np.asarray(ps, dtype=float).reshape(-1, 2)


# -- lattices --------------------------------------------------------------

@dataclass(frozen=True)
class Lattice2D:
    """The lattice ``{n v + k w : (n, k) in Z^2}``."""

    v: tuple
    w: tuple

    def __post_init__(self):
        object.__setattr__(self, "v", (float(self.v[0]), float(self.v[1])))
        object.__setattr__(self, "w", (float(self.w[0]), float(self.w[1])))
        if abs(self.det) < 1e-12:
            raise ValueError("degenerate lattice: v and w are parallel")

    @classmethod
    def rectangular(cls, alpha: float, beta: float) -> "Lattice2D":
        return cls((alpha, 0.0), (0.0, beta))

    @property
    def det(self) -> float:
        return self.v[0] * self.w[1] - self.v[1] * self.w[0]

    @property
    def density(self) -> float:
        return 1.0 / abs(self.det)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.v[0], self.w[0]], [self.v[1], self.w[1]]])

    def point(self, n: int, k: int) -> tuple:
        return (n * self.v[0] + k * self.w[0], n * self.v[1] + k * self.w[1])

    def min_distance(self) -> float:
        """Length of a shortest nonzero vector (Lagrange-Gauss reduction)."""
        b1 = np.array(self.v)
        b2 = np.array(self.w)
        while True:
            if b2 @ b2 < b1 @ b1:
                b1, b2 = b2, b1
            m = round(float(b1 @ b2) / float(b1 @ b1))
            if m == 0:
                return float(np.sqrt(b1 @ b1))
            b2 = b2 - m * b1


def lattice_points(lat: Lattice2D, window: Cube) -> PointSet:
    """All lattice points in the closed cube ``window``."""
    x0, x1, y0, y1 = window.bounds
    corners = np.array([[x0, y0], [x0, y1], [x1, y0], [x1, y1]]).T
    coeffs = np.linalg.solve(lat.matrix, corners)
    lo = np.floor(coeffs.min(axis=1)).astype(int) - 1
    hi = np.ceil(coeffs.max(axis=1)).astype(int) + 1
    n, k = np.meshgrid(np.arange(lo[0], hi[0] + 1), np.arange(lo[1], hi[1] + 1), indexing="ij")
    idx = np.column_stack([n.ravel(), k.ravel()]).astype(float)
    pts = idx @ lat.matrix.T
    return PointSet(pts[window.contains(pts)], declared_separation=lat.min_distance())


def angular_sector_family(n_sectors: int, window: Cube) -> PointFamily:
    """Integer points split into ``n_sectors`` angular sectors, sector n moved down by n.

    Sector ``n`` (1-based) holds the points of Z^2 whose argument lies in
    ``(2 pi (n-1)/N, 2 pi n/N]``; the origin has no argument and is dropped.
    Points are generated in ``window`` before the shift.
    """
    pts = lattice_points(Lattice2D((1, 0), (0, 1)), window).points
    pts = pts[np.any(pts != 0, axis=1)]
    arg = np.arctan2(pts[:, 1], pts[:, 0]) % (2 * np.pi)
    arg[arg <= 1e-12] = 2 * np.pi
    sector = np.ceil(arg / (2 * np.pi / n_sectors) - 1e-12).astype(int)
    members = []
    for n in range(1, n_sectors + 1):
        members.append(PointSet(pts[sector == n] - np.array([0.0, n]), declared_separation=1.0))
    return PointFamily(members)


# -- counting --------------------------------------------------------------

def count_in_cube(ps, q: Cube) -> int:
    """Number of points (summed over members for a family) in the closed cube."""
    return int(np.count_nonzero(q.contains(_as_array(ps))))


class ExtremalCounts(NamedTuple):
    min: int
    max: int
    argmin: tuple
    argmax: tuple


def _merge(values: np.ndarray, tol: float) -> np.ndarray:
    values = np.sort(values)
    if len(values) == 0:
        return values
    keep = np.concatenate([[True], np.diff(values) > tol])
    return values[keep]


def _stab_max(ys: np.ndarray, R: float, lo: float, hi: float):
    starts = np.sort(ys - R)
    ends = np.sort(ys + R)
    cand = np.clip(np.concatenate([starts, ends, [lo, hi]]), lo, hi)
    counts = (np.searchsorted(starts, cand + BOUNDARY_TOL, side="right")
              - np.searchsorted(ends, cand - BOUNDARY_TOL, side="left"))
    i = int(np.argmax(counts))
    return int(counts[i]), float(cand[i])


def _open_cells(values: np.ndarray, R: float, lo: float, hi: float) -> np.ndarray:
    # midpoints of the open cells cut out of (lo, hi) by the breakpoints values +- R
    bp = np.concatenate([values - R, values + R])
    bp = bp[(bp > lo + BOUNDARY_TOL) & (bp < hi - BOUNDARY_TOL)]
    edges = _merge(np.concatenate([[lo, hi], bp]), BOUNDARY_TOL)
    return (edges[:-1] + edges[1:]) / 2


def _stab_min(ys: np.ndarray, R: float, lo: float, hi: float):
    starts = np.sort(ys - R)
    ends = np.sort(ys + R)
    mids = _open_cells(ys, R, lo, hi)
    counts = np.searchsorted(starts, mids, side="right") - np.searchsorted(ends, mids, side="left")
    i = int(np.argmin(counts))
    return int(counts[i]), float(mids[i])


def extremal_counts(ps, R: float, search_region: Cube) -> ExtremalCounts:
    """Exact min and max of ``|ps ∩ Q_c(R)|`` over centers ``c`` in the region.

    The count is piecewise constant on the arrangement of the lines
    ``x = p_x +- R`` and ``y = p_y +- R``. Because cubes are closed, the
    maximum is attained at a vertex whose coordinates are left endpoints
    (or the region's lower edge) and the minimum inside an open cell. Both
    are found by sweeping x-slabs and solving a 1-D interval-stabbing problem
    in each, ``O(n^2 log n)`` overall.
    """
    if not R > 0:
        raise ValueError("R must be positive")
    pts = _as_array(ps)
    x_lo, x_hi, y_lo, y_hi = search_region.bounds
    if len(pts) == 0:
        c = search_region.center
        return ExtremalCounts(0, 0, c, c)

    # maximum: vertex candidates
    xs = np.unique(np.clip(np.concatenate([pts[:, 0] - R, pts[:, 0] + R, [x_lo, x_hi]]), x_lo, x_hi))
    best_max, arg_max = -1, search_region.center
    for x in xs:
        active = pts[np.abs(pts[:, 0] - x) <= R + BOUNDARY_TOL, 1]
        count, y = _stab_max(active, R, y_lo, y_hi) if len(active) else (0, y_lo)
        if count > best_max:
            best_max, arg_max = count, (float(x), y)

    # minimum: open-cell candidates
    best_min, arg_min = math.inf, search_region.center
    for x in _open_cells(pts[:, 0], R, x_lo, x_hi):
        active = pts[np.abs(pts[:, 0] - x) <= R, 1]
        if len(active) == 0:
            count, y = 0, (y_lo + y_hi) / 2
        else:
            count, y = _stab_min(active, R, y_lo, y_hi)
        if count < best_min:
            best_min, arg_min = count, (float(x), y)
            if count == 0:
                break
    return ExtremalCounts(int(best_min), int(best_max), arg_min, arg_max)


@dataclass
class DensityReport:
    radii: list
    max_counts: list
    min_counts: list
    normalized_max: list
    normalized_min: list
    argmax: list = field(default_factory=list)
    argmin: list = field(default_factory=list)
    window_ok: list = field(default_factory=list)

    def rows(self):
        """Rows for the ``R,max_count,min_count,norm_max,norm_min`` table."""
        return list(zip(self.radii, self.max_counts, self.min_counts,
                        self.normalized_max, self.normalized_min))

    def to_dict(self) -> dict:
        return {
            "radii": list(self.radii),
            "max_counts": list(self.max_counts),
            "min_counts": list(self.min_counts),
            "normalized_max": list(self.normalized_max),
            "normalized_min": list(self.normalized_min),
            "argmax": [list(p) for p in self.argmax],
            "argmin": [list(p) for p in self.argmin],
            "window_ok": list(self.window_ok),
        }


def bounding_cube(ps) -> Cube:
    """Largest cube centered at the bounding-box center that fits in the box."""
    pts = _as_array(ps)
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    return Cube(tuple((lo + hi) / 2), max(float(np.min(hi - lo) / 2), 1e-12))


def density_profile(source, radii: Sequence[float], search_region: Cube,
                    data_window: Optional[Cube] = None) -> DensityReport:
    """Extremal counts and their ``(2R)^-2`` normalizations for each radius.

    Family counts are summed over members at a common center. Entries whose
    cubes can leave ``data_window`` (default: the points' bounding cube) are
    flagged in ``window_ok`` rather than dropped.
    """
    radii = [float(r) for r in radii]
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be increasing")
    pts = _as_array(source)
    if data_window is None and len(pts):
        data_window = bounding_cube(pts)
    rep = DensityReport(radii, [], [], [], [])
    for R in radii:
        ext = extremal_counts(pts, R, search_region)
        area = (2 * R) ** 2
        rep.max_counts.append(ext.max)
        rep.min_counts.append(ext.min)
        rep.normalized_max.append(ext.max / area)
        rep.normalized_min.append(ext.min / area)
        rep.argmax.append(ext.argmax)
        rep.argmin.append(ext.argmin)
        grown = Cube(search_region.center, search_region.half_side + R)
        rep.window_ok.append(bool(data_window is not None and data_window.encloses(grown)))
    return rep


def separation_constant(ps) -> float:
    """Minimum pairwise Euclidean distance; ``inf`` for fewer than two points."""
    return _min_distance(_as_array(ps))


def rho_alpha(R: float, alpha: float) -> float:
    """Growth envelope: ``R**(2 - alpha)``, ``log R`` or ``1``."""
    if not R > 1:
        raise ValueError("rho_alpha is defined for R > 1")
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    if alpha < 2:
        return float(R ** (2 - alpha))
    if alpha == 2:
        return float(math.log(R))
    return 1.0
