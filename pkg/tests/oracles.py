"""Independent reference computations shared by the tests."""
import numpy as np


def brute_force_counts(pts, R, region, res=0.01):
    """Max over centers on the 0.01 grid, min over the half-offset grid (integer units)."""
    P = np.round(pts / res).astype(np.int64)
    r = int(round(R / res))
    a, b = np.round(np.array(region.center) / res).astype(int)
    h = int(round(region.half_side / res))
    xs = np.arange(a - h, a + h + 1)
    ys = np.arange(b - h, b + h + 1)
    inx = np.abs(P[:, 0][None, :] - xs[:, None]) <= r
    iny = np.abs(P[:, 1][None, :] - ys[:, None]) <= r
    counts = inx.astype(int) @ iny.T.astype(int)
    # half-offset centers for open-cell minima
    xs2, ys2 = 2 * xs[:-1] + 1, 2 * ys[:-1] + 1
    inx2 = np.abs(2 * P[:, 0][None, :] - xs2[:, None]) <= 2 * r
    iny2 = np.abs(2 * P[:, 1][None, :] - ys2[:, None]) <= 2 * r
    counts2 = inx2.astype(int) @ iny2.T.astype(int)
    return int(counts.max()), int(min(counts.min(), counts2.min()))
