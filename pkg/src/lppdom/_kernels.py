"""Compiled lattice kernels.

Parent codes: 0 for the origin, BELOW when the predecessor is z - (0, 1),
LEFT when it is z - (1, 0). Boundary sites have a single admissible
predecessor, so no sentinel value for sites outside the quadrant is needed.
"""
import numpy as np
from numba import njit

ROOT = 0
BELOW = 1
LEFT = 2


@njit(cache=True, nogil=True)
def passage_times(w):
    nx1, ny1 = w.shape
    g = np.empty_like(w)
    for x in range(nx1):
        for y in range(ny1):
            if x == 0 and y == 0:
                g[x, y] = w[x, y]
            elif x == 0:
                g[x, y] = g[x, y - 1] + w[x, y]
            elif y == 0:
                g[x, y] = g[x - 1, y] + w[x, y]
            else:
                b = g[x, y - 1]
                l = g[x - 1, y]
                g[x, y] = (b if b >= l else l) + w[x, y]
    return g


@njit(cache=True, nogil=True)
def parents(g):
    # prefer the lower predecessor on ties
    nx1, ny1 = g.shape
    p = np.empty((nx1, ny1), dtype=np.int8)
    for x in range(nx1):
        for y in range(ny1):
            if x == 0 and y == 0:
                p[x, y] = ROOT
            elif y > 0 and (x == 0 or g[x, y - 1] >= g[x - 1, y]):
                p[x, y] = BELOW
            else:
                p[x, y] = LEFT
    return p


@njit(cache=True, nogil=True)
def backtrack(p, zx, zy):
    n = zx + zy
    out = np.empty((n + 1, 2), dtype=np.int64)
    x, y = zx, zy
    for i in range(n, -1, -1):
        out[i, 0] = x
        out[i, 1] = y
        c = p[x, y]
        if c == BELOW:
            y -= 1
        elif c == LEFT:
            x -= 1
    return out


@njit(cache=True, nogil=True)
def subtree_mask(p, rx, ry):
    """Offsets z - r of all sites z whose low-optimal path passes r."""
    nx1, ny1 = p.shape
    wx = nx1 - rx
    wy = ny1 - ry
    m = np.zeros((wx, wy), dtype=np.bool_)
    m[0, 0] = True
    for i in range(wx):
        for j in range(wy):
            if i == 0 and j == 0:
                continue
            c = p[rx + i, ry + j]
            if c == BELOW:
                m[i, j] = j > 0 and m[i, j - 1]
            elif c == LEFT:
                m[i, j] = i > 0 and m[i - 1, j]
    return m


@njit(cache=True, nogil=True)
def on_path(p, zx, zy, ux, uy):
    """Whether u lies on the low-optimal path to z."""
    x, y = zx, zy
    while x >= ux and y >= uy:
        if x == ux and y == uy:
            return True
        c = p[x, y]
        if c == BELOW:
            y -= 1
        elif c == LEFT:
            x -= 1
        else:
            return False
    return False


@njit(cache=True, nogil=True)
def prefix_consistent(w):
    """Check every low-optimal path against its predecessor's, computing each
    from its own rectangle [0, z] so that no DP state is shared."""
    nx1, ny1 = w.shape
    for zx in range(nx1):
        for zy in range(ny1):
            if zx == 0 and zy == 0:
                continue
            sub = w[: zx + 1, : zy + 1]
            path_z = backtrack(parents(passage_times(sub)), zx, zy)
            ux = path_z[zx + zy - 1, 0]
            uy = path_z[zx + zy - 1, 1]
            path_u = backtrack(parents(passage_times(w[: ux + 1, : uy + 1])), ux, uy)
            for i in range(zx + zy):
                if path_u[i, 0] != path_z[i, 0] or path_u[i, 1] != path_z[i, 1]:
                    return False
    return True


NEUTRAL = 0
BLUE = 1
RED = 2


@njit(cache=True, nogil=True)
def coloring(p, ax, ay):
    nx1, ny1 = p.shape
    out = np.zeros((nx1, ny1), dtype=np.int8)
    for i in range(nx1 - ax):
        for j in range(ny1 - ay):
            if i + j < 2:
                continue
            if i == 1 and j == 1:
                out[ax + i, ay + j] = BLUE
            elif i == 0 or j == 0:
                out[ax + i, ay + j] = RED
            else:
                c = p[ax + i, ay + j]
                if c == BELOW:
                    out[ax + i, ay + j] = out[ax + i, ay + j - 1]
                else:
                    out[ax + i, ay + j] = out[ax + i - 1, ay + j]
    return out
