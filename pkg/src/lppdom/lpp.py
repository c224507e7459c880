"""Last passage times, low-optimal paths, path meet and an enumeration oracle."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import _kernels as K
from .errors import DomainError, ResourceGuardError
from .weights import Site, SiteWindow, WeightField

MAX_ENUM_DEPTH = 20


@dataclass(frozen=True)
class LatticePath:
    """An up-right path from the origin; site i lies on the anti-diagonal x + y = i."""

    sites: tuple

    def __post_init__(self):
        sites = tuple((int(x), int(y)) for x, y in self.sites)
        if not sites or sites[0] != (0, 0):
            raise DomainError("a lattice path starts at (0, 0)")
        for (x0, y0), (x1, y1) in zip(sites, sites[1:]):
            if (x1 - x0, y1 - y0) not in ((1, 0), (0, 1)):
                raise DomainError(f"invalid step {(x0, y0)} -> {(x1, y1)}")
        object.__setattr__(self, "sites", sites)

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "LatticePath":
        return cls(tuple(map(tuple, arr.tolist())))

    @property
    def end(self) -> Site:
        return self.sites[-1]

    def __len__(self):
        return len(self.sites)

    def __iter__(self):
        return iter(self.sites)

    def __getitem__(self, i):
        return self.sites[i]

    def __contains__(self, z):
        z = tuple(z)
        n = z[0] + z[1]
        return 0 <= n < len(self.sites) and self.sites[n] == z

    def is_below(self, other: "LatticePath") -> bool:
        """True if on every anti-diagonal this path's y is <= the other's."""
        return len(self) == len(other) and all(p[1] <= q[1] for p, q in zip(self, other))

    def __repr__(self):
        return f"LatticePath({list(self.sites)})"


@dataclass(frozen=True, eq=False)
class PassageTimeGrid:
    """Last passage times g(z) on a window, with the low-optimal parent codes."""

    window: SiteWindow
    g: np.ndarray
    parent: np.ndarray

    def at(self, z: Sequence[int]):
        """g(z), or None for sites with a negative coordinate (g = -inf there)."""
        x, y = z
        if x < 0 or y < 0:
            return None
        if not self.window.contains(z):
            raise DomainError(f"site {tuple(z)} outside window {self.window}")
        return self.g[x, y].item()

    def __getitem__(self, z):
        return self.at(z)


def passage_times(field: WeightField) -> PassageTimeGrid:
    g = K.passage_times(field.weights)
    g.flags.writeable = False
    p = K.parents(g)
    p.flags.writeable = False
    return PassageTimeGrid(field.window, g, p)


def _check_site(window: SiteWindow, z) -> tuple:
    z = tuple(int(v) for v in z)
    if not window.contains(z):
        raise DomainError(f"site {z} outside window {window}")
    return z


def path_length(field: WeightField, path: LatticePath):
    """Sum of weights along the path, accumulated from the origin outward."""
    total = None
    for z in path:
        if not field.window.contains(z):
            raise DomainError(f"path leaves window at {z}")
        v = field.weights[z]
        total = v if total is None else total + v
    return total.item()


def low_optimal_path(field: WeightField, z: Sequence[int],
                     grid: Optional[PassageTimeGrid] = None) -> LatticePath:
    z = _check_site(field.window, z)
    grid = grid or passage_times(field)
    return LatticePath.from_array(K.backtrack(grid.parent, z[0], z[1]))


def path_meet(p: LatticePath, q: LatticePath) -> LatticePath:
    """Site-wise lower envelope of two paths with common endpoints."""
    if p.end != q.end:
        raise DomainError(f"paths end at {p.end} and {q.end}")
    return LatticePath(tuple(a if a[1] <= b[1] else b for a, b in zip(p, q)))


def all_paths(z: Sequence[int]) -> np.ndarray:
    """Every up-right path from the origin to z, as an array (P, n + 1, 2)."""
    zx, zy = z
    n = zx + zy
    combos = list(itertools.combinations(range(n), zy))
    steps_up = np.zeros((len(combos), n), dtype=np.int64)
    for i, c in enumerate(combos):
        steps_up[i, list(c)] = 1
    ys = np.concatenate([np.zeros((len(combos), 1), np.int64), np.cumsum(steps_up, axis=1)], axis=1)
    xs = np.arange(n + 1)[None, :] - ys
    return np.stack([xs, ys], axis=2)


def enumerate_optimal_paths(field: WeightField, z: Sequence[int]) -> set[LatticePath]:
    """All maximal-length paths to z, found by brute force over the whole of Gamma_z.

    Lengths are accumulated from the origin in path order, which reproduces
    the dynamic program's float rounding, so maximality is tested exactly.
    """
    z = _check_site(field.window, z)
    if z[0] + z[1] > MAX_ENUM_DEPTH:
        raise ResourceGuardError(f"enumeration depth {z[0] + z[1]} exceeds {MAX_ENUM_DEPTH}")
    paths = all_paths(z)
    w = field.weights
    lengths = w[paths[:, 0, 0], paths[:, 0, 1]]
    for i in range(1, paths.shape[1]):
        lengths = lengths + w[paths[:, i, 0], paths[:, i, 1]]
    best = lengths.max()
    return {LatticePath.from_array(paths[k]) for k in np.flatnonzero(lengths == best)}


def lowest_of(paths) -> LatticePath:
    """Per-anti-diagonal minimum-y site over a nonempty set of paths to one endpoint."""
    paths = list(paths)
    sites = []
    for i in range(len(paths[0])):
        sites.append(min((p[i] for p in paths), key=lambda s: s[1]))
    return LatticePath(tuple(sites))
