"""The percolation tree as a parent forest, subtree offset sets and colorings."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import _kernels as K
from .errors import DomainError
from .lpp import PassageTimeGrid, passage_times
from .weights import Site, SiteWindow, WeightField


@dataclass(frozen=True, eq=False)
class ParentForest:
    window: SiteWindow
    codes: np.ndarray

    def parent(self, z: Sequence[int]) -> Optional[Site]:
        """Predecessor of z on its low-optimal path; None at the origin."""
        x, y = z
        if not self.window.contains(z):
            raise DomainError(f"site {tuple(z)} outside window {self.window}")
        c = self.codes[x, y]
        if c == K.BELOW:
            return (x, y - 1)
        if c == K.LEFT:
            return (x - 1, y)
        return None

    def edges(self):
        for z in self.window.sites():
            p = self.parent(z)
            if p is not None:
                yield p, z

    def children(self, u: Sequence[int]) -> list[Site]:
        x, y = u
        out = []
        if x + 1 <= self.window.nx and self.codes[x + 1, y] == K.LEFT:
            out.append((x + 1, y))
        if y + 1 <= self.window.ny and self.codes[x, y + 1] == K.BELOW:
            out.append((x, y + 1))
        return out


@dataclass(frozen=True, eq=False)
class SubtreeOffsets:
    """Vertices of a subtree translated so that the root sits at (0, 0).

    ``mask[i, j]`` marks offset (i, j); the mask covers ``window_shape``, the
    region where membership is known exactly.
    """

    root: Site
    mask: np.ndarray

    @property
    def window_shape(self) -> SiteWindow:
        return SiteWindow(self.mask.shape[0] - 1, self.mask.shape[1] - 1)

    @property
    def offsets(self) -> frozenset:
        return frozenset((int(i), int(j)) for i, j in np.argwhere(self.mask))

    @property
    def vertices(self) -> frozenset:
        rx, ry = self.root
        return frozenset((rx + i, ry + j) for i, j in self.offsets)

    @property
    def card(self) -> int:
        return int(self.mask.sum())

    def same_offsets(self, other: "SubtreeOffsets") -> bool:
        return self.mask.shape == other.mask.shape and np.array_equal(self.mask, other.mask)

    def issubset(self, other: "SubtreeOffsets") -> bool:
        """Offset-set inclusion on the common offset window."""
        sx = min(self.mask.shape[0], other.mask.shape[0])
        sy = min(self.mask.shape[1], other.mask.shape[1])
        a = self.mask[:sx, :sy]
        return not np.any(a & ~other.mask[:sx, :sy])

    @classmethod
    def from_offsets(cls, root: Site, offsets, window_shape: SiteWindow) -> "SubtreeOffsets":
        m = np.zeros(window_shape.shape, dtype=bool)
        for i, j in offsets:
            m[i, j] = True
        return cls(tuple(root), m)


@dataclass(frozen=True)
class DiagonalProfile:
    alpha: tuple

    def __getitem__(self, n: int) -> int:
        return self.alpha[n] if 0 <= n < len(self.alpha) else 0

    def __len__(self):
        return len(self.alpha)


def build_forest(field: WeightField, grid: Optional[PassageTimeGrid] = None) -> ParentForest:
    grid = grid or passage_times(field)
    return ParentForest(field.window, grid.parent)


def subtree_offsets(forest: ParentForest, root: Sequence[int]) -> SubtreeOffsets:
    root = tuple(int(v) for v in root)
    if not forest.window.contains(root):
        raise DomainError(f"root {root} outside window {forest.window}")
    m = K.subtree_mask(forest.codes, root[0], root[1])
    m.flags.writeable = False
    return SubtreeOffsets(root, m)


def diagonal_profile(subtree: SubtreeOffsets) -> DiagonalProfile:
    """alpha[n] = number of subtree vertices on the anti-diagonal x + y = n,
    for n up to the far corner of the enclosing window."""
    rx, ry = subtree.root
    wx, wy = subtree.mask.shape
    n_max = rx + ry + wx + wy - 2
    alpha = np.zeros(n_max + 1, dtype=np.int64)
    i, j = np.nonzero(subtree.mask)
    np.add.at(alpha, rx + ry + i + j, 1)
    return DiagonalProfile(tuple(int(v) for v in alpha))


COLOR_NAMES = {K.NEUTRAL: "neutral", K.BLUE: "blue", K.RED: "red"}


@dataclass(frozen=True, eq=False)
class Coloring:
    """Competition coloring in the quadrant a + Z_+^2; codes use the kernel constants."""

    anchor: Site
    codes: np.ndarray

    def __getitem__(self, z) -> str:
        return COLOR_NAMES[int(self.codes[z[0], z[1]])]

    def sites(self, color: str) -> set:
        code = {v: k for k, v in COLOR_NAMES.items()}[color]
        return {(int(x), int(y)) for x, y in np.argwhere(self.codes == code)}


def competition_coloring(forest: ParentForest, a: Sequence[int]) -> Coloring:
    """Blue for T_{a+(1,1)}, red for the subtrees rooted at a+(x,0) and
    a+(0,x) with x >= 2, neutral elsewhere (including a, a+(1,0), a+(0,1))."""
    a = tuple(int(v) for v in a)
    if not forest.window.contains((a[0] + 1, a[1] + 1)):
        raise DomainError(f"quadrant at {a} holds no site a+(1,1) in window {forest.window}")
    return Coloring(a, K.coloring(forest.codes, a[0], a[1]))


def check_prefix_consistency(field: WeightField) -> bool:
    return bool(K.prefix_consistent(field.weights))
