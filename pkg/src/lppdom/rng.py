"""Counter-based uniforms addressed by (seed, replicate, site).

Every draw is a pure function of its key, so a site's weight does not depend
on the window it is sampled in, on iteration order or on worker count.
The mixer is the splitmix64 finalizer applied to a chained key.
"""
from __future__ import annotations

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1


def _mix(h: np.ndarray) -> np.ndarray:
    h = h + _GOLDEN
    h = (h ^ (h >> np.uint64(30))) * _M1
    h = (h ^ (h >> np.uint64(27))) * _M2
    return h ^ (h >> np.uint64(31))


def _as_u64(v) -> np.ndarray:
    # signed coordinates wrap to their two's-complement bit pattern
    return np.asarray(v, dtype=np.int64).astype(np.uint64)


def site_hash(seed: int, replicate: int, xs, ys, stream: int = 0) -> np.ndarray:
    """64-bit hash of (seed, replicate, stream, x, y), broadcast over xs/ys."""
    with np.errstate(over="ignore"):
        k = _mix(np.full((), int(seed) & _MASK64, dtype=np.uint64))
        k = _mix(k ^ np.uint64(int(replicate) & _MASK64))
        k = _mix(k ^ np.uint64(int(stream) & _MASK64))
        h = _mix(k ^ _as_u64(xs))
        return _mix(h ^ _as_u64(ys))


def site_uniforms(seed: int, replicate: int, xs, ys, stream: int = 0) -> np.ndarray:
    """Uniforms on the open interval (0, 1), one per (x, y) pair."""
    h = site_hash(seed, replicate, xs, ys, stream)
    return ((h >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53
