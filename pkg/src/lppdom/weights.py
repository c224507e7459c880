"""Weight configurations on finite windows: sampling, translation, perturbation.

A window ``SiteWindow(nx, ny)`` is the rectangle {0..nx} x {0..ny}. Weights are
stored as an array indexed ``[x, y]``. In float mode the array is float64; in
integer-scaled mode it is int64 holding ``round(value * scale)``, and every
derived quantity (passage times, perturbations, path lengths) is expressed in
those same integer units so comparisons are exact.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Sequence

import numpy as np

from .errors import ConfigurationError, DomainError
from .rng import site_uniforms

Site = tuple[int, int]


@dataclass(frozen=True)
class SiteWindow:
    nx: int
    ny: int

    def __post_init__(self):
        if int(self.nx) != self.nx or int(self.ny) != self.ny:
            raise ConfigurationError(f"window sizes must be integers, got {self.nx}x{self.ny}")
        if self.nx < 0 or self.ny < 0:
            raise ConfigurationError(f"window sizes must be >= 0, got {self.nx}x{self.ny}")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nx + 1, self.ny + 1)

    @property
    def n_sites(self) -> int:
        return (self.nx + 1) * (self.ny + 1)

    def contains(self, z: Sequence[int]) -> bool:
        x, y = z
        return 0 <= x <= self.nx and 0 <= y <= self.ny

    def shifted(self, a: Sequence[int]) -> "SiteWindow":
        """The window seen from site ``a``: {0..nx-ax} x {0..ny-ay}."""
        if not self.contains(a):
            raise DomainError(f"site {tuple(a)} outside window {self}")
        return SiteWindow(self.nx - a[0], self.ny - a[1])

    def sites(self) -> Iterator[Site]:
        for x in range(self.nx + 1):
            for y in range(self.ny + 1):
                yield (x, y)

    @classmethod
    def parse(cls, text: str) -> "SiteWindow":
        """Parse ``"NXxNY"`` (e.g. ``"48x48"``)."""
        try:
            a, b = text.lower().split("x")
            return cls(int(a), int(b))
        except ValueError as exc:
            if isinstance(exc, ConfigurationError):
                raise
            raise ConfigurationError(f"malformed window {text!r}; expected NXxNY") from None

    def __str__(self) -> str:
        return f"{self.nx}x{self.ny}"


_KINDS = ("exponential", "geometric", "uniform", "constant", "bernoulli", "stencil_average")
_SHORT = {"exp": "exponential", "geom": "geometric", "unif": "uniform", "const": "constant",
          "bern": "bernoulli", "stencil": "stencil_average"}
_LONG = {v: k for k, v in _SHORT.items()}


@dataclass(frozen=True)
class DistributionSpec:
    """A sampleable translation-invariant weight law.

    ``params`` per kind: exponential (rate,), geometric (p,) on {1, 2, ...},
    uniform (lo, hi), constant (c,), bernoulli (p, low, high) giving ``high``
    with probability p, stencil_average (radius,) with ``base`` set.
    """

    kind: str
    params: tuple = ()
    base: Optional["DistributionSpec"] = None

    def __post_init__(self):
        k, p = self.kind, self.params
        if k not in _KINDS:
            raise ConfigurationError(f"unknown distribution kind {k!r}")
        need = {"exponential": 1, "geometric": 1, "uniform": 2, "constant": 1,
                "bernoulli": 3, "stencil_average": 1}[k]
        if len(p) != need:
            raise ConfigurationError(f"{k} takes {need} parameter(s), got {len(p)}")
        if any(not math.isfinite(v) for v in p):
            raise ConfigurationError(f"{k} parameters must be finite")
        if k == "exponential" and not p[0] > 0:
            raise ConfigurationError("exponential rate must be > 0")
        if k == "geometric" and not 0 < p[0] < 1:
            raise ConfigurationError("geometric p must lie in (0, 1)")
        if k == "uniform" and not (p[0] >= 0 and p[1] > p[0]):
            raise ConfigurationError("uniform needs 0 <= lo < hi")
        if k == "constant" and not p[0] >= 0:
            raise ConfigurationError("constant must be >= 0")
        if k == "bernoulli" and not (0 <= p[0] <= 1 and p[2] > p[1] >= 0):
            raise ConfigurationError("bernoulli needs p in [0, 1] and high > low >= 0")
        if k == "stencil_average":
            if self.base is None:
                raise ConfigurationError("stencil_average needs a base law")
            if p[0] < 0 or int(p[0]) != p[0]:
                raise ConfigurationError("stencil radius must be a nonnegative integer")
        elif self.base is not None:
            raise ConfigurationError(f"{k} takes no base law")

    @classmethod
    def exponential(cls, rate: float = 1.0):
        return cls("exponential", (float(rate),))

    @classmethod
    def geometric(cls, p: float):
        return cls("geometric", (float(p),))

    @classmethod
    def uniform(cls, lo: float, hi: float):
        return cls("uniform", (float(lo), float(hi)))

    @classmethod
    def constant(cls, c: float):
        return cls("constant", (float(c),))

    @classmethod
    def bernoulli(cls, p: float, low: float, high: float):
        return cls("bernoulli", (float(p), float(low), float(high)))

    @classmethod
    def stencil_average(cls, base: "DistributionSpec", radius: int):
        return cls("stencil_average", (int(radius),), base)

    @property
    def is_product(self) -> bool:
        return self.kind != "stencil_average"

    @property
    def is_integer_valued(self) -> bool:
        if self.kind == "geometric":
            return True
        if self.kind == "constant":
            return float(self.params[0]).is_integer()
        if self.kind == "bernoulli":
            return all(float(v).is_integer() for v in self.params[1:])
        return False

    @classmethod
    def parse(cls, text: str) -> "DistributionSpec":
        """Parse ``exp:1``, ``geom:0.5``, ``unif:0,1``, ``const:1``,
        ``bern:0.5,0,1`` or ``stencil:R:<base>``."""
        name, _, rest = text.strip().partition(":")
        kind = _SHORT.get(name, name)
        if kind not in _KINDS or not rest:
            raise ConfigurationError(f"malformed distribution {text!r}")
        try:
            if kind == "stencil_average":
                r, _, base = rest.partition(":")
                return cls.stencil_average(cls.parse(base), int(r))
            return cls(kind, tuple(float(v) for v in rest.split(",")))
        except ValueError as exc:
            if isinstance(exc, ConfigurationError):
                raise
            raise ConfigurationError(f"malformed distribution {text!r}") from None

    def __str__(self) -> str:
        if self.kind == "stencil_average":
            return f"stencil:{int(self.params[0])}:{self.base}"
        return _LONG[self.kind] + ":" + ",".join(f"{v:g}" for v in self.params)

    def _draw(self, u: np.ndarray) -> np.ndarray:
        k, p = self.kind, self.params
        if k == "exponential":
            return -np.log1p(-u) / p[0]
        if k == "geometric":
            return np.maximum(np.ceil(np.log1p(-u) / math.log1p(-p[0])), 1.0)
        if k == "uniform":
            return p[0] + (p[1] - p[0]) * u
        if k == "constant":
            return np.full(u.shape, p[0])
        if k == "bernoulli":
            return np.where(u < p[0], p[2], p[1])
        raise AssertionError(k)

    def sample_values(self, xs: np.ndarray, ys: np.ndarray, seed: int, replicate: int) -> np.ndarray:
        """Real-valued draws on the rectangle spanned by 1-d ``xs`` and ``ys``."""
        if self.kind == "stencil_average":
            r = int(self.params[0])
            ex = np.arange(xs[0] - r, xs[-1] + r + 1)
            ey = np.arange(ys[0] - r, ys[-1] + r + 1)
            ext = self.base.sample_values(ex, ey, seed, replicate)
            if r == 0:
                return ext
            win = np.lib.stride_tricks.sliding_window_view(ext, (2 * r + 1, 2 * r + 1))
            return win.mean(axis=(2, 3))
        gx, gy = np.meshgrid(xs, ys, indexing="ij")
        return self._draw(site_uniforms(seed, replicate, gx, gy))


@dataclass(frozen=True, eq=False)
class WeightField:
    """Nonnegative weights on a window.

    ``scale`` is None in float mode, else the integer scale of int64 storage.
    ``origin`` is the absolute lattice position of local site (0, 0), nonzero
    only for translated fields.
    """

    window: SiteWindow
    weights: np.ndarray
    scale: Optional[int] = None
    dist: str = "explicit"
    seed: int = 0
    replicate: int = 0
    origin: Site = (0, 0)

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.int64 if self.scale is not None else np.float64)
        if w.shape != self.window.shape:
            raise DomainError(f"weights shape {w.shape} does not match window {self.window}")
        if self.scale is not None and self.scale < 1:
            raise ConfigurationError("integer scale must be >= 1")
        if self.scale is None and not np.all(np.isfinite(w)):
            raise DomainError("weights must be finite")
        if np.any(w < 0):
            raise DomainError("weights must be nonnegative")
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    @property
    def is_integer(self) -> bool:
        return self.scale is not None

    @property
    def values(self) -> np.ndarray:
        """Weights in real units."""
        if self.scale is None:
            return self.weights
        return self.weights / self.scale

    def __getitem__(self, z: Sequence[int]):
        if not self.window.contains(z):
            raise DomainError(f"site {tuple(z)} outside window {self.window}")
        return self.weights[z[0], z[1]].item()

    def same_weights(self, other: "WeightField") -> bool:
        return (self.window == other.window and self.scale == other.scale
                and np.array_equal(self.weights, other.weights))

    def with_weights(self, weights: np.ndarray, window: Optional[SiteWindow] = None,
                     origin: Optional[Site] = None) -> "WeightField":
        return WeightField(window or self.window, weights, self.scale, self.dist,
                           self.seed, self.replicate, origin or self.origin)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]], scale: Optional[int] = None) -> "WeightField":
        """Build from rows indexed by y (row 0 is y = 0), columns by x."""
        arr = np.asarray(rows).T
        return cls(SiteWindow(arr.shape[0] - 1, arr.shape[1] - 1), arr, scale)


@dataclass(frozen=True)
class AxisPerturbation:
    """A perturbation supported on the two axes.

    ``ex[x - 1]`` is the amount added at (x, 0) and ``ey[y - 1]`` at (0, y);
    everything off the axes is zero. Units are those of the field it is
    applied to.
    """

    e00: float
    ex: tuple = ()
    ey: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "ex", tuple(self.ex))
        object.__setattr__(self, "ey", tuple(self.ey))

    @classmethod
    def zero(cls, window: SiteWindow) -> "AxisPerturbation":
        return cls(0, (0,) * window.nx, (0,) * window.ny)

    def at(self, z: Sequence[int]):
        x, y = z
        if x == 0 and y == 0:
            return self.e00
        if y == 0:
            return self.ex[x - 1] if x <= len(self.ex) else 0
        if x == 0:
            return self.ey[y - 1] if y <= len(self.ey) else 0
        return 0

    def as_array(self, window: SiteWindow, dtype=np.float64) -> np.ndarray:
        if len(self.ex) > window.nx or len(self.ey) > window.ny:
            raise DomainError("perturbation support exceeds window")
        out = np.zeros(window.shape, dtype=dtype)
        out[0, 0] = self.e00
        out[1:len(self.ex) + 1, 0] = self.ex
        out[0, 1:len(self.ey) + 1] = self.ey
        return out

    def path_sum(self, path) -> float:
        return sum(self.at(z) for z in path)


def sample_field(spec: DistributionSpec, window: SiteWindow, seed: int, replicate: int = 0,
                 scale: Optional[int] = None) -> WeightField:
    """Sample weights on ``window``; a pure function of its arguments.

    With ``scale`` set, weights are stored as ``round(value * scale)``.
    """
    xs = np.arange(window.nx + 1)
    ys = np.arange(window.ny + 1)
    vals = spec.sample_values(xs, ys, seed, replicate)
    if scale is not None:
        vals = np.rint(vals * scale).astype(np.int64)
    return WeightField(window, vals, scale, str(spec), int(seed), int(replicate))


def translate_field(field: WeightField, a: Sequence[int]) -> WeightField:
    """The translated configuration z -> field(a + z) on the shifted window."""
    win = field.window.shifted(a)
    ax, ay = a
    origin = (field.origin[0] + ax, field.origin[1] + ay)
    return field.with_weights(field.weights[ax:, ay:], win, origin)


def apply_perturbation(field: WeightField, eps: AxisPerturbation) -> WeightField:
    dtype = field.weights.dtype
    arr = eps.as_array(field.window, dtype=np.float64)
    if field.is_integer:
        if not np.all(arr == np.rint(arr)):
            raise DomainError("integer-mode perturbation must be integral in storage units")
        arr = arr.astype(np.int64)
    out = field.weights + arr.astype(dtype)
    if np.any(out < 0):
        bad = tuple(int(v) for v in np.argwhere(out < 0)[0])
        raise DomainError(f"perturbation makes weight at {bad} negative")
    return field.with_weights(out)


# -- JSON dump format ---------------------------------------------------------

def field_to_dict(field: WeightField) -> dict:
    rows = field.weights.T.tolist()
    d = {"window": [field.window.nx, field.window.ny], "dist": field.dist,
         "seed": int(field.seed), "replicate": int(field.replicate), "weights": rows}
    if field.scale is not None:
        d["scale"] = int(field.scale)
    return d


def field_to_json(field: WeightField) -> str:
    return json.dumps(field_to_dict(field), separators=(",", ":")) + "\n"


def field_from_dict(d: Mapping) -> WeightField:
    try:
        nx, ny = d["window"]
        rows = d["weights"]
    except (KeyError, TypeError, ValueError):
        raise ConfigurationError("field JSON needs 'window' and 'weights'") from None
    scale = d.get("scale")
    if scale is None and all(isinstance(v, int) for row in rows for v in row):
        scale = 1
    arr = np.asarray(rows, dtype=np.int64 if scale is not None else np.float64).T
    if arr.shape != (nx + 1, ny + 1):
        raise ConfigurationError(f"weights table is not ({ny + 1} rows x {nx + 1} cols)")
    return WeightField(SiteWindow(nx, ny), arr, scale, d.get("dist", "explicit"),
                       int(d.get("seed", 0)), int(d.get("replicate", 0)))


def field_from_json(text: str) -> WeightField:
    return field_from_dict(json.loads(text))


def load_field(path) -> WeightField:
    with open(path) as fh:
        return field_from_json(fh.read())
