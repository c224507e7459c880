"""Monotone predicates on subtree offset sets.

A predicate only ever sees the offset mask of a subtree, never its parent
structure, so every predicate built here is a function of ``V(T) - r(T)``.
All built-in kinds are monotone under inclusion of offset sets, and ``&`` /
``|`` preserve that.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConfigurationError
from .tree import SubtreeOffsets


class GrowthPredicate:
    def holds(self, mask: np.ndarray) -> bool:
        raise NotImplementedError

    def __call__(self, subtree: SubtreeOffsets) -> bool:
        return self.holds(subtree.mask)

    def __and__(self, other):
        return AllOf((self, other))

    def __or__(self, other):
        return AnyOf((self, other))


def _check_int(name, v):
    if isinstance(v, float) and math.isinf(v):
        raise ConfigurationError(f"{name}: infinite parameter; window surrogates must be finite")
    if isinstance(v, bool) or int(v) != v:
        raise ConfigurationError(f"{name}: parameter must be an integer, got {v!r}")
    if v < 0:
        raise ConfigurationError(f"predicate parameter out of range: {name}:{v}")
    return int(v)


@dataclass(frozen=True)
class CardAtLeast(GrowthPredicate):
    k: int

    def __post_init__(self):
        object.__setattr__(self, "k", _check_int("card", self.k))

    def holds(self, mask):
        return self.k == 0 or int(np.count_nonzero(mask)) >= self.k

    def __str__(self):
        return f"card:{self.k}"


@dataclass(frozen=True)
class ReachesDiagonal(GrowthPredicate):
    """Some offset o has o_x + o_y >= n."""

    n: int

    def __post_init__(self):
        object.__setattr__(self, "n", _check_int("diag", self.n))

    def holds(self, mask):
        if self.n == 0:
            return True
        wx, wy = mask.shape
        if self.n > wx + wy - 2:
            return False
        i, j = np.nonzero(mask)
        return bool(i.size) and int((i + j).max()) >= self.n

    def __str__(self):
        return f"diag:{self.n}"


@dataclass(frozen=True)
class ContainsOffsets(GrowthPredicate):
    offsets: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        pts = frozenset((_check_int("contains", x), _check_int("contains", y)) for x, y in self.offsets)
        object.__setattr__(self, "offsets", pts)

    def holds(self, mask):
        wx, wy = mask.shape
        return all(x < wx and y < wy and mask[x, y] for x, y in self.offsets)

    def __str__(self):
        return "contains:" + ";".join(f"({x},{y})" for x, y in sorted(self.offsets))


@dataclass(frozen=True)
class AllOf(GrowthPredicate):
    parts: tuple

    def holds(self, mask):
        return all(p.holds(mask) for p in self.parts)

    def __str__(self):
        return "&".join(str(p) for p in self.parts)


@dataclass(frozen=True)
class AnyOf(GrowthPredicate):
    parts: tuple

    def holds(self, mask):
        return any(p.holds(mask) for p in self.parts)

    def __str__(self):
        return "|".join(str(p) for p in self.parts)


def make_predicate(kind: str, params) -> GrowthPredicate:
    if kind in ("card", "card_at_least"):
        return CardAtLeast(params)
    if kind in ("diag", "reaches_diagonal"):
        return ReachesDiagonal(params)
    if kind in ("contains", "contains_offsets"):
        return ContainsOffsets(frozenset(map(tuple, params)))
    raise ConfigurationError(f"unknown predicate kind {kind!r}")


_PAIR = re.compile(r"^\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)$")


def _parse_atom(text: str) -> GrowthPredicate:
    kind, sep, arg = text.strip().partition(":")
    kind = kind.strip()
    if not sep:
        raise ConfigurationError(f"malformed predicate {text!r}")
    if kind in ("card", "diag"):
        arg = arg.strip()
        if arg.lower() in ("inf", "infinity", "oo"):
            raise ConfigurationError(f"{kind}: infinite parameter; window surrogates must be finite")
        try:
            v = int(arg)
        except ValueError:
            raise ConfigurationError(f"malformed predicate {text!r}") from None
        return make_predicate(kind, v)
    if kind == "contains":
        pts = []
        for chunk in filter(None, (c.strip() for c in arg.split(";"))):
            m = _PAIR.match(chunk)
            if not m:
                raise ConfigurationError(f"malformed offset {chunk!r} in {text!r}")
            pts.append((int(m.group(1)), int(m.group(2))))
        return make_predicate("contains", pts)
    raise ConfigurationError(f"unknown predicate kind {kind!r}")


def parse_predicate(text: str) -> GrowthPredicate:
    """Parse ``card:k``, ``diag:n``, ``contains:(x1,y1);(x2,y2)`` joined by
    ``&`` and ``|`` (``&`` binds tighter)."""
    if not text or not text.strip():
        raise ConfigurationError("empty predicate")
    parsed = []
    for alt in text.split("|"):
        conj = [_parse_atom(c) for c in alt.split("&")]
        parsed.append(conj[0] if len(conj) == 1 else AllOf(tuple(conj)))
    return parsed[0] if len(parsed) == 1 else AnyOf(tuple(parsed))


def evaluate(pred: GrowthPredicate, subtree: SubtreeOffsets) -> bool:
    return bool(pred(subtree))


@dataclass
class SelftestReport:
    trials: int
    violations: int
    examples: list

    @property
    def ok(self) -> bool:
        return self.violations == 0


def monotone_selftest(pred: Callable[[SubtreeOffsets], bool], trials: int, seed: int,
                      max_side: int = 8, keep: int = 5) -> SelftestReport:
    """Sample nested offset sets S <= S' and count cases with pred(S) and not pred(S')."""
    if trials < 1:
        raise ConfigurationError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    bad, examples = 0, []
    for _ in range(trials):
        wx, wy = rng.integers(1, max_side + 1, size=2)
        p_small, p_extra = rng.uniform(0, 1, size=2)
        small = rng.random((wx, wy)) < p_small
        small[0, 0] = True
        big = small | (rng.random((wx, wy)) < p_extra)
        s = SubtreeOffsets((0, 0), small)
        b = SubtreeOffsets((0, 0), big)
        if pred(s) and not pred(b):
            bad += 1
            if len(examples) < keep:
                examples.append((s.offsets, b.offsets))
    return SelftestReport(trials, bad, examples)
