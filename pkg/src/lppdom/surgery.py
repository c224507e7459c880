"""Configuration surgery: translated-and-corrected fields and the lemma checks
that make the subtree comparisons work, evaluated instance by instance.

Quantities are in the field's storage units (exact integers in integer mode).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _kernels as K
from .errors import DomainError, PreconditionError
from .events import in_omega_lower
from .lpp import PassageTimeGrid, passage_times
from .tree import build_forest, subtree_offsets
from .weights import (AxisPerturbation, DistributionSpec, SiteWindow, WeightField,
                      apply_perturbation, sample_field, translate_field)

RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class SurgeryResult:
    base: WeightField
    translated: WeightField
    eps: AxisPerturbation
    result: WeightField
    anchor: tuple


def _py(v):
    return v.item() if hasattr(v, "item") else v


def build_config_a(field: WeightField, a: Sequence[int],
                   grid: Optional[PassageTimeGrid] = None) -> SurgeryResult:
    """Translate by ``a`` and correct the axes so passage times are carried over.

    The correction is computed from the induction formula: at the new origin it
    is the better of the two passage times entering ``a``; on each axis it is
    the positive part of the advantage of entering from outside the quadrant.
    """
    a = tuple(int(v) for v in a)
    if not field.window.contains(a):
        raise DomainError(f"anchor {a} outside window {field.window}")
    grid = grid or passage_times(field)
    g = grid.g
    ax, ay = a
    nx, ny = field.window.nx, field.window.ny
    entering = [grid.at((ax - 1, ay)), grid.at((ax, ay - 1))]
    entering = [v for v in entering if v is not None]
    e00 = max(entering) if entering else 0 * g[0, 0].item()
    if ay == 0:
        ex = np.zeros(nx - ax, dtype=g.dtype)
    else:
        ex = np.maximum(g[ax + 1:, ay - 1] - g[ax:nx, ay], 0)
    if ax == 0:
        ey = np.zeros(ny - ay, dtype=g.dtype)
    else:
        ey = np.maximum(g[ax - 1, ay + 1:] - g[ax, ay:ny], 0)
    eps = AxisPerturbation(_py(e00), ex.tolist(), ey.tolist())
    translated = translate_field(field, a)
    return SurgeryResult(field, translated, eps, apply_perturbation(translated, eps), a)


def build_config_b(field: WeightField, m: int,
                   grid: Optional[PassageTimeGrid] = None) -> SurgeryResult:
    """Translate by b = (m-1, 0), correcting only the origin and the y-axis."""
    if m < 1 or not field.window.contains((m - 1, 0)):
        raise DomainError(f"m = {m} out of range for window {field.window}")
    grid = grid or passage_times(field)
    g = grid.g
    bx = m - 1
    ny = field.window.ny
    if bx == 0:
        e00 = 0 * g[0, 0].item()
        ey = np.zeros(ny, dtype=g.dtype)
    else:
        e00 = g[bx - 1, 0].item()
        ey = np.maximum(g[bx - 1, 1:] - g[bx, :ny], 0)
    eps = AxisPerturbation(e00, [0] * (field.window.nx - bx), ey.tolist())
    translated = translate_field(field, (bx, 0))
    return SurgeryResult(field, translated, eps, apply_perturbation(translated, eps), (bx, 0))


def satisfies_condeps(eps: AxisPerturbation) -> bool:
    """eps(0,1) + eps(0,2) >= eps(1,0) and eps(1,0) + eps(2,0) >= eps(0,1)."""
    if len(eps.ex) < 2 or len(eps.ey) < 2:
        raise PreconditionError("perturbation must reach (2,0) and (0,2)")
    e10, e20 = eps.ex[0], eps.ex[1]
    e01, e02 = eps.ey[0], eps.ey[1]
    return bool(e01 + e02 >= e10 and e10 + e20 >= e01)


def _close(a: np.ndarray, b: np.ndarray, exact: bool) -> bool:
    if a.shape != b.shape:
        return False
    if exact:
        return bool(np.array_equal(a, b))
    return bool(np.allclose(a, b, rtol=RTOL, atol=0.0))


def verify_length_conjugacy(s: SurgeryResult) -> bool:
    """Passage times of the surgered field equal the base's, seen from the anchor."""
    ax, ay = s.anchor
    g_res = passage_times(s.result).g
    g_base = passage_times(s.base).g[ax:, ay:]
    return _close(g_res, g_base, s.base.is_integer)


def verify_subtree_shift(s: SurgeryResult) -> bool:
    """The (1,1)-subtree of the surgered field is the anchor+(1,1) subtree of the base."""
    ax, ay = s.anchor
    if not s.base.window.contains((ax + 1, ay + 1)):
        raise PreconditionError("anchor + (1,1) must lie in the base window")
    t_res = subtree_offsets(build_forest(s.result), (1, 1))
    t_base = subtree_offsets(build_forest(s.base), (ax + 1, ay + 1))
    return t_res.same_offsets(t_base)


def subtree_inclusion(field: WeightField, eps: AxisPerturbation) -> bool:
    """V(T_(1,1)) under field + eps is contained in V(T_(1,1)) under field."""
    perturbed = apply_perturbation(field, eps)
    t_new = subtree_offsets(build_forest(perturbed), (1, 1))
    t_old = subtree_offsets(build_forest(field), (1, 1))
    return t_new.issubset(t_old)


def _check_common(field: WeightField, eps: AxisPerturbation) -> WeightField:
    if not field.window.contains((1, 1)):
        raise PreconditionError("window must contain (1,1)")
    if len(eps.ex) > field.window.nx or len(eps.ey) > field.window.ny:
        raise PreconditionError("perturbation support exceeds window")
    if any(v < 0 for v in eps.ex) or any(v < 0 for v in eps.ey):
        raise PreconditionError("perturbation must be >= 0 on the axes off the origin")
    try:
        return apply_perturbation(field, eps)
    except DomainError as exc:
        raise PreconditionError(str(exc)) from None


def verify_inclusion(field: WeightField, eps: AxisPerturbation, mode: str) -> bool:
    """Check the subtree inclusion under the hypotheses of ``mode``.

    thm2: eps on both axes with the two cross conditions of satisfies_condeps.
    thm3: eps on the origin and y-axis only, field and field + eps in Omega_1.
    Inputs outside the hypotheses raise PreconditionError.
    """
    perturbed = _check_common(field, eps)
    if mode == "thm2":
        if len(eps.ex) < 2 or len(eps.ey) < 2:
            raise PreconditionError("thm2 needs a window holding (2,0) and (0,2)")
        if not satisfies_condeps(eps):
            raise PreconditionError("perturbation violates the cross conditions")
    elif mode == "thm3":
        if any(v != 0 for v in eps.ex):
            raise PreconditionError("thm3 perturbation must vanish on the x-axis")
        if not in_omega_lower(field, 1):
            raise PreconditionError("field is not in Omega_1")
        if not in_omega_lower(perturbed, 1):
            raise PreconditionError("field + eps is not in Omega_1")
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return subtree_inclusion(field, eps)


def verify_omega_equivalence(field: WeightField, m: int,
                             grid: Optional[PassageTimeGrid] = None) -> bool:
    if not field.window.contains((m, 1)):
        raise PreconditionError(f"(m,1) = {(m, 1)} outside window")
    grid = grid or passage_times(field)
    s = build_config_b(field, m, grid)
    return in_omega_lower(field, m, grid) == in_omega_lower(s.result, 1)


def strict_gain_violations(field: WeightField, eps: AxisPerturbation,
                           sites: Optional[Iterable] = None) -> list:
    """Sites z where the low-optimal path changes under field + eps but the
    perturbation mass on the new path does not strictly exceed that on the old."""
    perturbed = apply_perturbation(field, eps)
    p_old = passage_times(field).parent
    p_new = passage_times(perturbed).parent
    e = eps.as_array(field.window, dtype=field.weights.dtype if field.is_integer else np.float64)
    bad = []
    for z in (sites if sites is not None else field.window.sites()):
        old = K.backtrack(p_old, z[0], z[1])
        new = K.backtrack(p_new, z[0], z[1])
        if np.array_equal(old, new):
            continue
        if not e[old[:, 0], old[:, 1]].sum() < e[new[:, 0], new[:, 1]].sum():
            bad.append(tuple(z))
    return bad


def random_condeps_eps(window: SiteWindow, rng: np.random.Generator, integer: bool = True,
                       high: int = 6) -> AxisPerturbation:
    """A random nonnegative axis perturbation meeting the cross conditions."""
    while True:
        ex = rng.integers(0, high + 1, size=window.nx)
        ey = rng.integers(0, high + 1, size=window.ny)
        e00 = int(rng.integers(0, high + 1))
        if not integer:
            ex, ey, e00 = ex * rng.random(), ey * rng.random(), e00 * rng.random()
        eps = AxisPerturbation(e00, ex.tolist(), ey.tolist())
        if satisfies_condeps(eps):
            return eps


def find_inclusion_counterexample(spec: DistributionSpec, window: SiteWindow, trials: int,
                                  seed: int, scale: Optional[int] = 1, high: int = 6):
    """Negative control: search for nonnegative axis perturbations that break the
    cross conditions and also break the inclusion. Returns (field, eps) or None."""
    rng = np.random.default_rng(seed)
    for r in range(trials):
        field = sample_field(spec, window, seed, r, scale=scale)
        ex = rng.integers(0, high + 1, size=window.nx)
        ey = rng.integers(0, high + 1, size=window.ny)
        eps = AxisPerturbation(0, ex.tolist(), ey.tolist())
        if satisfies_condeps(eps):
            continue
        if not subtree_inclusion(field, eps):
            return field, eps
    return None
