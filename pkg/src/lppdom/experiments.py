"""Per-replicate theorem audits and coupled Monte-Carlo estimates.

Every replicate draws one field and evaluates both sides of a comparison on
it, so a left-hand event that implies the right-hand one replicate by
replicate gives ``p_lhs <= p_rhs`` exactly, not just in expectation.

Replicates are processed in fixed-size blocks; blocks can run on a process
pool (``workers`` or ``LPPDOM_WORKERS``) and are concatenated in block order,
so results never depend on worker count.
"""
from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field as dc_field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.stats import binomtest

from . import _kernels as K
from .errors import ConfigurationError
from .events import EventSpec, event_membership, in_omega_lower, in_omega_upper  # noqa: F401
from .lpp import passage_times
from .predicates import GrowthPredicate, parse_predicate
from .tree import build_forest, diagonal_profile, subtree_offsets
from .weights import DistributionSpec, SiteWindow, WeightField, sample_field

BLOCK = 256


@dataclass(frozen=True)
class Theorem:
    """thm2 at anchor ``a`` or thm3 at index ``m``."""

    kind: str
    a: tuple = (0, 0)
    m: int = 1

    def __post_init__(self):
        if self.kind not in ("thm2", "thm3"):
            raise ConfigurationError(f"unknown theorem {self.kind!r}")
        object.__setattr__(self, "a", tuple(int(v) for v in self.a))
        if self.kind == "thm2" and min(self.a) < 0:
            raise ConfigurationError("anchor must lie in Z_+^2")
        if self.kind == "thm3" and self.m < 1:
            raise ConfigurationError("m must be >= 1")

    @classmethod
    def thm2(cls, a: Sequence[int]) -> "Theorem":
        return cls("thm2", a=tuple(a))

    @classmethod
    def thm3(cls, m: int) -> "Theorem":
        return cls("thm3", m=int(m))

    def check_window(self, window: SiteWindow) -> None:
        far = (self.a[0] + 1, self.a[1] + 1) if self.kind == "thm2" else (self.m, 1)
        if not window.contains(far):
            raise ConfigurationError(f"window too small: {self} needs {far} inside {window}")

    def __str__(self):
        if self.kind == "thm2":
            return f"thm2(a={self.a[0]},{self.a[1]})"
        return f"thm3(m={self.m})"


@dataclass(frozen=True)
class AuditRecord:
    replicate: int
    event_member: bool
    lhs_pred: bool
    rhs_pred: bool
    implication_ok: bool

    @classmethod
    def make(cls, replicate, event, lhs, rhs) -> "AuditRecord":
        event, lhs, rhs = bool(event), bool(lhs), bool(rhs)
        return cls(int(replicate), event, lhs, rhs, (not (event and lhs)) or rhs)


def _theorem_sides(field: WeightField, p: np.ndarray, th: Theorem):
    """(event, lhs offset mask, rhs gate, rhs offset mask) for one field."""
    w = field.weights
    if th.kind == "thm2":
        ax, ay = th.a
        event = K.on_path(p, ax + 1, ay, ax, ay) and K.on_path(p, ax, ay + 1, ax, ay)
        lhs = K.subtree_mask(p, ax + 1, ay + 1)
        tp = K.parents(K.passage_times(np.ascontiguousarray(w[ax:, ay:])))
        gate = True
    else:
        m = th.m
        event = p[m, 1] == K.BELOW
        lhs = K.subtree_mask(p, m, 1)
        tp = K.parents(K.passage_times(np.ascontiguousarray(w[m - 1:, :])))
        gate = tp[1, 1] == K.BELOW
    rhs = K.subtree_mask(tp, 1, 1)
    # both offset windows are [0, nx-ax-1] x [0, ny-ay-1] (thm3: ax = m-1, ay = 0)
    assert lhs.shape == rhs.shape, (lhs.shape, rhs.shape)
    return bool(event), lhs, bool(gate), rhs


def audit_replicate(field: WeightField, theorem: Theorem, pred: GrowthPredicate) -> AuditRecord:
    """thm2(a): event = field in Omega^a, lhs = pred(T_{a+(1,1)}),
    rhs = pred(T_(1,1) of the field translated by a).
    thm3(m): event = field in Omega_m, lhs = pred(T_(m,1)), rhs = translated
    field (by (m-1, 0)) in Omega_1 and pred on its T_(1,1)."""
    theorem.check_window(field.window)
    p = passage_times(field).parent
    event, lhs, gate, rhs = _theorem_sides(field, p, theorem)
    return AuditRecord.make(field.replicate, event, pred.holds(lhs), gate and pred.holds(rhs))


# -- block runner -----------------------------------------------------------

def resolve_workers(workers: Optional[int] = None) -> int:
    if workers is None:
        env = os.environ.get("LPPDOM_WORKERS")
        workers = int(env) if env else 1
    return max(1, int(workers))


def map_blocks(fn: Callable, args: tuple, replicates: int, workers: Optional[int] = None) -> dict:
    """Run ``fn(args, start, stop)`` over fixed blocks and concatenate each
    returned array in block order."""
    bounds = [(s, min(s + BLOCK, replicates)) for s in range(0, replicates, BLOCK)]
    workers = resolve_workers(workers)
    if workers > 1 and len(bounds) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(fn, [args] * len(bounds), *zip(*bounds)))
    else:
        parts = [fn(args, s, e) for s, e in bounds]
    if not parts:
        return {}
    return {k: np.concatenate([pt[k] for pt in parts]) for k in parts[0]}


def _audit_block(args, start, stop):
    theorems, preds, spec, window, seed, scale, want_uncond = args
    spec = DistributionSpec.parse(spec)
    preds = [parse_predicate(s) for s in preds]
    n, T, P = stop - start, len(theorems), len(preds)
    event = np.zeros((n, T), bool)
    lhs = np.zeros((n, T, P), bool)
    rhs = np.zeros((n, T, P), bool)
    uncond = np.zeros((n, P), bool)
    for i, r in enumerate(range(start, stop)):
        field = sample_field(spec, window, seed, r, scale=scale)
        p = K.parents(K.passage_times(field.weights))
        for t, th in enumerate(theorems):
            ev, lm, gate, rm = _theorem_sides(field, p, th)
            event[i, t] = ev
            for k, pred in enumerate(preds):
                lhs[i, t, k] = pred.holds(lm)
                rhs[i, t, k] = gate and pred.holds(rm)
        if want_uncond:
            m11 = K.subtree_mask(p, 1, 1)
            for k, pred in enumerate(preds):
                uncond[i, k] = pred.holds(m11)
    return {"event": event, "lhs": lhs, "rhs": rhs, "uncond": uncond}


@dataclass
class AuditRun:
    """Outcome arrays of a batch of audits: ``event[r, t]``, ``lhs[r, t, k]``,
    ``rhs[r, t, k]`` for replicate r, theorem t and predicate k."""

    theorems: list
    preds: list
    spec: str
    window: SiteWindow
    seed: int
    scale: Optional[int]
    event: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray
    uncond: np.ndarray
    elapsed_ms: float

    @property
    def replicates(self) -> int:
        return self.event.shape[0]

    def failures(self, t: int, k: int) -> np.ndarray:
        """Replicate indices where event and lhs hold but rhs fails."""
        bad = self.event[:, t] & self.lhs[:, t, k] & ~self.rhs[:, t, k]
        return np.flatnonzero(bad)

    def records(self, t: int = 0, k: int = 0) -> list:
        return [AuditRecord.make(r, self.event[r, t], self.lhs[r, t, k], self.rhs[r, t, k])
                for r in range(self.replicates)]


def run_audits(theorems: Sequence[Theorem], preds: Sequence, spec, window: SiteWindow,
               replicates: int, seed: int, scale: Optional[int] = None,
               workers: Optional[int] = None, unconditional: bool = False) -> AuditRun:
    """Audit every (theorem, predicate) pair on the same sampled fields."""
    if replicates < 0:
        raise ConfigurationError("replicates must be >= 0")
    for th in theorems:
        th.check_window(window)
    pred_strs = [str(p) if isinstance(p, GrowthPredicate) else str(parse_predicate(p)) for p in preds]
    spec_str = str(spec if isinstance(spec, DistributionSpec) else DistributionSpec.parse(spec))
    t0 = time.perf_counter()
    args = (list(theorems), pred_strs, spec_str, window, int(seed), scale, unconditional)
    out = map_blocks(_audit_block, args, replicates, workers)
    if not out:
        T, P = len(theorems), len(pred_strs)
        out = {"event": np.zeros((0, T), bool), "lhs": np.zeros((0, T, P), bool),
               "rhs": np.zeros((0, T, P), bool), "uncond": np.zeros((0, P), bool)}
    return AuditRun(list(theorems), pred_strs, spec_str, window, int(seed), scale,
                    out["event"], out["lhs"], out["rhs"], out["uncond"],
                    (time.perf_counter() - t0) * 1e3)


# -- estimation -------------------------------------------------------------

def wilson(k: int, n: int) -> tuple:
    if n == 0:
        return (0.0, 1.0)
    ci = binomtest(int(k), int(n)).proportion_ci(confidence_level=0.95, method="wilson")
    return (float(ci.low), float(ci.high))


def joint_se(a: np.ndarray, b: np.ndarray) -> float:
    """Standard error of mean(a) - mean(b) for paired per-replicate indicators."""
    n = len(a)
    if n < 2:
        return 0.0
    d = a.astype(float) - b.astype(float)
    return float(d.std(ddof=1) / math.sqrt(n))


@dataclass
class EstimationReport:
    params: dict
    replicates: int
    counts: dict
    p_hat: dict
    ci_low: dict
    ci_high: dict
    seed: int
    elapsed_ms: Optional[float] = None
    extra: dict = dc_field(default_factory=dict)

    @classmethod
    def from_counts(cls, params: dict, n: int, counts: dict, seed: int, scale_cells=None,
                    **kw) -> "EstimationReport":
        p_hat, lo, hi = {}, {}, {}
        for key, c in counts.items():
            if key in (scale_cells or ()):
                continue
            p_hat[key] = c / n if n else 0.0
            lo[key], hi[key] = wilson(c, n)
        return cls(params, n, counts, p_hat, lo, hi, seed, **kw)

    def to_dict(self, timing: bool = False) -> dict:
        d = {"params": dict(self.params, replicates=self.replicates), "counts": self.counts,
             "p_hat": self.p_hat, "ci_low": self.ci_low, "ci_high": self.ci_high,
             "seed": self.seed, "elapsed_ms": round(self.elapsed_ms, 3) if timing and self.elapsed_ms is not None else None}
        if self.extra:
            d["extra"] = self.extra
        return d


def report_from_run(run: AuditRun, t: int = 0, k: int = 0, product: Optional[bool] = None) -> EstimationReport:
    """Coupled estimate of P(lhs, event) against the right-hand side of one theorem."""
    th = run.theorems[t]
    n = run.replicates
    ev = run.event[:, t]
    lhs = ev & run.lhs[:, t, k]
    # thm2's right side is estimated in its coupled form P(event, rhs); thm3's
    # is P(translated field in Omega_1, rhs) and needs no event
    rhs = (ev & run.rhs[:, t, k]) if th.kind == "thm2" else run.rhs[:, t, k]
    counts = {"event": int(ev.sum()), "lhs": int(lhs.sum()), "rhs": int(rhs.sum()),
              "violations": int(len(run.failures(t, k)))}
    params = {"theorem": str(th), "pred": run.preds[k], "dist": run.spec,
              "window": str(run.window), "mode": "float" if run.scale is None else f"int:{run.scale}"}
    extra = {"joint_se": joint_se(lhs, rhs), "lhs_le_rhs": counts["lhs"] <= counts["rhs"]}
    if product is None:
        product = DistributionSpec.parse(run.spec).is_product
    if th.kind == "thm2" and product and run.uncond.shape[0] == n and n:
        counts["uncond_rhs"] = int(run.uncond[:, k].sum())
        extra["conditional_lhs"] = (counts["lhs"] / counts["event"]) if counts["event"] else None
        extra["unconditional_rhs"] = counts["uncond_rhs"] / n
    return EstimationReport.from_counts(params, n, counts, run.seed, scale_cells=("violations",),
                                        elapsed_ms=run.elapsed_ms, extra=extra)


def estimate_probabilities(theorem: Theorem, pred, spec, window: SiteWindow, replicates: int,
                           seed: int, scale: Optional[int] = None,
                           workers: Optional[int] = None) -> EstimationReport:
    if replicates < 1:
        raise ConfigurationError("replicates must be >= 1")
    spec = spec if isinstance(spec, DistributionSpec) else DistributionSpec.parse(spec)
    run = run_audits([theorem], [pred], spec, window, replicates, seed, scale, workers,
                     unconditional=theorem.kind == "thm2" and spec.is_product)
    return report_from_run(run)


# -- factor two ---------------------------------------------------------------

def _factor2_block(args, start, stop):
    m, pred, spec, window, seed, scale = args
    spec = DistributionSpec.parse(spec)
    pred = parse_predicate(pred)
    n = stop - start
    keys = ("upper", "lower_m", "lower_m1", "lhs", "tm_in_a", "big_right", "rhs1", "t11_in_a")
    out = {k: np.zeros(n, bool) for k in keys}
    for i, r in enumerate(range(start, stop)):
        f = sample_field(spec, window, seed, r, scale=scale)
        w = f.weights
        p = K.parents(K.passage_times(w))
        upper = K.on_path(p, m + 1, 0, m, 0) and K.on_path(p, m, 1, m, 0)
        out["upper"][i] = upper
        out["lower_m"][i] = p[m, 1] == K.BELOW
        out["lower_m1"][i] = p[m + 1, 1] == K.BELOW
        out["lhs"][i] = upper and pred.holds(K.subtree_mask(p, m + 1, 1))
        out["tm_in_a"][i] = pred.holds(K.subtree_mask(p, m, 1))
        out["big_right"][i] = w[m + 1, 0] >= w[m, 1]
        t11 = pred.holds(K.subtree_mask(p, 1, 1))
        out["t11_in_a"][i] = t11
        out["rhs1"][i] = t11 and p[1, 1] == K.BELOW
    return out


def factor_two_experiment(m: int, pred, spec, window: SiteWindow, replicates: int, seed: int,
                          scale: Optional[int] = None, workers: Optional[int] = None) -> EstimationReport:
    """Compare P(T_{a+(1,1)} in A, Omega^a) for a = (m, 0) with 2 P(T_(1,1) in A, Omega_1),
    reporting the two split terms and checking the event identities per replicate."""
    if m < 1 or not window.contains((m + 1, 1)):
        raise ConfigurationError(f"window too small: factor-2 with m={m} needs {(m + 1, 1)} inside {window}")
    pred_s = str(pred) if isinstance(pred, GrowthPredicate) else str(parse_predicate(pred))
    spec_s = str(spec if isinstance(spec, DistributionSpec) else DistributionSpec.parse(spec))
    t0 = time.perf_counter()
    o = map_blocks(_factor2_block, (m, pred_s, spec_s, window, int(seed), scale), replicates, workers)
    n = replicates
    lhs = o["lhs"]
    split1 = lhs & ~o["big_right"]
    split2 = lhs & o["big_right"]
    lhs_m = o["lower_m"] & o["tm_in_a"]
    counts = {
        "lhs": int(lhs.sum()), "rhs": int(o["rhs1"].sum()), "split_below": int(split1.sum()),
        "split_above": int(split2.sum()), "lhs_thm3_m": int(lhs_m.sum()),
        "t11_in_a": int(o["t11_in_a"].sum()),
        "identity_violations": int((o["upper"] != o["lower_m"]).sum()),
        "split_below_violations": int((split1 & ~lhs_m).sum()),
        "inclusion_violations": int((o["lower_m"] & o["big_right"] & ~o["lower_m1"]).sum()),
    }
    se = joint_se(lhs, 2 * o["rhs1"].astype(int))
    se_sym = joint_se(2 * o["rhs1"].astype(int), o["t11_in_a"])
    p_lhs, p_rhs, p_t11 = counts["lhs"] / n, counts["rhs"] / n, counts["t11_in_a"] / n
    extra = {
        "two_rhs": 2 * p_rhs, "joint_se": se, "bound_ok": p_lhs <= 2 * p_rhs + 3 * se,
        "symmetric_joint_se": se_sym, "symmetric_ok": 2 * p_rhs <= p_t11 + 3 * se_sym,
    }
    params = {"experiment": "factor2", "m": m, "a": [m, 0], "pred": pred_s, "dist": spec_s,
              "window": str(window), "mode": "float" if scale is None else f"int:{scale}"}
    skip = ("identity_violations", "split_below_violations", "inclusion_violations")
    return EstimationReport.from_counts(params, n, counts, int(seed), scale_cells=skip,
                                        elapsed_ms=(time.perf_counter() - t0) * 1e3, extra=extra)


# -- monotonicity scan --------------------------------------------------------

def _scan_block(args, start, stop):
    ms, pred, spec, window, seed, scale = args
    spec = DistributionSpec.parse(spec)
    pred = parse_predicate(pred)
    hit = np.zeros((stop - start, len(ms)), bool)
    for i, r in enumerate(range(start, stop)):
        f = sample_field(spec, window, seed, r, scale=scale)
        p = K.parents(K.passage_times(f.weights))
        for j, m in enumerate(ms):
            hit[i, j] = p[m, 1] == K.BELOW and pred.holds(K.subtree_mask(p, m, 1))
    return {"hit": hit}


@dataclass
class ScanReport:
    status: str
    params: dict
    replicates: int
    seed: int
    curve: list
    flags: list

    def to_dict(self, timing: bool = False) -> dict:
        return asdict(self)


def monotonicity_scan(pred, spec, window: SiteWindow, m_range: Sequence[int], replicates: int,
                      seed: int, scale: Optional[int] = None, workers: Optional[int] = None) -> ScanReport:
    """Coupled estimates of m -> P(T_(m,1) in A, Omega_m). Increases larger than two
    joint standard errors are flagged; this is informational only."""
    ms = [int(m) for m in m_range]
    if not ms or min(ms) < 1 or not window.contains((max(ms), 1)):
        raise ConfigurationError(f"window too small for m range {ms} in {window}")
    pred_s = str(pred) if isinstance(pred, GrowthPredicate) else str(parse_predicate(pred))
    spec_s = str(spec if isinstance(spec, DistributionSpec) else DistributionSpec.parse(spec))
    hit = map_blocks(_scan_block, (ms, pred_s, spec_s, window, int(seed), scale), replicates, workers)["hit"]
    n = replicates
    curve = []
    for j, m in enumerate(ms):
        c = int(hit[:, j].sum())
        lo, hi = wilson(c, n)
        curve.append({"m": m, "count": c, "p_hat": c / n, "ci_low": lo, "ci_high": hi})
    flags = []
    for j in range(len(ms) - 1):
        se = joint_se(hit[:, j + 1], hit[:, j])
        inc = curve[j + 1]["p_hat"] - curve[j]["p_hat"]
        if inc > 2 * se and inc > 0:
            flags.append({"from_m": ms[j], "to_m": ms[j + 1], "increase": inc, "joint_se": se})
    params = {"experiment": "scan", "pred": pred_s, "dist": spec_s, "window": str(window),
              "m_range": ms, "mode": "float" if scale is None else f"int:{scale}"}
    return ScanReport("CONJECTURE", params, n, int(seed), curve, flags)


# -- coexistence --------------------------------------------------------------

@dataclass
class CoexistenceProfile:
    alpha: tuple
    reach: int
    edge: int
    edge_ratio: float
    nontrivial: bool

    def to_dict(self, timing: bool = False) -> dict:
        return asdict(self)


def coexistence_statistics(field: WeightField) -> CoexistenceProfile:
    """Diagonal profile of T_(1,1), its furthest diagonal, alpha_N / N at the
    window edge N = nx + ny, and whether T_(1,1) reaches the far corner."""
    if not field.window.contains((1, 1)):
        raise ConfigurationError("window must contain (1,1)")
    prof = diagonal_profile(subtree_offsets(build_forest(field), (1, 1)))
    alpha = prof.alpha
    reach = max(n for n, a in enumerate(alpha) if a > 0)
    edge = field.window.nx + field.window.ny
    return CoexistenceProfile(alpha, reach, edge, alpha[edge] / edge, reach == edge)


def _coex_block(args, start, stop):
    spec, window, seed, scale = args
    spec = DistributionSpec.parse(spec)
    reach = np.zeros(stop - start, np.int64)
    edge_alpha = np.zeros(stop - start, np.int64)
    edge = window.nx + window.ny
    for i, r in enumerate(range(start, stop)):
        f = sample_field(spec, window, seed, r, scale=scale)
        mask = K.subtree_mask(K.parents(K.passage_times(f.weights)), 1, 1)
        ii, jj = np.nonzero(mask)
        d = ii + jj + 2
        reach[i] = d.max()
        edge_alpha[i] = int((d == edge).sum())
    return {"reach": reach, "edge_alpha": edge_alpha}


def coexistence_survey(spec, window: SiteWindow, replicates: int, seed: int,
                       scale: Optional[int] = None, workers: Optional[int] = None) -> dict:
    spec_s = str(spec if isinstance(spec, DistributionSpec) else DistributionSpec.parse(spec))
    o = map_blocks(_coex_block, (spec_s, window, int(seed), scale), replicates, workers)
    edge = window.nx + window.ny
    k = int((o["reach"] == edge).sum())
    lo, hi = wilson(k, replicates)
    return {"params": {"experiment": "coexist", "dist": spec_s, "window": str(window),
                       "replicates": replicates},
            "seed": int(seed), "edge": edge, "reach_edge_count": k,
            "p_reach_edge": k / replicates if replicates else 0.0, "ci_low": lo, "ci_high": hi,
            "mean_reach": float(o["reach"].mean()) if replicates else 0.0,
            "mean_edge_ratio": float(o["edge_alpha"].mean() / edge) if replicates else 0.0}
