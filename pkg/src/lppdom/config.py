"""Run configuration from command-line flags and/or a key=value file."""
from __future__ import annotations

import argparse
from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence

from .errors import ConfigurationError
from .experiments import Theorem
from .predicates import GrowthPredicate, parse_predicate
from .weights import DistributionSpec, SiteWindow

COMMANDS = ("sample", "audit", "estimate", "factor2", "scan", "coexist", "render")

# accepted config keys and their value types
KEYS = {
    "window": str, "dist": str, "seed": int, "reps": int, "replicate": int,
    "theorem": str, "a": str, "m": int, "m_range": str, "pred": str, "mode": str,
    "out": str, "csv": str, "json": str, "workers": int, "field": str,
    "render": str, "format": str, "timing": bool,
}

DEFAULTS = {"window": "16x16", "dist": "exp:1", "seed": 0, "reps": 1000, "replicate": 0,
            "theorem": "thm2", "a": "1,1", "m": 2, "m_range": "1..5", "pred": "card:3",
            "mode": "auto", "render": "forest", "format": "svg", "timing": False}


@dataclass
class RunConfig:
    command: str
    window: SiteWindow
    dist: DistributionSpec
    seed: int
    replicates: int
    replicate: int
    theorem: Theorem
    a: tuple
    m: int
    m_range: list
    pred: GrowthPredicate
    scale: Optional[int]
    out: Optional[str] = None
    csv: Optional[str] = None
    json: Optional[str] = None
    workers: Optional[int] = None
    field: Optional[str] = None
    render: str = "forest"
    format: str = "svg"
    timing: bool = False
    explicit: set = dc_field(default_factory=set)

    @property
    def mode(self) -> str:
        return "float" if self.scale is None else f"int:{self.scale}"


def read_config_file(path: str) -> dict:
    """key=value per line; '#' starts a comment."""
    out = {}
    try:
        lines = open(path).read().splitlines()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc.strerror}") from None
    for n, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep:
            raise ConfigurationError(f"{path}:{n}: expected key=value, got {raw!r}")
        if key == "command":
            out[key] = value.strip()
            continue
        if key not in KEYS:
            raise ConfigurationError(f"unknown key {key!r} in {path}:{n}")
        out[key] = value.strip()
    return out


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lppdom", exit_on_error=False,
                                 description="Last passage percolation subtree domination audits.")
    ap.add_argument("command", nargs="?", help=" | ".join(COMMANDS))
    ap.add_argument("--config")
    for key in KEYS:
        flag = "--" + key.replace("_", "-")
        if KEYS[key] is bool:
            ap.add_argument(flag, dest=key, action="store_const", const="true", default=None)
        else:
            ap.add_argument(flag, dest=key, default=None)
    return ap


def _site(text: str, key: str) -> tuple:
    try:
        x, y = (int(v) for v in text.replace("(", "").replace(")", "").split(","))
    except ValueError:
        raise ConfigurationError(f"{key}: expected 'x,y', got {text!r}") from None
    if x < 0 or y < 0:
        raise ConfigurationError(f"{key}: site must have nonnegative coordinates")
    return (x, y)


def _int(text, key) -> int:
    try:
        return int(text)
    except (TypeError, ValueError):
        raise ConfigurationError(f"{key}: expected an integer, got {text!r}") from None


def _m_range(text: str) -> list:
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise ConfigurationError(f"m_range: expected 'lo..hi' or a comma list, got {text!r}") from None


def _scale(mode: str, dist: DistributionSpec) -> Optional[int]:
    if mode == "auto":
        return 1 if dist.is_integer_valued else None
    if mode == "float":
        return None
    if mode == "int":
        return 1
    if mode.startswith("int:"):
        s = _int(mode[4:], "mode")
        if s < 1:
            raise ConfigurationError("mode: integer scale must be >= 1")
        return s
    raise ConfigurationError(f"mode: expected float, int or int:SCALE, got {mode!r}")


def parse_config(argv: Sequence[str], file: Optional[str] = None) -> RunConfig:
    """Resolve a RunConfig; flags override file values, which override defaults."""
    try:
        ns, unknown = _parser().parse_known_args(list(argv))
    except argparse.ArgumentError as exc:
        raise ConfigurationError(str(exc)) from None
    if unknown:
        raise ConfigurationError(f"unknown key {unknown[0]!r}")
    values = dict(DEFAULTS)
    explicit = set()
    cfg_path = file or ns.config
    if cfg_path:
        fv = read_config_file(cfg_path)
        values.update(fv)
        explicit |= set(fv)
    for key in KEYS:
        v = getattr(ns, key)
        if v is not None:
            values[key] = v
            explicit.add(key)
    command = ns.command or values.get("command")
    if command not in COMMANDS:
        raise ConfigurationError(f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}")

    window = SiteWindow.parse(values["window"])
    dist = DistributionSpec.parse(values["dist"])
    pred = parse_predicate(values["pred"])
    a = _site(values["a"], "a")
    m = _int(values["m"], "m")
    seed = _int(values["seed"], "seed")
    reps = _int(values["reps"], "reps")
    if reps < 0:
        raise ConfigurationError("reps must be >= 0")
    theorem_name = values["theorem"]
    if theorem_name == "thm2":
        theorem = Theorem.thm2(a)
    elif theorem_name == "thm3":
        if m < 1:
            raise ConfigurationError("m must be >= 1")
        theorem = Theorem.thm3(m)
    else:
        raise ConfigurationError(f"theorem: expected thm2 or thm3, got {theorem_name!r}")
    m_range = _m_range(values["m_range"])
    if command in ("audit", "estimate"):
        theorem.check_window(window)
    elif command == "factor2" and not window.contains((m + 1, 1)):
        raise ConfigurationError(f"window too small: factor2 with m={m} needs {(m + 1, 1)} inside {window}")
    elif command == "scan" and (min(m_range) < 1 or not window.contains((max(m_range), 1))):
        raise ConfigurationError(f"window too small for m range {m_range} in {window}")
    render = values["render"]
    if render not in ("forest", "coloring"):
        raise ConfigurationError(f"render: expected forest or coloring, got {render!r}")
    fmt = values["format"]
    if fmt not in ("svg", "ppm"):
        raise ConfigurationError(f"unsupported format {fmt!r}; expected svg or ppm")
    if command == "render" and render == "forest" and fmt == "ppm":
        raise ConfigurationError("unsupported format 'ppm' for forest rendering; use svg")
    timing = str(values["timing"]).lower() in ("1", "true", "yes")
    workers = _int(values["workers"], "workers") if values.get("workers") is not None else None
    return RunConfig(command, window, dist, seed, reps, _int(values["replicate"], "replicate"),
                     theorem, a, m, m_range, pred, _scale(values["mode"], dist),
                     values.get("out"), values.get("csv"), values.get("json"), workers,
                     values.get("field"), render, fmt, timing, explicit)
