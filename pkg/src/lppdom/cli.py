"""``lppdom`` command line.

Exit status: 0 on success, 1 when a hard invariant fails (an audit
violation or a broken event identity), 2 on configuration or I/O errors.
"""
from __future__ import annotations

import sys
from typing import Optional, Sequence

from .config import RunConfig, parse_config
from .errors import ConfigurationError, DomainError, LPPError
from .experiments import (coexistence_statistics, coexistence_survey, factor_two_experiment,
                          monotonicity_scan, report_from_run, run_audits)
from .io import OutputError, report_json, records_csv, report_csv, write_outputs, write_text
from .render import render_scene
from .weights import field_to_json, load_field, sample_field


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        write_text(path, text)
    else:
        sys.stdout.write(text)


def _field(cfg: RunConfig):
    if cfg.field:
        try:
            return load_field(cfg.field)
        except OSError as exc:
            raise ConfigurationError(f"cannot read field {cfg.field}: {exc.strerror}") from None
    return sample_field(cfg.dist, cfg.window, cfg.seed, cfg.replicate, cfg.scale)


def _audit(cfg: RunConfig) -> int:
    product = cfg.dist.is_product and cfg.theorem.kind == "thm2"
    run = run_audits([cfg.theorem], [cfg.pred], cfg.dist, cfg.window, cfg.replicates, cfg.seed,
                     cfg.scale, cfg.workers, unconditional=product)
    n = run.replicates
    bad = len(run.failures(0, 0))
    if cfg.command == "audit":
        csv_path = cfg.csv or cfg.out
        if csv_path:
            write_outputs(run.records(), None, {"csv": csv_path})
        else:
            sys.stdout.write(records_csv(run.records()))
        if cfg.json and n:
            write_outputs(None, report_from_run(run), {"json": cfg.json}, cfg.timing)
        print(f"violations: {bad}/{n}", file=sys.stderr)
        return 1 if bad else 0
    report = report_from_run(run)
    _emit(report_json(report, cfg.timing), cfg.json or cfg.out)
    if cfg.csv:
        write_text(cfg.csv, report_csv(report))
    print(f"p_lhs={report.p_hat['lhs']:.6g} p_rhs={report.p_hat['rhs']:.6g} "
          f"violations: {bad}/{n}", file=sys.stderr)
    return 1 if bad or report.counts["lhs"] > report.counts["rhs"] else 0


def run_command(cfg: RunConfig) -> int:
    try:
        if cfg.command == "sample":
            _emit(field_to_json(_field(cfg)), cfg.out)
            return 0
        if cfg.command in ("audit", "estimate"):
            if cfg.command == "estimate" and cfg.replicates < 1:
                raise ConfigurationError("estimate needs reps >= 1")
            return _audit(cfg)
        if cfg.command == "factor2":
            r = factor_two_experiment(cfg.m, cfg.pred, cfg.dist, cfg.window, cfg.replicates,
                                      cfg.seed, cfg.scale, cfg.workers)
            _emit(report_json(r, cfg.timing), cfg.json or cfg.out)
            hard = (r.counts["identity_violations"] + r.counts["split_below_violations"]
                    + r.counts["inclusion_violations"])
            print(f"lhs={r.p_hat['lhs']:.6g} 2*rhs={r.extra['two_rhs']:.6g} "
                  f"bound_ok={r.extra['bound_ok']} identity violations: {hard}", file=sys.stderr)
            return 1 if hard else 0
        if cfg.command == "scan":
            r = monotonicity_scan(cfg.pred, cfg.dist, cfg.window, cfg.m_range, cfg.replicates,
                                  cfg.seed, cfg.scale, cfg.workers)
            _emit(report_json(r), cfg.json or cfg.out)
            print(f"CONJECTURE scan: {len(r.flags)} flagged increase(s)", file=sys.stderr)
            return 0
        if cfg.command == "coexist":
            if cfg.field or "replicate" in cfg.explicit:
                d = coexistence_statistics(_field(cfg)).to_dict()
            else:
                d = coexistence_survey(cfg.dist, cfg.window, cfg.replicates, cfg.seed,
                                       cfg.scale, cfg.workers)
            _emit(report_json(d), cfg.json or cfg.out)
            return 0
        if cfg.command == "render":
            if not cfg.out:
                raise ConfigurationError("render needs --out")
            write_text(cfg.out, render_scene(_field(cfg), cfg.render, cfg.format, cfg.a))
            return 0
    except (ConfigurationError, DomainError, OutputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    raise ConfigurationError(f"unknown command {cfg.command!r}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
    except LPPError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return run_command(cfg)


if __name__ == "__main__":
    sys.exit(main())
