"""Record and report serialization. Output bytes are a function of content only."""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Iterable, Optional

from .errors import LPPError

CSV_HEADER = ("replicate", "event", "lhs_pred", "rhs_pred", "implication_ok")


class OutputError(LPPError, OSError):
    pass


def records_csv(records: Iterable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow((r.replicate, int(r.event_member), int(r.lhs_pred), int(r.rhs_pred), int(r.implication_ok)))
    return buf.getvalue()


def report_json(report, timing: bool = False) -> str:
    d = report.to_dict(timing=timing) if hasattr(report, "to_dict") else report
    try:
        return json.dumps(d, indent=2, sort_keys=True) + "\n"
    except TypeError:
        return json.dumps(d, indent=2, sort_keys=True, default=list) + "\n"


def report_csv(report) -> str:
    """One row per estimated cell: cell,count,p_hat,ci_low,ci_high."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("cell", "count", "p_hat", "ci_low", "ci_high"))
    for key in report.p_hat:
        w.writerow((key, report.counts[key], repr(report.p_hat[key]),
                    repr(report.ci_low[key]), repr(report.ci_high[key])))
    return buf.getvalue()


def write_text(path, data) -> None:
    try:
        p = Path(path)
        if p.parent and not p.parent.exists():
            p.parent.mkdir(parents=True, exist_ok=True)
        if isinstance(data, bytes):
            p.write_bytes(data)
        else:
            with open(p, "w", newline="") as fh:
                fh.write(data)
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror or exc}") from None


def write_outputs(records: Optional[Iterable], report, paths: dict, timing: bool = False) -> list:
    """Write ``records`` to paths['csv'] and ``report`` to paths['json']; returns
    the files written."""
    written = []
    if records is not None and paths.get("csv"):
        write_text(paths["csv"], records_csv(records))
        written.append(paths["csv"])
    if report is not None and paths.get("json"):
        write_text(paths["json"], report_json(report, timing))
        written.append(paths["json"])
    if report is not None and paths.get("report_csv"):
        write_text(paths["report_csv"], report_csv(report))
        written.append(paths["report_csv"])
    return written
