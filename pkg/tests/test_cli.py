import json
import os
import subprocess
import sys

import pytest

from lppdom.cli import main
from lppdom.config import parse_config
from lppdom.errors import ConfigurationError
from lppdom.experiments import Theorem
from lppdom.fixtures import fixture_path
from lppdom.io import CSV_HEADER, records_csv, write_outputs
from lppdom.render import RGB
from lppdom import _kernels as K
from lppdom.weights import SiteWindow


def test_spec_config_parses():
    cfg = parse_config("audit --theorem thm2 --a 3,2 --pred card:5 --dist exp:1.0 "
                       "--window 48x48 --reps 10000 --seed 7".split())
    assert cfg.command == "audit" and cfg.theorem == Theorem.thm2((3, 2))
    assert cfg.window == SiteWindow(48, 48) and cfg.replicates == 10000 and cfg.seed == 7
    assert cfg.scale is None and str(cfg.pred) == "card:5"


@pytest.mark.parametrize("argv, msg", [
    ("audit --pred diag:-1", "predicate parameter out of range"),
    ("audit --theorem thm3 --m 50 --window 48x48", "window too small"),
    ("audit --bogus 3", "unknown key '--bogus'"),
    ("audit --pred card:", "malformed predicate"),
    ("audit --dist exp:0", "exp"),
    ("frobnicate", "unknown command"),
    ("render --render forest --format ppm", "unsupported format"),
    ("audit --mode int:0", "mode"),
])
def test_config_errors(argv, msg):
    with pytest.raises(ConfigurationError, match=msg):
        parse_config(argv.split())


def test_config_file_and_override(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("# audit settings\ncommand = estimate\nwindow=12x10\nreps = 5  # few\npred=diag:3\n")
    cfg = parse_config([], str(p))
    assert cfg.command == "estimate" and cfg.window == SiteWindow(12, 10) and cfg.replicates == 5
    cfg = parse_config(["--config", str(p), "--reps", "9"])
    assert cfg.replicates == 9 and str(cfg.pred) == "diag:3"


def test_config_file_unknown_key(tmp_path):
    p = tmp_path / "bad.cfg"
    p.write_text("window=4x4\ncolour=blue\n")
    with pytest.raises(ConfigurationError, match="unknown key 'colour'"):
        parse_config(["audit"], str(p))


def test_mode_auto():
    assert parse_config(["audit", "--dist", "geom:0.5"]).mode == "int:1"
    assert parse_config(["audit", "--dist", "exp:1"]).mode == "float"
    assert parse_config(["audit", "--mode", "int:8"]).scale == 8


def test_audit_exit_zero_and_summary(tmp_path, capsys):
    out = tmp_path / "a.csv"
    rc = main(["audit", "--window", "12x12", "--reps", "50", "--a", "2,2", "--csv", str(out)])
    assert rc == 0
    assert "violations: 0/50" in capsys.readouterr().err
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(CSV_HEADER) and len(lines) == 51


def test_audit_csv_byte_identical(tmp_path):
    args = ["audit", "--window", "10x10", "--reps", "40", "--theorem", "thm3", "--m", "2", "--seed", "3"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(args + ["--csv", str(a)]) == 0
    assert main(args + ["--csv", str(b), "--workers", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_zero_reps_header_only(tmp_path):
    out = tmp_path / "z.csv"
    assert main(["audit", "--reps", "0", "--csv", str(out)]) == 0
    assert out.read_text() == ",".join(CSV_HEADER) + "\n"


def test_three_records_three_rows():
    from lppdom.experiments import AuditRecord
    text = records_csv([AuditRecord.make(r, 1, r % 2, 1) for r in range(3)])
    assert text.splitlines()[1:] == ["0,1,0,1,1", "1,1,1,1,1", "2,1,0,1,1"]


def test_estimate_outputs(tmp_path):
    j, c = tmp_path / "r.json", tmp_path / "r.csv"
    rc = main(["estimate", "--theorem", "thm3", "--m", "2", "--window", "16x16", "--reps", "300",
               "--json", str(j), "--csv", str(c)])
    assert rc == 0
    d = json.loads(j.read_text())
    assert set(d) >= {"params", "counts", "p_hat", "ci_low", "ci_high", "seed", "elapsed_ms"}
    assert d["elapsed_ms"] is None
    assert d["p_hat"]["lhs"] <= d["p_hat"]["rhs"]
    for key in d["p_hat"]:
        assert d["ci_low"][key] <= d["p_hat"][key] <= d["ci_high"][key]
    rows = c.read_text().splitlines()
    assert rows[0] == "cell,count,p_hat,ci_low,ci_high"


def test_estimate_timing_flag(tmp_path):
    j = tmp_path / "r.json"
    main(["estimate", "--window", "6x6", "--reps", "10", "--json", str(j), "--timing"])
    assert isinstance(json.loads(j.read_text())["elapsed_ms"], float)


def test_exit_code_two_on_config_error(capsys):
    assert main(["audit", "--pred", "diag:-1"]) == 2
    assert "predicate parameter out of range" in capsys.readouterr().err


def test_exit_code_two_on_unwritable_output(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["audit", "--reps", "2", "--window", "4x4", "--csv", str(blocker / "sub" / "a.csv")]) == 2


def test_exit_code_one_on_failed_audit(monkeypatch, tmp_path):
    import lppdom.experiments as ex

    def broken(field, p, th):
        event, lhs, gate, rhs = real(field, p, th)
        return True, lhs, False, rhs

    real = ex._theorem_sides
    monkeypatch.setattr(ex, "_theorem_sides", broken)
    rc = main(["audit", "--window", "6x6", "--reps", "5", "--pred", "card:1", "--workers", "1",
               "--csv", str(tmp_path / "x.csv")])
    assert rc == 1


def test_sample_round_trip(tmp_path):
    out = tmp_path / "f.json"
    assert main(["sample", "--window", "3x2", "--dist", "geom:0.5", "--seed", "4", "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    assert d["window"] == [3, 2] and len(d["weights"]) == 3 and len(d["weights"][0]) == 4


def test_render_forest_fixture_e(tmp_path):
    out = tmp_path / "tree.svg"
    assert main(["render", "--field", fixture_path("E"), "--out", str(out)]) == 0
    svg = out.read_text()
    assert svg.count("<line") == 8
    assert "<path" not in svg and "<circle" not in svg


def test_render_forest_edge_count(tmp_path):
    out = tmp_path / "tree.svg"
    main(["render", "--window", "7x4", "--out", str(out)])
    assert out.read_text().count("<line") == 8 * 5 - 1


def test_render_ppm_fixture_c(tmp_path):
    out = tmp_path / "c.ppm"
    rc = main(["render", "--field", fixture_path("C"), "--render", "coloring", "--format", "ppm",
               "--a", "0,0", "--out", str(out)])
    assert rc == 0
    data = out.read_bytes()
    header = b"P6\n3 3\n255\n"
    assert data.startswith(header)
    body = data[len(header):]
    assert len(body) == 27
    row = 2 - 1  # image rows run from y = ny down to y = 0
    px = body[(row * 3 + 1) * 3:(row * 3 + 1) * 3 + 3]
    assert tuple(px) == RGB[K.BLUE]


def test_render_needs_out():
    assert main(["render", "--window", "3x3"]) == 2


def test_coexist_single_field(capsys):
    assert main(["coexist", "--field", fixture_path("C")]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["reach"] == 3 and d["alpha"][2] == 1


def test_factor2_and_scan_exit_zero(tmp_path):
    assert main(["factor2", "--m", "2", "--window", "10x10", "--reps", "200",
                 "--json", str(tmp_path / "f.json")]) == 0
    assert main(["scan", "--m-range", "1..4", "--window", "10x10", "--reps", "200",
                 "--json", str(tmp_path / "s.json")]) == 0
    d = json.loads((tmp_path / "s.json").read_text())
    assert d["status"] == "CONJECTURE" and len(d["curve"]) == 4


def test_write_outputs_report_csv(tmp_path):
    from lppdom.experiments import estimate_probabilities
    rep = estimate_probabilities(Theorem.thm3(1), "card:1", "exp:1", SiteWindow(4, 4), 20, 0)
    files = write_outputs(None, rep, {"json": tmp_path / "r.json", "report_csv": tmp_path / "r.csv"})
    assert len(files) == 2


def test_module_entry_point(tmp_path):
    env = dict(os.environ, LPPDOM_WORKERS="1")
    p = subprocess.run([sys.executable, "-m", "lppdom", "audit", "--window", "6x6", "--reps", "3"],
                       capture_output=True, text=True, env=env)
    assert p.returncode == 0
    assert p.stdout.splitlines()[0] == ",".join(CSV_HEADER)
    assert "violations: 0/3" in p.stderr
