"""Claim registry plumbing, CSV schema stability, and the command line."""

import io

import pytest

from jnbench.claims import (CSV_HEADER, DEFAULTS, REGISTRY, ClaimReport,
                            run_claim, write_csv)
from jnbench.cli import main
from jnbench.errors import UsageError
from jnbench.towers import parse_snapshot

ALL_IDS = ["C2-POWERDECAY", "H2-HOELDER", "R2-INFOSC", "P26-PERINTERVAL",
           "L31-GEOM", "P32-DIVERGE", "L34-L1", "L35-TAYLOR", "L37-FJ",
           "P43-WITNESS", "P44-G0", "L510-AUKI", "T52-WEAKLP", "T57-BIGCUBE",
           "L58-PRODUCT", "OPT-DPEQBF", "ORC-QUAD"]


def _row_count(out, cid):
    for line in out.splitlines():
        if line.startswith(cid):
            return int(line.split()[1])
    raise AssertionError("no summary line for %s in %r" % (cid, out))


def test_registry_order_and_defaults():
    assert list(REGISTRY) == ALL_IDS
    assert DEFAULTS["p"] == 2.0 and DEFAULTS["q"] == 3.0
    assert DEFAULTS["depth"] == 24 and DEFAULTS["seed"] == 1234
    with pytest.raises(UsageError):
        run_claim("NOPE")


def test_claim_rows_well_formed():
    rows = run_claim("L31-GEOM", {"depth": 10})
    assert rows and all(isinstance(r, ClaimReport) for r in rows)
    for r in rows:
        assert r.claim_id == "L31-GEOM"
        assert r.params["depth"] == 10
        assert isinstance(r.ratio, float)
        assert isinstance(r.note, str)
        assert r.ok


def test_csv_rows_byte_stable():
    rows = run_claim("C2-POWERDECAY", {})
    buf1 = io.StringIO()
    write_csv(buf1, rows)
    buf2 = io.StringIO()
    write_csv(buf2, run_claim("C2-POWERDECAY", {}))
    assert buf1.getvalue() == buf2.getvalue()
    lines = buf1.getvalue().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == len(rows) + 1
    for line in lines[1:]:
        fields = line.split(",")
        assert len(fields) == 9
        assert fields[8] in ("0", "1")


def test_cli_verify_report_roundtrip(tmp_path, capsys):
    csv_path = tmp_path / "rows.csv"
    assert main(["verify", "L31-GEOM", "--depth", "10",
                 "--csv", str(csv_path)]) == 0
    out = capsys.readouterr().out
    assert "L31-GEOM" in out and "PASS" in out
    assert "total:" in out and " 0 failed" in out
    assert main(["report", "--csv", str(csv_path)]) == 0
    rep = capsys.readouterr().out
    assert _row_count(rep, "L31-GEOM") == _row_count(out, "L31-GEOM")


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["verify", "NOPE"]) == 2
    assert "error:" in capsys.readouterr().err

    bad = tmp_path / "bad.csv"
    bad.write_text("nonsense\n")
    assert main(["report", "--csv", str(bad)]) == 2
    capsys.readouterr()

    failing = tmp_path / "failing.csv"
    failing.write_text(CSV_HEADER + "\n"
                       "X-CLAIM,p=2,0,1,0,1,0,1,0\n"
                       "X-CLAIM,p=2,1,1,0,1,0,1,1\n")
    assert main(["report", "--csv", str(failing)]) == 1
    out = capsys.readouterr().out
    assert "FAIL(1)" in out

    short = tmp_path / "short.csv"
    short.write_text(CSV_HEADER + "\nX-CLAIM,p=2,0,1,0\n")
    assert main(["report", "--csv", str(short)]) == 2
    capsys.readouterr()

    flag = tmp_path / "flag.csv"
    flag.write_text(CSV_HEADER + "\nX-CLAIM,p=2,0,1,0,1,0,1,maybe\n")
    assert main(["report", "--csv", str(flag)]) == 2
    capsys.readouterr()


def test_cli_construct_snapshot(tmp_path, capsys):
    out = tmp_path / "snap.txt"
    assert main(["construct", "--family", "g", "--depth", "6",
                 "--max-level", "4", "--out", str(out)]) == 0
    assert "wrote" in capsys.readouterr().out
    with open(out) as fh:
        rows = parse_snapshot(fh)
    assert len(rows) == (1 << 4) - 1
    assert main(["construct", "--family", "custom", "--depth", "4",
                 "--out", str(tmp_path / "c.txt")]) == 2
    assert "custom" in capsys.readouterr().err


def test_cli_optimize_reports_bound(capsys):
    assert main(["optimize", "--family", "g", "--depth", "8",
                 "--max-level", "4", "--grid-refine", "1"]) == 0
    out = capsys.readouterr().out
    assert "search lower bound (uncapped):" in out
    assert main(["optimize", "--family", "g", "--depth", "8",
                 "--max-level", "5", "--max-len", "1/512"]) == 0
    out = capsys.readouterr().out
    assert "search lower bound (capped at 1/512):" in out


def test_cli_config_precedence(tmp_path, capsys):
    n9 = len(run_claim("L31-GEOM", {"depth": 9}))
    n11 = len(run_claim("L31-GEOM", {"depth": 11}))
    assert n9 != n11
    cfg = tmp_path / "bench.cfg"
    cfg.write_text("# comment\ndepth = 9\nseed=7\n")
    assert main(["verify", "L31-GEOM", "--config", str(cfg)]) == 0
    assert _row_count(capsys.readouterr().out, "L31-GEOM") == n9
    assert main(["verify", "L31-GEOM", "--config", str(cfg),
                 "--depth", "11"]) == 0
    assert _row_count(capsys.readouterr().out, "L31-GEOM") == n11
    bad = tmp_path / "bad.cfg"
    bad.write_text("verbosity = 3\n")
    assert main(["verify", "L31-GEOM", "--config", str(bad)]) == 2
    err = capsys.readouterr().err
    assert "unknown key" in err and "depth" in err
