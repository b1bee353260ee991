import json
import subprocess
import sys
from fractions import Fraction

import pytest

from hadsimplex.cli import main
from hadsimplex.report import (
    ORDER16_TABLE,
    RunManifest,
    dumps,
    frac_str,
    ingest,
    parse_frac,
    reproduce,
    sha256_file,
    table_multiset,
)
from conftest import ORDER16_DIR


def _read(path):
    return json.loads(path.read_text())


@pytest.fixture
def h4(tmp_path):
    p = tmp_path / "h4.txt"
    assert main(["hadamard", "gen", "--order", "4", "--method", "sylvester", "-o", str(p)]) == 0
    return p


def test_frac_strings():
    assert frac_str(Fraction(2)) == "2/1"
    assert frac_str(Fraction(-7, 2)) == "-7/2"
    assert parse_frac("9/2") == Fraction(9, 2)
    assert dumps({"b": 1, "a": 2}).endswith("\n")
    assert dumps({"b": 1, "a": 2}).index('"a"') < dumps({"b": 1, "a": 2}).index('"b"')


def test_hadamard_subcommands(tmp_path, h4, capsys):
    assert main(["hadamard", "verify", str(h4), "--json", str(tmp_path / "v.json")]) == 0
    assert _read(tmp_path / "v.json") == {"file": str(h4), "order": 4, "verified": True}
    bad = tmp_path / "bad.txt"
    bad.write_text("++\n++\n")
    assert main(["hadamard", "verify", str(bad)]) == 1
    out = tmp_path / "n.txt"
    assert main(["hadamard", "normalize", str(h4), "-o", str(out), "--json", str(tmp_path / "n.json")]) == 0
    assert all(line.endswith("+") for line in out.read_text().split())
    assert main(["hadamard", "gen", "--order", "12", "--method", "sylvester"]) == 2
    assert main(["hadamard", "gen", "--order", "12", "--method", "paley"]) == 0


def test_norm_json(tmp_path, h4):
    j = tmp_path / "norm.json"
    assert main(["norm", "--matrix", str(h4), "--census", "--json", str(j)]) == 0
    obj = _read(j)
    assert obj["norm"] == "2/1" and obj["mu_census"] == {"1": 4}
    assert obj["maximizer_count"] == 4 and len(obj["maximizers"]) == 4
    assert set(obj) == {"n", "norm", "norm_decimal", "mu_census", "maximizer_count", "maximizers", "elapsed_ms"}
    for flags in (["--generic"], ["--cube", "unit"], ["--workers", "2"]):
        k = tmp_path / "other.json"
        assert main(["norm", "--matrix", str(h4), "--json", str(k), *flags]) == 0
        other = _read(k)
        other.pop("elapsed_ms"), obj.pop("elapsed_ms", None)
        assert other == obj


def test_norm_cap_sample(tmp_path):
    p = tmp_path / "h16.txt"
    main(["hadamard", "gen", "--order", "16", "--method", "sylvester", "-o", str(p)])
    j = tmp_path / "n.json"
    assert main(["norm", "--matrix", str(p), "--cap", "5", "--json", str(j)]) == 0
    obj = _read(j)
    assert obj["maximizer_count"] == 448 and len(obj["maximizer_sample"]) == 5
    assert "maximizers" not in obj


def test_absorb(tmp_path, h4):
    j = tmp_path / "a.json"
    assert main(["absorb", "--matrix", str(h4), "--json", str(j)]) == 0
    obj = _read(j)
    assert obj["xi"] == "3/1" and obj["tight_right"] and obj["has_one_vertex"]


def test_bad_inputs(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("++\n+x\n")
    assert main(["norm", "--matrix", str(bad)]) == 2
    assert "line 2" in capsys.readouterr().err
    nonh = tmp_path / "nonh.txt"
    nonh.write_text("++\n++\n")
    assert main(["absorb", "--matrix", str(nonh)]) == 2
    assert main(["norm", "--matrix", str(tmp_path / "missing.txt")]) == 2
    assert main(["bogus"]) == 2
    assert main(["--version"]) == 0


def test_ball_and_bounds(tmp_path):
    j = tmp_path / "b.json"
    assert main(["ball-norm", "--n", "15", "--json", str(j)]) == 0
    obj = _read(j)
    assert obj["a"] == 6 and abs(obj["norm"] - 4) < 1e-9 and obj["is_perfect_square"]
    assert main(["ball-norm", "--sweep", "500", "--json", str(j)]) == 0
    assert _read(j)["equality_dimensions"] == [k * k - 1 for k in range(2, 23)]
    assert main(["ball-norm", "--n", "0"]) == 2
    assert main(["maxdet", "--n", "4", "--brute-force", "--json", str(j)]) == 0
    assert _read(j)["h_n"] == 3
    assert main(["maxdet", "--n", "7", "--json", str(j)]) == 0
    assert _read(j) == {"n": 7, "h_n": 32, "provenance": "hadamard-equality"}
    assert main(["bounds", "--n", "3", "--json", str(j)]) == 0
    obj = _read(j)
    assert obj["maxvol_norm_bound"] == "4/1" and obj["nu_n"] == "1/3"


def test_ingest_order16_table(tmp_path):
    result = ingest(ORDER16_DIR)
    assert not result["errors"]
    rows = [(parse_frac(r["norm"]), {int(k): v for k, v in r["mu_census"].items()}) for r in result["summary"]]
    assert table_multiset(rows) == table_multiset(ORDER16_TABLE)
    norms = [parse_frac(r["norm"]) for r in result["summary"]]
    assert norms == sorted(norms)


def test_ingest_collects_errors(tmp_path, h4):
    d = tmp_path / "batch"
    d.mkdir()
    (d / "good.txt").write_text(h4.read_text())
    (d / "bad.txt").write_text("+-\n+\n")
    (d / "nonh.txt").write_text("++\n++\n")
    j = tmp_path / "i.json"
    assert main(["ingest", str(d), "--json", str(j)]) == 2
    obj = _read(j)
    assert [r["file"] for r in obj["summary"]] == ["good.txt"]
    assert sorted(e["file"] for e in obj["errors"]) == ["bad.txt", "nonh.txt"]


def test_reproduce_writes_reports(tmp_path):
    out = tmp_path / "reports"
    assert main(["reproduce", "n3", "--out", str(out)]) == 0
    rep = _read(out / "reproduce_n3.json")
    assert rep["passed"] and rep["norm"]["norm"] == "2/1"
    man = _read(out / "manifest.json")
    assert man["outputs"] == [str(out / "reproduce_n3.json")]
    assert "n3" in man["timings_ms"]


def test_reproduce_bounds_target():
    r = reproduce("bounds-table")
    assert r["passed"], [c for c in r["checks"] if not c["passed"]]
    with pytest.raises(ValueError):
        reproduce("nope")


def test_manifest_hashes(tmp_path, h4):
    m = RunManifest.start(["x"], [h4], workers=2).to_json()
    assert m["inputs"] == {str(h4): sha256_file(h4)}
    assert m["workers"] == 2


def test_module_entry_point(h4):
    proc = subprocess.run(
        [sys.executable, "-m", "hadsimplex", "norm", "--matrix", str(h4), "--census"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert "norm = 2/1" in proc.stdout and "m_1 = 4" in proc.stdout
