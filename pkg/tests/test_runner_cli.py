import csv
import json
import math

import pytest

from exhaustsim import cli
from exhaustsim.runner import aggregate, run_batch, run_one, write_json
from exhaustsim.scenario import Scenario

SHORT = Scenario(mac="802.11", duration=40.0)


def test_run_one_writes_artifacts(tmp_path):
    sim, summary = run_one(SHORT, 1, out_dir=str(tmp_path), trace=True)
    base = tmp_path / "802.11" / "seed-1"
    assert (base / "summary.json").exists()
    assert (base / "trace.log").stat().st_size > 0
    loaded = json.loads((base / "summary.json").read_text())
    assert loaded["packets"]["generated"] == summary["packets"]["generated"]
    with open(base / "packets.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == summary["packets"]["generated"]
    assert {r["outcome"] for r in rows} <= {"received", "dropped", "in-flight"}


def test_write_json_marks_unbounded_lifetime(tmp_path):
    path = tmp_path / "x.json"
    write_json(str(path), {"lifetime": math.inf})
    assert json.loads(path.read_text()) == {"lifetime": "unbounded"}


def test_aggregate_means(tmp_path):
    summaries = [run_one(SHORT, s)[1] for s in (1, 2)]
    agg = aggregate(summaries)
    vals = [s["packets"]["pdr"] for s in summaries]
    assert agg["pdr"] == pytest.approx(sum(vals) / 2)
    assert agg["seeds"] == [1, 2]


def test_cli_validate(tmp_path, capsys):
    good = tmp_path / "good.yaml"
    good.write_text("mac: tdma\nduration: 30.0\n")
    assert cli.main(["validate", "--scenario", str(good)]) == 0
    assert "ok" in capsys.readouterr().out
    bad = tmp_path / "bad.yaml"
    bad.write_text("mac: nope\n")
    assert cli.main(["validate", "--scenario", str(bad)]) == 1


def test_cli_run(tmp_path, capsys):
    scn = tmp_path / "scn.yaml"
    scn.write_text("mac: tdma\nduration: 30.0\n")
    rc = cli.main(["run", "--scenario", str(scn), "--seed", "2",
                   "--out-dir", str(tmp_path / "out")])
    assert rc == 0
    out = capsys.readouterr().out
    assert '"generated"' in out
    assert (tmp_path / "out" / "urban-exhaust" / "tdma" / "seed-2"
            / "summary.json").exists()


def test_cli_rejects_bad_mac_override(tmp_path):
    with pytest.raises(SystemExit):
        cli.main(["run", "--mac", "csma-foo", "--seed", "1",
                  "--out-dir", str(tmp_path)])
