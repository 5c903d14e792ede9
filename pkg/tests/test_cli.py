import io
import json
import math
from pathlib import Path

import pytest

from oracle_values import SQUARE_WELL_DELTAS
from scatterbound import cli

ROOT = Path(__file__).resolve().parents[1]
CONFIGS = ROOT / "configs"
GOLDEN = Path(__file__).parent / "golden"


def run(*argv):
    return cli.main([str(a) for a in argv])


def write_config(tmp_path, cfg, name="job.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return path


@pytest.fixture(scope="module")
def solved(tmp_path_factory):
    out = tmp_path_factory.mktemp("solve")
    code = run("solve", "--config", CONFIGS / "square_well.json", "--out", out)
    return code, out


def test_solve_square_well_contains_oracle(solved):
    code, out = solved
    assert code == cli.EXIT_OK
    assert {p.name for p in out.iterdir()} == {"report.json", "trace.csv", "ansatz.json"}
    report = json.loads((out / "report.json").read_text())
    f0 = complex(*[w["f"] for w in report["oracle"]["partial_waves"] if w["ell"] == 0][0])
    assert f0 == pytest.approx(math.sin(SQUARE_WELL_DELTAS[0]) * complex(
        math.cos(SQUARE_WELL_DELTAS[0]), math.sin(SQUARE_WELL_DELTAS[0])), abs=1e-12)
    first = report["bounds"][0]
    assert first["theorem"] == "phase-shift" and first["xi_details"]["ell"] == 0
    centre = complex(*first["certified_interval"]["centre"])
    assert abs(centre - f0) <= first["certified_interval"]["radius"]
    assert all(c["contains_oracle"] for c in report["oracle"]["checks"])


def test_every_bound_carries_a_rigor_flag(solved):
    report = json.loads((solved[1] / "report.json").read_text())
    for rec in report["bounds"]:
        assert "rigor" in rec or "unavailable" in rec
    assert "l1_error" in report["violation"]


def test_trace_is_monotone(solved):
    lines = (solved[1] / "trace.csv").read_text().splitlines()
    assert lines[0] == "iter,loss,step,accepted"
    losses = [float(r.split(",")[1]) for r in lines[1:] if r.endswith(",1")]
    assert all(b <= a for a, b in zip(losses[:-1], losses[1:]))


def test_free_config_obeys_free_bound(tmp_path):
    assert run("solve", "--config", CONFIGS / "free.json", "--out", tmp_path) == 0
    report = json.loads((tmp_path / "report.json").read_text())
    f0 = json.loads((tmp_path / "ansatz.json").read_text())
    l1 = report["violation"]["l1"]
    mass = report["config"]["physics"]["mass"]
    free = [b for b in report["bounds"] if b["theorem"] == "free"][0]
    assert free["value"] <= mass / math.pi * (l1 + report["violation"]["l1_error"]) * (1 + 1e-12)
    amp = [complex(*z) for z in f0["amplitudes"]][0]
    assert abs(amp) <= mass / math.pi * (l1 + report["violation"]["l1_error"])


@pytest.mark.parametrize("cfg, pointer", [
    ({"potential": {"kind": "square-well"}, "physics": {"k": 1.0, "mass": 1.0},
      "extra": 1}, "extra"),
    ({"potential": {"kind": "square-well"}, "physics": {"k": -1.0, "mass": 1.0}},
     "/physics/k"),
    ({"potential": {"kind": "nonsense"}, "physics": {"k": 1.0, "mass": 1.0}},
     "/potential/kind"),
])
def test_malformed_config_exits_one_without_output(tmp_path, capsys, cfg, pointer):
    out = tmp_path / "out"
    code = run("solve", "--config", write_config(tmp_path, cfg), "--out", out)
    assert code == cli.EXIT_CONFIG
    assert not out.exists()
    assert pointer in capsys.readouterr().err


def test_unreadable_config(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("solve", "--config", bad, "--out", tmp_path / "o") == cli.EXIT_CONFIG
    assert run("solve", "--out", tmp_path / "o") == cli.EXIT_CONFIG


def test_oracle_free_phase_shifts_vanish(tmp_path):
    cfg = {"potential": {"kind": "zero"}, "physics": {"k": 1.3, "mass": 1.0, "lmax": 6}}
    assert run("oracle", "--config", write_config(tmp_path, cfg), "--out", tmp_path) == 0
    recs = json.loads((tmp_path / "oracle.json").read_text())["phase_shifts"]
    assert len(recs) == 7
    assert all(abs(r["delta"]) <= 1e-10 for r in recs)


def test_oracle_golden_files(tmp_path):
    assert run("oracle", "--config", CONFIGS / "square_well.json", "--out", tmp_path) == 0
    for name in ("oracle.json", "oracle.csv"):
        assert (tmp_path / name).read_bytes() == (GOLDEN / f"square_well_{name}").read_bytes()


def test_oracle_rejects_coulomb_tail(tmp_path, capsys):
    cfg = {"potential": {"kind": "coulomb-plus-short-range", "alpha": -1.0, "depth": -1.0,
                         "radius": 1.0},
           "physics": {"k": 1.0, "mass": 1.0}}
    out = tmp_path / "out"
    assert run("oracle", "--config", write_config(tmp_path, cfg), "--out", out) == 1
    assert "oracle requires short-range" in capsys.readouterr().err
    assert not out.exists()


def test_bound_on_oracle_state(tmp_path):
    assert run("bound", "--config", CONFIGS / "square_well.json", "--out", tmp_path) == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["command"] == "bound"
    assert all(c["contains_oracle"] for c in report["oracle"]["checks"])


def test_pathology_all_pass(tmp_path, capsys):
    assert run("pathology", "--out", tmp_path) == 0
    table = capsys.readouterr().out.splitlines()
    assert len(table) == 5 and all(line.endswith("PASS") for line in table)
    checks = json.loads((tmp_path / "pathology.json").read_text())["checks"]
    assert [c["demo"] for c in checks] == ["l2-instability", "expectation-tuning",
                                           "nonconservation", "slow-plateau", "inverse-square"]


def test_pathology_scan_is_seeded(tmp_path):
    a, b, c = tmp_path / "a", tmp_path / "b", tmp_path / "c"
    for out, seed in ((a, 3), (b, 3), (c, 4)):
        assert run("pathology", "--scan", "--seed", seed, "--out", out) == 0
    names = {"pathology.json", "l2_scan.csv", "eps_scan.csv", "vslow_scan.csv",
             "tuning_scan.csv"}
    assert {p.name for p in a.iterdir()} == names
    for name in names:
        assert (a / name).read_bytes() == (b / name).read_bytes()
    assert (a / "tuning_scan.csv").read_bytes() != (c / "tuning_scan.csv").read_bytes()
    header = (a / "l2_scan.csv").read_text().splitlines()[0]
    assert header.startswith("n,l2sq")
    assert (a / "eps_scan.csv").read_text().startswith("eps,l1")


def test_pathology_failure_exit_code(monkeypatch, tmp_path):
    original = cli.pathology_checks

    def failing(workers=1):
        checks = original(workers)
        checks[0]["pass"] = False
        return checks

    monkeypatch.setattr(cli, "pathology_checks", failing)
    assert cli.cmd_pathology(tmp_path, 0, False, stream=io.StringIO()) == cli.EXIT_DEGRADED


@pytest.mark.parametrize("value", ["0", "-2", "many"])
def test_invalid_thread_count(monkeypatch, tmp_path, value):
    monkeypatch.setenv(cli.THREADS_ENV, value)
    assert run("oracle", "--config", CONFIGS / "free.json", "--out", tmp_path) == 1


def test_thread_count_does_not_change_output(monkeypatch, tmp_path):
    outs = []
    for threads in ("1", "2"):
        monkeypatch.setenv(cli.THREADS_ENV, threads)
        out = tmp_path / threads
        assert run("pathology", "--scan", "--out", out) == 0
        outs.append(out)
    for p in outs[0].iterdir():
        assert p.read_bytes() == (outs[1] / p.name).read_bytes()


def test_seed_flag_overrides_config(tmp_path):
    assert run("oracle", "--config", CONFIGS / "free.json", "--seed", 7, "--out", tmp_path) == 0
    assert json.loads((tmp_path / "oracle.json").read_text())["seed"] == 7


def test_degraded_exit_on_line_search_failure(monkeypatch, tmp_path):
    real = cli.optimize

    def failing(*args, **kwargs):
        trace = real(*args, **kwargs)
        return type(trace)(records=trace.records, ansatz=trace.ansatz, report=trace.report,
                           reason="line-search-failure", line_search_failed=True)

    monkeypatch.setattr(cli, "optimize", failing)
    assert run("solve", "--config", CONFIGS / "free.json", "--out", tmp_path) == cli.EXIT_DEGRADED
    assert (tmp_path / "report.json").exists()
