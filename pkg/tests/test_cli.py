import csv
import json

import pytest

from ppas.cli import main
from ppas.schemes import ZeroScheme
from ppas.surface import TorusPoint

P = TorusPoint.from_vector([0.12, 0.81, 0.33, 0.47])
Q = TorusPoint.from_vector([0.64, 0.29, 0.91, 0.05])


@pytest.fixture
def pair(tmp_path):
    path = tmp_path / "pair.json"
    ZeroScheme.reduced([P, Q]).save(path)
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_config_round_trip(tmp_path, capsys):
    path = tmp_path / "cfg.json"
    assert run(capsys, "gen-config", path)[0] == 0
    assert json.loads(path.read_text())["seed"] == 20240917


def test_jump_report(pair, capsys):
    code, out, _ = run(capsys, "jump", pair)
    assert code == 0
    rep = json.loads(out)
    assert set(rep) == {"config", "command", "inputs", "outputs", "timings", "passed"}
    locus = rep["outputs"]["locus"]
    assert locus["kind"] == "finite" and len(locus["points"]) == 1
    assert rep["command"] == "jump"


def test_jump_is_deterministic(pair, capsys):
    a = json.loads(run(capsys, "jump", pair)[1])
    b = json.loads(run(capsys, "jump", pair)[1])
    a.pop("timings"), b.pop("timings")
    assert a == b


def test_confirm_needs_candidates(pair, capsys):
    code, _, err = run(capsys, "jump", pair, "--mode", "confirm")
    assert code == 3
    assert "candidate" in err


def test_confirm_mode(pair, capsys):
    cand = ",".join(str(x) for x in (-(P + Q)).vector)
    code, out, _ = run(capsys, "jump", pair, "--mode", "confirm", "--candidate", cand)
    assert code == 0
    assert json.loads(out)["outputs"]["locus"]["kind"] == "finite"


def test_collinear_and_h0(pair, capsys, tmp_path):
    code, out, _ = run(capsys, "collinear", pair)
    assert code == 0
    rep = json.loads(out)["outputs"]
    assert rep["collinear"] and sum(l["multiplicity"] for l in rep["lines"]) == 2
    twist = ",".join(str(x) for x in (-(P + Q)).vector)
    code, out, _ = run(capsys, "h0", pair, "--twist", twist, "--out", tmp_path / "h.json")
    assert code == 0 and out == ""
    assert json.loads((tmp_path / "h.json").read_text())["outputs"]["h0"] == 3


def test_ledger(capsys):
    code, out, _ = run(capsys, "ledger", "--max-n", "6")
    assert code == 0
    assert json.loads(out)["passed"] is True


def test_verify_single_suite(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "ledger-balance")
    assert code == 0
    (suite,) = json.loads(out)["outputs"]["suites"]
    assert suite["suite"] == "ledger-balance" and suite["passes"] == suite["trials"]


def test_grid_csv(pair, capsys, tmp_path):
    out = tmp_path / "g.csv"
    code = run(capsys, "grid", pair, "--slice", "c3=0.25,c4=0.5", "--res", "4", "--out", out)[0]
    assert code == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["c1", "c2", "log10_smin"] and len(rows) == 17


@pytest.mark.parametrize(
    "argv,code",
    [
        (["verify", "--suite", "no-such-suite"], 3),
        (["frobnicate"], 3),
        (["jump"], 3),
        (["jump", "missing.json"], 2),
        (["h0", "{pair}", "--twist", "1,2"], 2),
        (["grid", "{pair}", "--slice", "c9=1"], 2),
        (["jump", "{pair}", "--config", "{bad}"], 2),
    ],
)
def test_exit_codes(argv, code, pair, tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"tau": [[1, 0], [0, 1]]}')
    argv = [a.format(pair=pair, bad=bad) for a in argv]
    assert run(capsys, *argv)[0] == code


def test_config_from_environment(pair, tmp_path, capsys, monkeypatch):
    cfg = tmp_path / "cfg.json"
    run(capsys, "gen-config", cfg)
    data = json.loads(cfg.read_text())
    data["seed"] = 7
    cfg.write_text(json.dumps(data))
    monkeypatch.setenv("PPAS_CONFIG", str(cfg))
    code, out, _ = run(capsys, "h0", pair, "--twist", "0.1,0.2,0.3,0.4")
    assert code == 0 and json.loads(out)["config"]["seed"] == 7
