import csv
import json

import pytest

from coopcolor.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_fig2_has_no_2stable(tmp_path, capsys):
    g = str(tmp_path / "g.json")
    assert run(capsys, "gallery", "build", "fig2", "-o", g)[0] == 0
    code, out = run(capsys, "stability", "--game", g, "--k", "2", "--mode", "exists")
    assert code == 0 and out.out.strip() == "none"


def test_lattice_verify(capsys):
    code, out = run(capsys, "lattice", "--n", "10", "--mode", "verify")
    assert code == 0 and out.out.strip() == "chain=20 formula=20 dfs=20 OK"


def test_cascade_k3(tmp_path, capsys):
    path = tmp_path / "k3.csv"
    code, out = run(capsys, "cascade", "--k", "3", "--t", "4", "--realize", "--csv", str(path))
    assert code == 0 and out.out.strip() == "moves=60 balance=3 realized=OK"
    rows = list(csv.DictReader(open(path)))
    assert rows[0]["total_moves"] == "60"
    assert list(rows[0]) == ["t", "n", "c", "total_moves", "balance", "good_property_ok"]


def test_cascade_bad_t(capsys):
    code, out = run(capsys, "cascade", "--k", "4", "--t", "2")
    assert code == 1 and "t:" in out.err


def test_malformed_game_names_the_field(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"v": 1, "n": 3, "weights": [[0, 1, "x"]]}))
    code, out = run(capsys, "poa", "--game", str(bad), "--k", "1")
    assert code == 1 and "weights[0]" in out.err
    bad.write_text("{")
    code, out = run(capsys, "dynamics", "--game", str(bad))
    assert code == 1 and "invalid JSON" in out.err


def test_budget_exhaustion_is_infeasible(capsys):
    code, out = run(capsys, "gallery", "verify", "fig3", "--budget", "100")
    assert code == 3 and "INFEASIBLE" in out.out


def test_verify_json(capsys):
    code, out = run(capsys, "--json", "gallery", "verify", "fig2", "--threads", "2")
    d = json.loads(out.out)
    assert code == 0 and d["v"] == 1 and {v["status"] for v in d["verdicts"]} == {"PASS"}


def test_dynamics_trace_and_determinism(tmp_path, capsys):
    g = str(tmp_path / "g.json")
    run(capsys, "gallery", "build", "fig1", "-o", g)
    outs = []
    for i in range(2):
        trace = tmp_path / f"t{i}.jsonl"
        code, out = run(capsys, "--seed", "4", "dynamics", "--game", g, "--policy", "random", "-o", str(trace))
        assert code == 0
        outs.append(trace.read_text())
    assert outs[0] == outs[1]
    assert json.loads(outs[0].splitlines()[-1])["status"] == "stable"


def test_poa_and_multichannel(tmp_path, capsys):
    g = str(tmp_path / "z.json")
    run(capsys, "gallery", "build", "poa_zero_nash", "--params", "'bipartite'", "1", "1", "8", "-o", g)
    code, out = run(capsys, "poa", "--game", g, "--k", "1")
    assert code == 0 and out.out.startswith("poa=Infinite")
    code, out = run(capsys, "--json", "multichannel", "--game", g, "--q", "2", "--h", "eps:1/10")
    assert code == 0 and json.loads(out.out)["status"] == "stable"
    code, out = run(capsys, "multichannel", "--game", g, "--h", "bogus")
    assert code == 1 and "h:" in out.err


def test_hyper(tmp_path, capsys):
    path = tmp_path / "h.json"
    path.write_text(json.dumps({"v": 1, "n": 4, "hyperedges": [[[0, 1, 2], 2], [[2, 3], 1]]}))
    code, out = run(capsys, "hyper", "--game", str(path), "--k", "2")
    assert code == 0 and "acyclic_identity=OK" in out.out


def test_gallery_list_and_unknown(capsys):
    code, out = run(capsys, "gallery", "list")
    assert code == 0 and "fig1" in out.out.split()
    code, out = run(capsys, "gallery", "build", "nope")
    assert code == 1


def test_missing_subcommand():
    with pytest.raises(SystemExit):
        main([])
