import json
import subprocess
import sys

import pytest

from commtower.cli import main


def write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def run_json(capsys, argv):
    code = main(argv + ["--json"])
    return code, json.loads(capsys.readouterr().out)


def test_graph_chromatic_c5(tmp_path, capsys):
    g = write(tmp_path / "c5.json", {"n": 5, "edges": [[i, (i + 1) % 5] for i in range(5)]})
    code, out = run_json(capsys, ["graph", "chromatic", "--graph", g])
    assert code == 0
    assert out == {"omega": 2, "chi": 3, "chi_f": "5/2", "chi_c": "5/2", "star_extremal": True}


def test_grid_sandwich_and_max(tmp_path, capsys):
    g = write(tmp_path / "edge.json", {"dim": 1, "vertices": [[0], [1]], "edges": [[0, 1]]})
    code, out = run_json(capsys, ["grid", "sandwich", "--graph", g, "--box", "10"])
    assert code == 0 and out["lower"] == "5/12" and out["upper"] == "1/2"
    D = write(tmp_path / "d.json", [[1], [-1]])
    code, out = run_json(capsys, ["grid", "max", "--diffset", D, "--box", "5", "--brute"])
    assert code == 0 and out["density"] == "3/5"


def test_freeset_roundtrip(tmp_path, capsys):
    res = tmp_path / "pair.json"
    code = main(["freeset", "pair", "--c1", "1", "--c2", "-1", "--delta", "1/10", "--out", str(res)])
    capsys.readouterr()
    assert code == 0
    code, out = run_json(capsys, ["freeset", "verify", "--set", str(res), "--c1", "1", "--c2", "-1"])
    assert code == 0 and out["free"] and out["measure"] == "9/20"
    code, out = run_json(capsys, ["freeset", "verify", "--set", str(res), "--c1", "1", "--c2", "2"])
    assert code == 1 and not out["free"]


def test_tower_build_then_verify(tmp_path, capsys):
    cert = tmp_path / "cert.json"
    code = main(["tower", "build", "--action", "2", "--shape", "2", "--eps", "1/10",
                 "--strategy", "skyscraper", "--out", str(cert)])
    capsys.readouterr()
    assert code == 0
    code, out = run_json(capsys, ["tower", "verify", "--base", str(cert), "--action", "2",
                                  "--shape", "2", "--exhaustive"])
    assert code == 0 and out["verified"]
    bad = write(tmp_path / "bad.json", [["0", "1/2"]])
    code, out = run_json(capsys, ["tower", "verify", "--base", bad, "--action", "2", "--shape", "2"])
    assert code == 1 and not out["verified"]


def test_short_target_exit_code(tmp_path, capsys):
    code = main(["freeset", "pair", "--c1", "2", "--c2", "3", "--delta", "1/40",
                 "--arc-budget", "2000", "--json"])
    out = json.loads(capsys.readouterr().out)
    assert code == 2 and not out["achievedTarget"]
    assert all(e["free"] for e in out["verifiedEquations"])


def test_invalid_inputs(tmp_path, capsys):
    broken = tmp_path / "broken.json"
    broken.write_text('{"n": 3,\n  "edges": [[0, 1],]}')
    assert main(["graph", "chromatic", "--graph", str(broken)]) == 4
    err = capsys.readouterr().err
    assert f"{broken}:2:" in err
    assert main(["tower", "build", "--action", "2,x", "--shape", "2", "--eps", "1/10"]) == 4
    assert main(["freeset", "pair", "--c1", "2", "--c2", "2", "--delta", "1/10"]) == 4
    assert main(["suite", "reproduce", "--sections", "nope", "--out-dir", str(tmp_path)]) == 4


def test_resource_exit_code(capsys):
    code = main(["tower", "build", "--action", "2,3", "--shape", "2,2", "--eps", "1/10",
                 "--interval-budget", "50"])
    assert code == 3
    assert "resource" in capsys.readouterr().err


def test_module_entry_point(tmp_path):
    out = tmp_path / "s"
    p = subprocess.run([sys.executable, "-m", "commtower.cli", "suite", "reproduce",
                        "--sections", "core,graphs", "--out-dir", str(out), "--json"],
                       capture_output=True, text=True, timeout=300)
    assert p.returncode == 0, p.stderr
    summary = json.loads(p.stdout)
    assert all(r["holds"] for r in summary["results"])
    assert sorted(f.name for f in out.iterdir()) == ["core.json", "graphs.json", "summary.json"]


@pytest.mark.parametrize("argv", [["tower"], ["freeset", "pair"]])
def test_usage_errors(argv):
    with pytest.raises(SystemExit):
        main(argv)
