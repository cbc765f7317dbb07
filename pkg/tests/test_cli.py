import json

import pytest

from framelab import __version__
from framelab.cli import main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_construct_analyze_round_trip(tmp_path, capsys):
    f = tmp_path / "s.json"
    assert run(["construct", "simplex", "--n", "3", "--out", str(f)], capsys)[0] == 0
    manifest = json.loads((tmp_path / "s.json.manifest.json").read_text())
    assert manifest["version"] == __version__ and manifest["timestamp"]
    code, out, _ = run(["analyze", str(f), "--k", "1,2"], capsys)
    assert code == 0
    assert json.loads(out)["tc"] == pytest.approx(3.0, abs=1e-12)
    g = tmp_path / "c.json"
    assert run(["complement", str(f), "--out", str(g)], capsys)[0] == 0
    assert json.loads(g.read_text())["n"] == 1


def test_deterministic_outputs_are_byte_identical(tmp_path, capsys):
    paths = []
    for i in range(2):
        d = tmp_path / f"run{i}"
        args = ["--deterministic", "verify", "--m-list", "4,5", "--n-list", "2", "--trials", "2",
                "--seed", "3", "--out", str(d / "v.json")]
        assert run(args, capsys)[0] == 0
        args = ["--deterministic", "optimize", "--objective", "tc", "--m", "4", "--n", "2",
                "--seeds", "2", "--seed", "1", "--max-iters", "50", "--out-dir", str(d / "opt")]
        assert run(args, capsys)[0] == 0
        paths.append(d)
    for rel in ["v.json", "opt/summary.json", "opt/best_frame.json", "opt/trace_seed1.csv"]:
        assert (paths[0] / rel).read_bytes() == (paths[1] / rel).read_bytes(), rel
    m = json.loads((paths[0] / "v.json.manifest.json").read_text())
    assert m["timestamp"] is None and m["seed"] == 3


def test_deterministic_requires_seed(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--deterministic", "construct", "random_parseval", "--m", "4", "--n", "2"])
    assert exc.value.code == 2


@pytest.mark.parametrize("text,code", [
    ('{"field": "real", "n": 1, "m": 2, "entries": [[1.0, NaN]]}', 3),
    ('{"field": "real", "n": 2, "m": 3, "entries": [[1, 0, 0], [0, 1, 0]]}', 0),
])
def test_analyze_exit_codes(tmp_path, capsys, text, code):
    f = tmp_path / "f.json"
    f.write_text(text)
    assert run(["analyze", str(f)], capsys)[0] == code


def test_error_exit_codes(tmp_path, capsys, monkeypatch):
    f = tmp_path / "p.json"
    run(["construct", "paper42", "--out", str(f)], capsys)
    monkeypatch.setenv("FRAMELAB_SUBSET_CAP", "3")
    assert run(["analyze", str(f), "--k", "2"], capsys)[0] == 5
    monkeypatch.delenv("FRAMELAB_SUBSET_CAP")
    assert run(["verify", "--seed", "0", "--check", "nope"], capsys)[0] == 8
    g = tmp_path / "e.json"
    run(["construct", "random_equal_norm", "--m", "5", "--n", "2", "--seed", "0", "--out", str(g)],
        capsys)
    assert run(["complement", str(g)], capsys)[0] == 6
    assert run(["analyze", str(tmp_path / "missing.json")], capsys)[0] == 3
    assert run(["construct", "harmonic", "--m", "7"], capsys)[0] == 4


def test_verify_with_frame_and_junit(tmp_path, capsys):
    f = tmp_path / "h.json"
    run(["construct", "harmonic", "--m", "7", "--rows", "1,2,4", "--out", str(f)], capsys)
    code, _, err = run(["verify", "--seed", "0", "--trials", "0", "--m-list", "4", "--n-list", "2",
                        "--frame", str(f), "--check", "thm_eanuke_saturation",
                        "--junit", str(tmp_path / "j.xml"), "--out", str(tmp_path / "v.json")],
                       capsys)
    assert code == 0 and "0 failed" in err
    d = json.loads((tmp_path / "v.json").read_text())
    assert any(r["context"].startswith(str(f)) and r["passed"] for r in d["results"])
    assert "<testsuite" in (tmp_path / "j.xml").read_text()


def test_gradcheck_command(capsys):
    code, out, _ = run(["gradcheck", "--objective", "ne", "--k", "2", "--m", "4", "--n", "2",
                        "--seed", "1", "--tol", "1e-5"], capsys)
    assert code == 0 and float(out) < 1e-5
