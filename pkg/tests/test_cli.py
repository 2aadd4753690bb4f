import json
import subprocess
import sys

import pytest

from bracketing.bounds import BOUND_NAMES
from bracketing.cli import main, parse_dims


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_cover_d1(capsys):
    code, out, _ = run(capsys, "cover", "-d", "1", "-e", "0.5")
    lines = out.splitlines()
    assert code == 0
    assert len(lines) == 3
    assert json.loads(lines[0])["b"] == [0.5]
    assert lines[-1].startswith("count=2 height=1 ")


def test_cover_trivial(capsys):
    code, out, _ = run(capsys, "cover", "-d", "2", "-e", "1.0")
    assert code == 0
    assert out.splitlines()[-1].startswith("count=1 height=0")


def test_cover_budget(capsys, tmp_path):
    f = tmp_path / "cover.jsonl"
    code, out, err = run(capsys, "cover", "-d", "3", "-e", "0.1", "--max-leaves", "100", "-o", str(f))
    assert code == 3
    assert out == ""
    assert "truncated count=100" in err
    lines = f.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 101
    assert json.loads(lines[-1])["truncated"] is True


def test_cover_csv_file(capsys, tmp_path):
    f = tmp_path / "cover.csv"
    code, out, _ = run(capsys, "cover", "-d", "2", "-e", "0.5", "--format", "csv", "-o", str(f))
    assert code == 0
    assert out.startswith("count=6 ")
    assert f.read_text(encoding="utf-8").splitlines()[0] == "a1,a2,b1,b2,t,w"


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "-d", "1..3", "-e", "0.1,0.5")
    assert code == 0
    rows = [line.split(",") for line in out.splitlines()]
    header = rows[0]
    assert header == ["d", "epsilon", *BOUND_NAMES]
    assert len(rows) == 1 + 6
    by = {(r[0], r[1]): dict(zip(header, r)) for r in rows[1:]}
    r3 = by[("3", "0.1")]
    assert float(r3["new_dge3"]) == 4500.0
    assert float(r3["new_dge3"]) < float(r3["thiemard"])
    r2 = by[("2", "0.1")]
    assert r2["d2_explicit"] and r2["new_d2"] and not r2["thiemard"]
    r1 = by[("1", "0.1")]
    assert r1["thiemard"] == r1["new_dge3"] == r1["prior_explicit"] == ""


def test_height(capsys):
    code, out, _ = run(capsys, "height", "-d", "2", "-e", "0.5")
    assert code == 0
    assert out.strip() == "height=2 bound=2 improved_bound=2"


def test_disc(capsys, tmp_path):
    f = tmp_path / "p.txt"
    f.write_text("0.5\n", encoding="utf-8")
    code, out, _ = run(capsys, "disc", "-i", str(f), "-e", "0.25")
    assert code == 0
    lower, upper, eps, n, d, size = out.strip().split(",")
    assert float(lower) <= 0.5 <= float(upper)
    assert (eps, n, d, size) == ("0.25", "1", "1", "4")


def test_disc_bad_files(capsys, tmp_path):
    f = tmp_path / "bad.txt"
    f.write_text("0.1\n0.2\n1.0\n", encoding="utf-8")
    code, _, err = run(capsys, "disc", "-i", str(f), "-e", "0.25")
    assert code == 2
    assert "line 3" in err
    f.write_text("", encoding="utf-8")
    assert run(capsys, "disc", "-i", str(f), "-e", "0.25")[0] == 2
    assert run(capsys, "disc", "-i", str(tmp_path / "missing"), "-e", "0.25")[0] == 2


@pytest.mark.parametrize("d,eps,seed", [(2, "0.1", "42"), (3, "0.2", "0")])
def test_verify_passes(capsys, d, eps, seed):
    code, out, _ = run(capsys, "verify", "-d", str(d), "-e", eps, "--seed", seed, "--samples", "20000")
    assert code == 0, out
    assert "FAIL" not in out
    assert "delta_recursion" in out and "weight_strict" in out


def test_verify_fault_injection(capsys):
    code, out, _ = run(capsys, "verify", "-d", "2", "-e", "0.1", "--inject-fault", "--samples", "2000")
    assert code == 1
    assert "FAIL terminal_child_weight_is_epsilon" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["cover", "-d", "2", "-e", "0"],
        ["cover", "-d", "2", "-e", "1.5"],
        ["cover", "-d", "0", "-e", "0.5"],
        ["height", "-d", "2", "-e", "abc"],
        ["bounds", "-d", "3..1", "-e", "0.1"],
    ],
)
def test_invalid_input_exits_2(capsys, argv):
    with pytest.raises(SystemExit) as info:
        code = main(argv)
        raise SystemExit(code)
    assert info.value.code == 2


def test_parse_dims():
    assert parse_dims("4") == [4]
    assert parse_dims("2..6") == [2, 3, 4, 5, 6]


def test_byte_identical_runs(tmp_path):
    outs = []
    for k in range(2):
        f = tmp_path / f"c{k}.jsonl"
        res = subprocess.run(
            [sys.executable, "-m", "bracketing", "cover", "-d", "3", "-e", "0.2", "-o", str(f)],
            capture_output=True, check=True,
        )
        outs.append((res.stdout, f.read_bytes()))
    assert outs[0] == outs[1]
    assert outs[0][1].count(b"\n") == int(outs[0][0].split()[0].split(b"=")[1])
