import json

import pytest

from siegelmodp import cli, experiments
from siegelmodp import qexp


def run(argv, capsys):
    code = cli.main(argv)
    return code, capsys.readouterr().out


def test_usage_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as e:
        cli.main(["table-aop", "--p", "3"])
    assert e.value.code == 1
    with pytest.raises(SystemExit) as e:
        cli.main([])
    assert e.value.code == 1
    assert cli.main(["filtration", "--p", "7", "--in", "/nonexistent"]) == 1


def test_gen_and_filtration(gc, tmp_path, capsys):
    code, out = run(["--format", "json", "gen", "--names", "E4", "X10"], capsys)
    assert code == 0 and [r["name"] for r in json.loads(out)] == ["E4", "X10"]
    path = tmp_path / "e4.qexp"
    path.write_text(qexp.serialize(gc["E4"].truncate(6)))
    code, out = run(["filtration", "--p", "7", "--in", str(path)], capsys)
    assert code == 0 and "omega=4" in out and "ord_h=0" in out


def test_theta_and_aop(gc, tmp_path, capsys):
    path = tmp_path / "e4.qexp"
    path.write_text(qexp.serialize(gc["E4"].truncate(4)))
    code, out = run(["theta", "--j", "2", "--p", "7", "--in", str(path)], capsys)
    assert code == 0 and qexp.parse(out).is_zero() and qexp.parse(out).weight == 12
    code, out = run(["theta", "--j", "1", "--p", "7", "--in", str(path)], capsys)
    assert out.count("qexp2") == 3
    code, out = run(["aop", "--j", "2", "--M", "5", "--p", "5", "--in", str(path)], capsys)
    F = qexp.parse(out)
    assert F.weight == 28 and F.coeffs == {(0, 0, 0): 1}


def test_tables(gc, capsys):
    code, out = run(["--format", "csv", "table-aop", "--p", "5", "--kmax", "10"], capsys)
    assert code == 0 and out.splitlines()[0].startswith("p,k,ord")
    code, out = run(["table-kernel", "--primes", "79", "--kmax", "60"], capsys)
    assert code == 0 and " 79 | 0, 40" in out


def test_verify_exit_codes(gc, capsys, monkeypatch):
    code, out = run(["verify", "--suite", "gates"], capsys)
    assert code == 0 and "passed=True" in out
    monkeypatch.setattr(experiments, "verify", lambda suite, gc: [experiments.Check("x", False)])
    code, _ = run(["verify"], capsys)
    assert code == 2
