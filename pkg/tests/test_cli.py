import json
import os
import subprocess
import sys

import pytest

from zetadr.cli import CliConfig, main
from zetadr.errors import DomainError


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_exact_and_decimal(capsys):
    code, out, _ = run(capsys, "eval", "--fn", "zeta", "--s", "-1")
    assert code == 0
    assert "exact: -1/12" in out
    assert "value: -0.08333333333" in out


def test_eval_eta(capsys):
    code, out, _ = run(capsys, "--format", "json", "eval", "--fn", "eta", "--s", "2")
    assert code == 0
    assert json.loads(out)["value"].startswith("0.822467033424113218")


def test_eval_complex_argument(capsys):
    code, out, _ = run(capsys, "eval", "--fn", "zeta", "--s", "2,1", "--format", "json")
    assert code == 0
    assert json.loads(out)["value"].endswith("j")


def test_eval_extended_matches_bessel(capsys):
    from mpmath import mp, mpf
    from zetadr.family import bessel_series_extended

    code, out, _ = run(capsys, "--digits", "50", "eval", "--fn", "zeta_b", "--s", "3", "--b", "2",
                       "--normalization", "unnormalized", "--format", "json")
    assert code == 0
    oracle = bessel_series_extended(3, 2, tol=mpf("1e-15"), digits=50)
    with mp.workdps(40):
        assert abs(mpf(json.loads(out)["value"]) - oracle.value) < mpf("1e-10")


def test_exit_codes(capsys):
    assert run(capsys, "eval", "--fn", "zeta", "--s", "1")[0] == 2
    assert run(capsys, "bernoulli", "--n", "-1")[0] == 2
    assert run(capsys, "dr", "--family", "hzf", "--a", "-1")[0] == 2
    assert run(capsys, "identity", "--id", "T3", "--q", "0")[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["--format", "xml", "report"])
    assert info.value.code == 2
    with pytest.raises(SystemExit):
        main(["--digits", "20", "bernoulli", "--n", "2"])


def test_digits_env(capsys, monkeypatch):
    monkeypatch.setenv("ZETADR_DIGITS", "30")
    code, _, err = run(capsys, "bernoulli", "--n", "2")
    assert code == 2 and "digits" in err
    with pytest.raises(DomainError):
        CliConfig(digits=49)


def test_bernoulli(capsys):
    assert run(capsys, "bernoulli", "--n", "12")[1] == "-691/2730\n"
    assert run(capsys, "bernoulli", "--n", "3")[1] == "0\n"
    assert run(capsys, "bernoulli", "--n", "2", "--poly", "--q", "1/2")[1] == "-1/12\n"


def test_dr_dump_and_pairing(capsys):
    code, out, _ = run(capsys, "dr", "--family", "gamma", "--trunc", "4", "--dump")
    terms = json.loads(out)["terms"]
    assert [t["weight_exact"] for t in terms] == ["1", "-1", "1/2", "-1/6", "1/24"]
    code, out, _ = run(capsys, "--format", "json", "dr", "--family", "rzf", "--phi", "one", "--trunc", "60")
    rzf = json.loads(out)
    assert rzf["value"].startswith("0.581976706")
    code, out, _ = run(capsys, "--format", "json", "dr", "--family", "erzf", "--b", "0", "--phi", "one")
    assert json.loads(out)["value"] == rzf["value"]


def test_ftr(capsys):
    from mpmath import mpf

    code, out, _ = run(capsys, "--format", "json", "ftr", "--family", "gamma", "--sigma", "2", "--tau", "0")
    d = json.loads(out)
    assert code == 0 and d["integral"] == "1.0" and mpf(d["difference"]) < mpf("1e-10")
    code, out, _ = run(capsys, "--format", "json", "ftr", "--family", "rzf", "--sigma", "2")
    rzf = json.loads(out)
    assert rzf["integral"].startswith("1.6449340668482264")
    code, out, _ = run(capsys, "--format", "json", "ftr", "--family", "hzf", "--sigma", "2", "--a", "1")
    assert json.loads(out)["integral"] == rzf["integral"]
    assert run(capsys, "ftr", "--family", "rzf", "--sigma", "2", "--tau", "17")[0] == 2


def test_identity_commands(capsys):
    code, out, _ = run(capsys, "identity", "--id", "T1", "--format", "json")
    d = json.loads(out)
    assert code == 0
    assert d["dr_side"].startswith("0.58197670")
    assert d["residual_value_vs_rhs"] == "1.0"
    code, out, _ = run(capsys, "identity", "--id", "T2", "--b", "1", "--format", "json")
    assert json.loads(out)["dr_side"].startswith("0.21409726")
    _, t5, _ = run(capsys, "identity", "--id", "T5", "--format", "json")
    _, t6, _ = run(capsys, "identity", "--id", "T6", "--lambda-convention", "paper", "--format", "json")
    from mpmath import mp, mpf
    with mp.workdps(40):
        assert abs(mpf(json.loads(t6)["dr_side"]) - 2 * mpf(json.loads(t5)["dr_side"])) < mpf("1e-25")


def test_assert_gate(capsys):
    assert run(capsys, "identity", "--id", "T1", "--assert", "dr", "--tol", "1e-12")[0] == 0
    assert run(capsys, "identity", "--id", "T1", "--assert", "rhs", "--tol", "1e-12")[0] == 1


def test_sweep_csv(capsys):
    code, out, _ = run(capsys, "sweep", "--ids", "T2", "--b-values", "2,1/2", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0].startswith("id,b,q")
    assert [l.split(",")[1] for l in lines[1:]] == ["1/2", "2"]


def test_output_file(tmp_path, capsys):
    target = tmp_path / "b.json"
    code, out, _ = run(capsys, "--format", "json", "--output", str(target), "bernoulli", "--n", "4")
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["value"] == "-1/30"
    assert [p.name for p in tmp_path.iterdir()] == ["b.json"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "zetadr", "bernoulli", "--n", "12"],
                          capture_output=True, text=True, env={**os.environ, "ZETADR_DIGITS": "64"})
    assert proc.returncode == 0 and proc.stdout == "-691/2730\n"
