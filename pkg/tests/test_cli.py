import csv
import io

import pytest

from sp4cyclic.cli import DEFAULT_SEED, OUTPUT_DIR_ENV, fmt, load_config, main, UsageError


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def records(text):
    out = []
    for block in text.strip().split("\n\n"):
        pairs = (line.partition(":") for line in block.splitlines())
        out.append({k: v.strip() for k, _, v in pairs})
    return out


def test_algebra_check(capsys):
    code, out, _ = run(capsys, "algebra", "check")
    assert code == 0
    recs = records(out)
    assert {r["check"] for r in recs} >= {"jacobi", "fix_lambda_real_dim", "exponents"}
    assert all(r["passed"] == "true" for r in recs)


def test_algebra_dump(capsys):
    code, out, _ = run(capsys, "algebra", "dump")
    assert code == 0 and "structure constants" in out


def test_moduli_csv(capsys):
    code, out, _ = run(capsys, "moduli", "--genus", "2")
    assert code == 0
    first = list(csv.DictReader(io.StringIO(out.split("\n\n")[0])))[0]
    assert (first["maximal_count"], first["smooth_count"], first["hitchin_count"]) == ("48", "17", "16")
    code, out, _ = run(capsys, "moduli", "--genus", "3", "--degree", "3")
    rows = list(csv.DictReader(io.StringIO(out.split("\n\n")[1])))
    assert rows[0]["a"] == "4" and rows[0]["b"] == "8" and rows[0]["dimension_check"] == "true"


def test_moduli_bad_degree(capsys):
    code, _, err = run(capsys, "moduli", "--genus", "2", "--degree", "0")
    assert code == 1 and "degree" in err


def test_solve_converges_and_matches_oracle(capsys):
    code, out, _ = run(capsys, "solve", "--mu", "1", "--nu", "0.5", "--n", "16")
    rec = records(out)[0]
    assert code == 0 and rec["converged"] == "true"
    assert float(rec["oracle_error"]) < 1e-9


def test_solve_nu_zero_exits_two(capsys):
    code, out, _ = run(capsys, "solve", "--mu", "1", "--nu", "0", "--n", "16")
    assert code == 2 and records(out)[0]["converged"] == "false"


def test_full_mode_flag(capsys):
    code, out, _ = run(capsys, "solve", "--nu", "0.5", "--n", "8", "--full", "--init", "random")
    rec = records(out)[0]
    assert code == 0 and rec["mode"] == "full" and float(rec["offdiag_sup"]) < 1e-8


def test_hopf_energy_holonomy(capsys):
    code, out, _ = run(capsys, "hopf", "--q2", "0.25")
    assert code == 0 and records(out)[0]["hopf"] == "1"
    code, out, _ = run(capsys, "energy", "--nu", "0.5", "--n", "8")
    assert code == 0 and float(records(out)[0]["energy"]) == pytest.approx(2 ** 1.5)
    code, out, _ = run(capsys, "holonomy", "--nu", "0.5", "--n", "8", "--format", "csv")
    row = list(csv.DictReader(io.StringIO(out)))[0]
    assert code == 0 and float(row["symplectic_defect"]) < 1e-12


def test_higgs_invariants(capsys):
    code, out, _ = run(capsys, "higgs", "invariants", "--mu", "2", "--nu", "0.5", "--q2", "0.1")
    rec = records(out)[0]
    assert complex(rec["tr_phi2"]) == pytest.approx(0.4)
    assert complex(rec["tr_phi4"]) == pytest.approx(4 + 0.04)


def test_rigidity(capsys):
    code, out, _ = run(capsys, "rigidity", "--frame", "1,1,0.7")
    assert code == 0 and records(out)[0]["dimension"] == "0"
    code, _, err = run(capsys, "rigidity", "--frame", "1,0,0.7")
    assert code == 1 and "no-strict" in err
    code, out, _ = run(capsys, "rigidity", "--frame", "1,0,0.7", "--no-strict")
    assert records(out)[0]["dimension"] == "2"


def test_usage_errors(capsys):
    assert run(capsys, "solve", "--n", "7")[0] == 1
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys, "solve", "--mu", "wave:1")[0] == 1
    assert run(capsys, "solve", "--tol", "-1")[0] == 1


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[higgs]\nmu = 1\nnu = 0.5\n\n[grid]\nn = 8\n\n[output]\nformat = csv\n")
    code, out, _ = run(capsys, "energy", "--config", str(cfg))
    assert code == 0 and out.startswith("converged,")
    # command line wins over the file
    code, out, _ = run(capsys, "energy", "--config", str(cfg), "--format", "text")
    assert out.startswith("converged: true")


def test_config_strict(tmp_path):
    cfg = tmp_path / "bad.ini"
    cfg.write_text("[grid]\nn = 8\ntypo = 1\n")
    with pytest.raises(UsageError, match=r"bad.ini:3: unknown key 'typo'"):
        load_config(str(cfg))
    cfg.write_text("[grid]\nn = eight\n")
    with pytest.raises(UsageError, match=r":2: bad value for n"):
        load_config(str(cfg))
    cfg.write_text("[nope]\nx = 1\n")
    with pytest.raises(UsageError, match="unknown section"):
        load_config(str(cfg))


def test_output_dir_env(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path / "out"))
    code, out, _ = run(capsys, "moduli", "--genus", "2", "--output", "elsewhere/census.csv")
    assert code == 0 and out == ""
    assert (tmp_path / "out" / "census.csv").read_text().startswith("genus,")


def test_deterministic_csv(tmp_path, capsys):
    args = ("solve", "--nu", "0.5", "--mu", "wave:1,0.2", "--n", "8", "--init", "random", "--format", "csv")
    a = run(capsys, *args)[1]
    b = run(capsys, *args)[1]
    assert a == b and DEFAULT_SEED > 0


def test_full_precision_formatting():
    assert fmt(0.1) == "0.10000000000000001"
    assert fmt(1 + 2j) == "1+2j"
    assert fmt(True) == "true"


def test_rigidity_spec_flags(capsys):
    code, out, _ = run(capsys, "rigidity", "--mu", "0.5", "--nu", "2", "--zero-root", "a1")
    assert code == 0 and records(out)[0]["dimension"] == "0"
    code, out, _ = run(capsys, "rigidity", "--frame", "1,0,1", "--no-strict")
    recs = records(out)
    assert recs[0]["dimension"] == "2" and len(recs) == 3


def test_dump_fields_and_tau_pair(tmp_path, capsys):
    path = tmp_path / "fields.csv"
    code, _, _ = run(capsys, "solve", "--nu", "0.5", "--n", "8", "--tau", "0.2,1.1",
                     "--dump-fields", str(path))
    rows = list(csv.DictReader(path.open()))
    assert code == 0 and len(rows) == 64 and set(rows[0]) == {"i", "j", "x", "y", "u1", "u2"}


def test_higgs_normal_form(capsys):
    code, out, _ = run(capsys, "higgs", "invariants", "--mu", "4j", "--nu", "1")
    rec = records(out)[0]
    assert rec["normal_form_mu"] == "1" and complex(rec["normal_form_nu"]) == pytest.approx(4j)
