"""Command-line interface: exit codes, output formats, determinism."""

import json

import numpy as np
import pytest

from jacspec.cli import main

FREE_EXPLICIT = {
    "variant": "explicit",
    "a": {"kind": "periodic", "values": [1.0]},
    "b": {"kind": "periodic", "values": [0.0]},
}

POWER_EXPLICIT = {
    "variant": "explicit",
    "a": {"kind": "power", "exponent": 1.5},
    "b": {"kind": "periodic", "values": [0.0]},
}

BLENDED_UNIT = {
    "variant": "blended",
    "alpha": [1.0],
    "beta": [0.0],
    "ctilde": {"kind": "power", "exponent": 1.5},
}

MODULATED_CRITICAL = {
    "variant": "modulated",
    "alpha": [1.0, 1.0],
    "beta": [0.0, 0.0],
    "a": {"kind": "power", "exponent": 1.0},
    "b": {"kind": "periodic", "values": [0.0]},
    "s": [1.0, 1.0],
    "z": [0.0, 0.0],
}

KM_BALANCED = {
    "variant": "km",
    "alpha": [1.0, 1.0],
    "beta": [0.0, 0.0],
    "gamma": {"kind": "power", "exponent": 1.0},
    "f": {"kind": "periodic", "values": [0.0, 1.05]},
    "kappa": 2.0,
}


def write_spec(tmp_path, payload, name="spec.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------

def test_classify_exit_codes(tmp_path, capsys):
    spec = write_spec(tmp_path, FREE_EXPLICIT)
    code, out, _ = run(capsys, ["classify", "--spec", spec, "--probe", "2048"])
    assert code == 3  # conditional verdicts signal inconclusive
    payload = json.loads(out)
    assert payload["route"] == "unstructured"
    assert payload["self_adjoint"] == "conditional"

    spec = write_spec(tmp_path, BLENDED_UNIT, "blended.json")
    code, out, _ = run(capsys, ["classify", "--spec", spec])
    assert code == 0
    payload = json.loads(out)
    assert payload["route"] == "blended"
    assert payload["self_adjoint"] == "yes"
    (lo, hi), = payload["lambda_intervals"]
    assert lo == pytest.approx(-1.0, abs=1e-9)
    assert hi == pytest.approx(1.0, abs=1e-9)


def test_classify_km_definite_answer_exits_zero(tmp_path, capsys):
    payload = dict(KM_BALANCED)
    payload["f"] = {"kind": "periodic", "values": [0.0, 0.95]}
    spec = write_spec(tmp_path, payload)
    code, out, _ = run(capsys, ["classify", "--spec", spec])
    assert code == 0
    rep = json.loads(out)
    assert rep["route"] == "critical-regulated"
    assert rep["self_adjoint"] == "no"


# ---------------------------------------------------------------------------
# lambda
# ---------------------------------------------------------------------------

def test_lambda_csv_blended(tmp_path, capsys):
    spec = write_spec(tmp_path, BLENDED_UNIT)
    code, out, _ = run(capsys, ["lambda", "--spec", spec])
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "interval_lo,interval_hi"
    assert len(lines) == 2
    lo, hi = map(float, lines[1].split(","))
    assert lo == pytest.approx(-1.0, abs=1e-9)
    assert hi == pytest.approx(1.0, abs=1e-9)


def test_lambda_json_modulated(tmp_path, capsys):
    spec = write_spec(tmp_path, MODULATED_CRITICAL)
    code, out, _ = run(capsys, ["lambda", "--spec", spec, "--format", "json"])
    assert code == 0
    cells = json.loads(out)["intervals"]
    assert len(cells) == 2
    assert cells[0][0] == "-inf"  # non-finite endpoints serialize as text
    assert cells[0][1] == pytest.approx(0.0, abs=1e-9)
    assert cells[1][1] == "inf"


def test_lambda_refuses_variants_without_a_set(tmp_path, capsys):
    spec = write_spec(tmp_path, KM_BALANCED)
    code, _, err = run(capsys, ["lambda", "--spec", spec])
    assert code == 2
    assert "classify instead" in err

    spec = write_spec(tmp_path, FREE_EXPLICIT, "plain.json")
    code, _, err = run(capsys, ["lambda", "--spec", spec])
    assert code == 2


# ---------------------------------------------------------------------------
# eigs
# ---------------------------------------------------------------------------

def test_eigs_csv_free_oracle(tmp_path, capsys):
    spec = write_spec(tmp_path, FREE_EXPLICIT)
    code, out, _ = run(capsys, ["eigs", "--spec", spec, "--size", "100"])
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "index,eigenvalue"
    assert len(lines) == 101
    got = np.array([float(line.split(",")[1]) for line in lines[1:]])
    j = np.arange(1, 101)
    want = np.sort(2.0 * np.cos(j * np.pi / 101.0))
    assert np.max(np.abs(got - want)) < 1e-10


def test_eigs_range_and_json(tmp_path, capsys):
    spec = write_spec(tmp_path, FREE_EXPLICIT)
    code, out, _ = run(capsys, ["eigs", "--spec", spec, "--size", "40",
                                "--range", "0.3,1.2", "--format", "json"])
    assert code == 0
    payload = json.loads(out)
    assert payload["size"] == 40
    eigs = np.asarray(payload["eigenvalues"])
    assert np.all((eigs >= 0.3) & (eigs < 1.2))
    want = np.sort(2.0 * np.cos(np.arange(1, 41) * np.pi / 41.0))
    assert len(eigs) == int(np.sum((want >= 0.3) & (want < 1.2)))


def test_eigs_seed_only_feeds_self_check(tmp_path, capsys):
    spec = write_spec(tmp_path, FREE_EXPLICIT)
    out1 = str(tmp_path / "a.csv")
    out2 = str(tmp_path / "b.csv")
    assert main(["eigs", "--spec", spec, "--size", "60", "--grid", "16",
                 "--seed", "1", "--out", out1]) == 0
    assert main(["eigs", "--spec", spec, "--size", "60", "--grid", "16",
                 "--seed", "99", "--out", out2]) == 0
    capsys.readouterr()
    with open(out1, "rb") as fh1, open(out2, "rb") as fh2:
        assert fh1.read() == fh2.read()


def test_eigs_rejects_bad_size(tmp_path, capsys):
    spec = write_spec(tmp_path, FREE_EXPLICIT)
    code, _, err = run(capsys, ["eigs", "--spec", spec, "--size", "0"])
    assert code == 2
    assert "--size" in err


# ---------------------------------------------------------------------------
# asymptotics
# ---------------------------------------------------------------------------

def test_asymptotics_csv_and_json(tmp_path, capsys):
    spec = write_spec(tmp_path, POWER_EXPLICIT)
    code, out, _ = run(capsys, ["asymptotics", "--spec", spec,
                                "--size", "50", "--z", "1,1"])
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "n,mod_u_plus,mod_u_minus,abs_eps_plus,abs_eps_minus"
    assert len(lines) == 52

    code, out, _ = run(capsys, ["asymptotics", "--spec", spec, "--size", "50",
                                "--z", "1,1", "--format", "json"])
    assert code == 0
    payload = json.loads(out)
    assert payload["mode"] == "complex-pair"
    assert payload["q"] == pytest.approx(0.0, abs=1e-12)
    assert payload["max_residual"] < 1e-10


# ---------------------------------------------------------------------------
# stolz and km-closed-forms
# ---------------------------------------------------------------------------

def test_stolz_reports_all_families(tmp_path, capsys):
    payload = dict(MODULATED_CRITICAL)
    spec = write_spec(tmp_path, payload)
    code, out, _ = run(capsys, ["stolz", "--spec", spec, "--probe", "2048"])
    assert code == 0
    rep = json.loads(out)
    for key in ("offdiagonal_ratio", "diagonal_ratio", "window_family",
                "perturbation_weighted"):
        assert key in rep
        assert rep[key]["verdict"] in ("consistent", "inconclusive",
                                       "violated")
    assert rep["offdiagonal_ratio"]["verdict"] == "consistent"


def test_km_closed_forms_even_balanced(tmp_path, capsys):
    spec = write_spec(tmp_path, KM_BALANCED)
    code, out, _ = run(capsys, ["km-closed-forms", "--spec", spec])
    assert code == 0
    rep = json.loads(out)
    assert rep["kappa"] == 2.0
    assert rep["frak_f"] == pytest.approx([0.0, 1.05])
    assert set(rep["R"].keys()) == {"0", "1"}
    assert rep["R"]["0"]["trace"] == pytest.approx(4.0, rel=1e-12)
    assert rep["R"]["0"]["discr"] == pytest.approx(4.41, rel=1e-12)
    assert rep["even_closed"]["trace"] == pytest.approx(4.0, rel=1e-12)
    assert rep["even_closed"]["discr"] == pytest.approx(4.41, rel=1e-12)


def test_validate_output_formats(tmp_path, capsys):
    spec = write_spec(tmp_path, MODULATED_CRITICAL)
    code, out, _ = run(capsys, ["validate", "--spec", spec,
                                "--probe", "2048"])
    assert code == 0
    rep = json.loads(out)
    assert rep["variant"] == "modulated"
    names = [c["name"] for c in rep["clauses"]]
    assert any("a_{n-1}/a_n" in name for name in names)

    code, out, _ = run(capsys, ["validate", "--spec", spec,
                                "--probe", "2048", "--format", "csv"])
    assert code == 0
    assert "report-only" in out


# ---------------------------------------------------------------------------
# error paths
# ---------------------------------------------------------------------------

def test_malformed_spec_names_the_field(tmp_path, capsys):
    payload = dict(KM_BALANCED)
    payload["alpha"] = [1.0, 1.0, 1.0]  # period clash with beta
    spec = write_spec(tmp_path, payload)
    code, _, err = run(capsys, ["classify", "--spec", spec])
    assert code == 2
    assert "alpha" in err


def test_broken_json_reports_position(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"variant": "km",\n  "alpha": [1,\n')
    code, _, err = run(capsys, ["classify", "--spec", str(path)])
    assert code == 2
    assert "line" in err


def test_missing_file_is_a_spec_error(capsys):
    code, _, err = run(capsys, ["classify", "--spec", "/no/such/file.json"])
    assert code == 2
    assert "cannot read" in err
