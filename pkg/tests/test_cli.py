import json

import pytest

from padicforms.cli import EXIT_CONFIG, EXIT_OK, EXIT_VERIFICATION, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def no_bare_numbers(node):
    """All JSON numerics must be decimal strings (booleans are fine)."""
    if isinstance(node, bool) or node is None:
        return True
    if isinstance(node, (int, float)):
        return False
    if isinstance(node, dict):
        return all(no_bare_numbers(v) for v in node.values())
    if isinstance(node, list):
        return all(no_bare_numbers(v) for v in node)
    return True


def test_ordinary_rank_command(capsys):
    code, out, _ = run_cli(capsys, "ordinary-rank", "--p", "5", "--k", "12")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload == {"k": "12", "p": "5", "rank": "1"}


def test_slopes_command_deterministic(capsys):
    args = ["slopes", "--p", "5", "--k", "4", "--I", "8", "--m", "8"]
    code1, out1, _ = run_cli(capsys, *args)
    code2, out2, _ = run_cli(capsys, *args)
    assert code1 == code2 == EXIT_OK
    assert out1 == out2  # byte-identical for identical JobConfig
    payload = json.loads(out1)
    assert no_bare_numbers(payload)
    assert payload["slopes"]["slopes"][0] == {"mult": "1", "slope": "0"}


def test_basis_command(capsys):
    code, out, _ = run_cli(capsys, "basis", "--k", "12", "--Q", "8")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["dim"] == "2"
    assert payload["forms"][1]["coeffs"][2] == "-24"  # tau(2)


def test_tp_matrix_command(capsys):
    code, out, _ = run_cli(capsys, "tp-matrix", "--k", "12", "--p", "5")
    payload = json.loads(out)
    assert code == EXIT_OK
    assert payload["rows"][1][1] == "4830"


def test_control_check_command(capsys):
    code, out, _ = run_cli(capsys, "control-check", "--k", "4", "--p", "5", "--n", "1")
    assert code == EXIT_OK
    assert json.loads(out)["verdict"] == "pass"
    # weight-2 boundary variant is routed automatically
    code, out, _ = run_cli(capsys, "control-check", "--k", "2", "--p", "5", "--n", "1")
    assert code == EXIT_OK
    assert json.loads(out)["weight2_twist"] is True


def test_family_fit_command(capsys):
    code, out, _ = run_cli(
        capsys,
        "family-fit",
        "--p", "5", "--component", "0",
        "--weights", "4,8,12,16", "--hecke-primes", "2,5", "--m", "6",
    )
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["rank"] == "1"
    assert payload["eigenvalues"]["4"]["5"] == ["1"]
    assert no_bare_numbers(payload)


def test_classicality_command(capsys):
    code, out, _ = run_cli(
        capsys, "classicality", "--k", "4", "--p", "5", "--I", "12", "--m", "8"
    )
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["verdict"] == "pass"
    assert payload["overconvergent"] == ["0", "1"]


def test_duality_command(capsys):
    code, out, _ = run_cli(capsys, "duality", "--k", "4", "--p", "5", "--I", "8", "--m", "8")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["verdict"] == "pass"
    assert payload["theta_probe"]["control_fails"] is True


def test_disc_command(capsys):
    code, out, _ = run_cli(
        capsys,
        "disc",
        "--p", "5", "--component", "0", "--samples", "4,8,12,16",
        "--I", "6", "--m", "8", "--bounds", "0",
    )
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["D"] == "4"  # dim M_40 at the shared top weight 16 + 6*4
    assert payload["flat_degree_by_bound"]["0"]["constant"] is True
    assert no_bare_numbers(payload)


def test_up_matrix_normalizations(capsys):
    code, out, _ = run_cli(
        capsys, "up-matrix", "--k", "0", "--p", "5", "--I", "0", "--m", "6",
        "--normalization", "qexp",
    )
    assert code == EXIT_OK
    assert json.loads(out)["rows"] == [["1"]]


def test_config_errors_exit_2(capsys):
    code, _, err = run_cli(capsys, "slopes", "--p", "6", "--k", "4", "--I", "2", "--m", "8")
    assert code == EXIT_CONFIG and "not prime" in err
    code, _, err = run_cli(capsys, "slopes", "--p", "5", "--k", "4", "--I", "2", "--m", "1")
    assert code == EXIT_CONFIG
    code, _, err = run_cli(
        capsys, "slopes", "--p", "5", "--k", "4", "--I", "2", "--Q", "5", "--m", "8"
    )
    assert code == EXIT_CONFIG and "p*D" in err


def test_unknown_flags_rejected():
    with pytest.raises(SystemExit) as exc:
        main(["slopes", "--p", "5", "--k", "4", "--I", "2", "--m", "8", "--bogus", "1"])
    assert exc.value.code == 2


def test_output_file(tmp_path, capsys):
    target = tmp_path / "rank.json"
    code, out, _ = run_cli(
        capsys, "ordinary-rank", "--p", "5", "--k", "4", "--output", str(target)
    )
    assert code == EXIT_OK and out == ""
    assert json.loads(target.read_text())["rank"] == "1"


def test_env_default_m(capsys, monkeypatch):
    monkeypatch.setenv("PADICFORMS_DEFAULT_M", "4")
    code, out, _ = run_cli(capsys, "charseries", "--k", "4", "--p", "5", "--I", "4")
    assert code == EXIT_OK
    assert json.loads(out)["charseries"]["m"] == "4"
    monkeypatch.setenv("PADICFORMS_DEFAULT_M", "zero")
    code, _, err = run_cli(capsys, "charseries", "--k", "4", "--p", "5", "--I", "4")
    assert code == EXIT_CONFIG


def test_acceptance_subset_command(capsys):
    code, out, err = run_cli(capsys, "acceptance", "--criteria", "2", "--seed", "0")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["all_passed"] is True
    assert payload["criteria"][0]["number"] == "2"
    assert "criterion 2" in err
    code, _, _ = run_cli(capsys, "acceptance", "--criteria", "11")
    assert code == EXIT_CONFIG
