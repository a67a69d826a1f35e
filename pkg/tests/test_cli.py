from importlib import resources

import pytest

from trustlogic.cli import main


def data(name):
    return str(resources.files("trustlogic").joinpath("data").joinpath(name))


def test_check_example(capsys):
    assert main(["check", data("transfer.proof"), "--hyps", data("transfer.hyps")]) == 0
    assert "derivation-0: ok" in capsys.readouterr().out


def test_check_records_and_desugar(capsys):
    assert main(["check", data("transfer.proof"), "--format", "records", "--desugar"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("derivation-0 ok")


def test_check_rejects_bad_derivation(tmp_path, capsys):
    p = tmp_path / "bad.proof"
    p.write_text('(ax (seq ("P(x)") "Q(x)"))')
    assert main(["check", str(p)]) == 1
    assert "SchemaMismatch" in capsys.readouterr().err


def test_check_hypotheses_must_cover_context(tmp_path):
    hyps = tmp_path / "h.txt"
    hyps.write_text("T[a, s] C(s)\n")
    assert main(["check", data("transfer.proof"), "--hyps", str(hyps)]) == 1


def test_empty_and_missing_inputs(tmp_path, capsys):
    p = tmp_path / "empty.proof"
    p.write_text("")
    assert main(["check", str(p)]) == 2
    assert main(["check", str(tmp_path / "missing.proof")]) == 2
    assert "cannot read" in capsys.readouterr().err


def test_eval(capsys):
    assert main(["eval", data("intensional.model"), "s = t", "--state", "w"]) == 0
    assert main(["eval", data("intensional.model"), "K[a] P(s)", "--state", "w"]) == 1
    assert capsys.readouterr().out.split() == ["true", "false"]


def test_eval_input_errors(capsys):
    assert main(["eval", data("intensional.model"), "P(zz)", "--state", "w"]) == 2
    assert "UnknownTerm: term zz" in capsys.readouterr().err
    assert main(["eval", data("intensional.model"), "P(s)", "--state", "nowhere"]) == 2
    assert main(["eval", data("intensional.model"), "P(s", "--state", "w"]) == 2


def test_validate(tmp_path, capsys):
    assert main(["validate", data("hyper.model")]) == 0
    p = tmp_path / "bad.model"
    p.write_text("(model (states w) (domain d0) (term-table (\"x\" d0)) (eq w))")
    assert main(["validate", str(p)]) == 1
    assert "agent" not in capsys.readouterr().err


def test_reduce(capsys):
    assert main(["reduce", "(\\x. x) y"]) == 0
    assert "normal form after 1 step" in capsys.readouterr().out
    assert main(["reduce", "(\\w. w w) (\\w. w w)", "--fuel", "3"]) == 1
    assert "FuelExhausted" in capsys.readouterr().out


def test_theory(capsys):
    assert main(["theory", data("services.beh"), "--depth", "2"]) == 0
    plain = capsys.readouterr()
    assert plain.out.strip() and "closure cut" in plain.err
    assert main(["theory", data("services.beh"), "--structured", "--depth", "2"]) == 0
    assert ";; translate" in capsys.readouterr().out
    assert main(["theory", data("services.beh"), "--lift", "T", "--depth", "1"]) == 0
    assert capsys.readouterr().out.startswith("T[a,")


def test_theory_mass_error(tmp_path, capsys):
    p = tmp_path / "bad.beh"
    p.write_text("s |>1/2 o\n")
    assert main(["theory", str(p)]) == 2
    assert "MassError" in capsys.readouterr().err


def test_corpus(capsys):
    assert main(["corpus", "--list"]) == 0
    names = capsys.readouterr().out.split()
    assert "transfer" in names
    assert main(["corpus", "--case", "transfer", "--case", "lambda", "--format", "records"]) == 0
    assert capsys.readouterr().out.startswith("transfer pass")
    assert main(["corpus", "--case", "nonsense"]) == 2


def test_fuzz(capsys):
    assert main(["fuzz", "--models", "3"]) == 0
    assert "0 violations" in capsys.readouterr().out


def test_bad_flag_values():
    with pytest.raises(SystemExit):
        main(["fuzz", "--models", "0"])
    with pytest.raises(SystemExit):
        main(["reduce", "x", "--fuel", "-1"])
