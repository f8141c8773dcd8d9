"""Command-line harness: frozen reports, exit codes, error surfacing."""

import pytest

from qendo.cli import main

STEP_MAP = "(-inf,0) : 1*x + 0\n[0,+inf) : 1*x + 1\n"
IDENTITY_MAP = "(-inf,+inf) : 1*x\n"
PLATEAU_MAP = "(-inf,0) : 1*x\n[0,1] : 0*x\n(1,+inf) : 1*x - 1\n"
CONSTANT_MAP = "(-inf,+inf) : 0*x + 2\n"
BAD_MAP = "(-inf,0) : 1*x\nwhat is this\n"
CHAIN_FOREST = "root - 0\nmid root 1\ntop mid 2\n"
BAD_ROOT_FOREST = "root - 1\nmid root 2\n"


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def test_classify_step_map(files, capsys):
    # image misses exactly [0,1): the two sloped pieces cover (-inf,0) and
    # [1,+inf), nothing else
    code = main(["classify", files("step.map", STEP_MAP)])
    out = capsys.readouterr().out
    assert code == 0
    assert "classification: injective, not surjective; missing [0,1)" in out
    assert "image: (-inf,0) u [1,+inf)" in out
    assert "value never attained: 1/2" in out
    assert "left-cancellation witness: none (map is injective)" in out
    assert "differing at 1/2" in out


def test_classify_identity(files, capsys):
    code = main(["classify", files("id.map", IDENTITY_MAP)])
    out = capsys.readouterr().out
    assert code == 0
    assert "classification: automorphism" in out
    assert "image: (-inf,+inf)" in out
    assert "none (map is injective)" in out
    assert "none (map is surjective)" in out


def test_classify_plateau(files, capsys):
    # continuous with a flat step: surjective but collapses [0,1]
    code = main(["classify", files("plateau.map", PLATEAU_MAP)])
    out = capsys.readouterr().out
    assert code == 0
    assert "classification: surjective, not injective" in out
    assert "collapsing pair:" in out
    assert "left-cancellation witness: constants at" in out
    assert "right-cancellation witness: none (map is surjective)" in out


def test_classify_constant(files, capsys):
    code = main(["classify", files("c.map", CONSTANT_MAP)])
    out = capsys.readouterr().out
    assert code == 0
    assert "classification: constant at 2; missing (-inf,2) u (2,+inf)" in out


def test_classify_parse_error_names_line(files, capsys):
    code = main(["classify", files("bad.map", BAD_MAP)])
    err = capsys.readouterr().err
    assert code == 2
    assert "line 2" in err


def test_factorize_plateau(files, capsys):
    code = main(["factorize", files("plateau.map", PLATEAU_MAP)])
    out = capsys.readouterr().out
    assert code == 0
    assert "spread part strictly monotone: yes" in out
    assert "composite verified on 300 points" in out
    assert "memo snapshot:" in out


def test_factorize_identity_and_constant(files, capsys):
    assert main(["factorize", files("id.map", IDENTITY_MAP)]) == 0
    out = capsys.readouterr().out
    assert "composite verified on 300 points" in out
    assert main(["factorize", files("c.map", CONSTANT_MAP)]) == 0
    out = capsys.readouterr().out
    # even a constant factors through a strictly monotone spread part
    assert "spread part strictly monotone: yes" in out
    assert "composite verified on 300 points" in out


def test_factorize_respects_budget(files, capsys):
    code = main(["--budget", "50", "factorize", files("id.map", IDENTITY_MAP)])
    out = capsys.readouterr().out
    assert code == 0
    assert "composite verified on 50 points" in out


def test_suite_pass_and_exit_zero(capsys):
    code = main(["suite", "sim"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.count("[PASS]") == 2
    assert "result: PASS" in out
    assert "[FAIL]" not in out


def test_suite_header_reflects_config(capsys):
    code = main(["--seed", "7", "--budget", "10", "suite", "sim"])
    out = capsys.readouterr().out
    assert code == 0
    assert "suite sim (seed=7, budget=10, depth=2048)" in out


def test_suite_rows_format(capsys):
    code = main(["--format", "rows", "suite", "sim"])
    out = capsys.readouterr().out
    assert code == 0
    line = out.splitlines()[0]
    assert line.split("\t")[:3] == ["sim", "equivalence-laws", "pass"]


def test_suite_deterministic_report(capsys):
    main(["suite", "sim"])
    first = capsys.readouterr().out
    main(["suite", "sim"])
    second = capsys.readouterr().out
    assert first == second


def test_suite_unknown_name(capsys):
    code = main(["suite", "nosuch"])
    err = capsys.readouterr().err
    assert code == 2
    assert "unknown suite" in err


def test_suite_actions_rejects_bad_forest(files, capsys):
    code = main(["suite", "actions",
                 "--forest", files("bad.forest", BAD_ROOT_FOREST)])
    err = capsys.readouterr().err
    assert code == 2
    assert "root 'root' must carry label 0" in err


def test_suite_actions_takes_extra_forest(files, capsys):
    code = main(["suite", "actions",
                 "--forest", files("chain.forest", CHAIN_FOREST)])
    out = capsys.readouterr().out
    assert code == 0
    assert "across 4 forests" in out


def test_act_same_size_image(files, capsys):
    code = main(["act", files("chain.forest", CHAIN_FOREST),
                 files("step.map", STEP_MAP), "top", "0,1"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.strip() == "(top; {0, 1}) -> (top; {1, 2})"


def test_act_collapse_descends(files, capsys):
    code = main(["act", files("chain.forest", CHAIN_FOREST),
                 files("c.map", CONSTANT_MAP), "top", "0,1"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.strip() == "(top; {0, 1}) -> (mid; {2})"


def test_act_wrong_point_size(files, capsys):
    code = main(["act", files("chain.forest", CHAIN_FOREST),
                 files("id.map", IDENTITY_MAP), "top", "5"])
    err = capsys.readouterr().err
    assert code == 2
    assert "needs 2 elements" in err


def test_generic_report(capsys):
    code = main(["generic", "core", "--points", "4"])
    out = capsys.readouterr().out
    assert code == 0
    assert "certified generic embedding, variant core" in out
    assert out.count("(red)") == 4
    assert "memo snapshot:" in out


def test_generic_deterministic(capsys):
    main(["generic", "pm", "--points", "6"])
    first = capsys.readouterr().out
    main(["generic", "pm", "--points", "6"])
    second = capsys.readouterr().out
    assert first == second
    assert out_count_red(first) == 6


def out_count_red(text: str) -> int:
    return text.count("(red)")
