import json
import subprocess
import sys

import pytest

from conftest import FIXTURES
from stralg import cli
from stralg.bands import Indeterminate
from stralg.ordertype import expr_equal, expr_from_json, parse_expr

G0 = str(FIXTURES / "gamma0.alg")
MAIN = "((w+xi(z)+w*).w+w*).2 + w + xi(z,z,w*+(w+w*).w) + w*"


def run(capsys, *argv):
    code = cli.run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check(capsys):
    code, out, _ = run(capsys, "check", G0, "--format", "json")
    assert code == 0 and json.loads(out)["vertices"] == 23


def test_ordertype_text_and_json_agree(capsys):
    code, text, _ = run(capsys, "ordertype", G0, "--string", "a0", "--side", "+1")
    assert code == 0 and expr_equal(parse_expr(text.strip()), parse_expr(MAIN))
    code, out, _ = run(capsys, "ordertype", G0, "--string", "a0", "--side", "+1", "--format", "json")
    data = json.loads(out)
    assert code == 0 and expr_from_json(data["tree"]) == parse_expr(data["text"]) == parse_expr(text.strip())


def test_output_is_deterministic(capsys):
    argv = ("bands", G0, "--format", "json")
    assert run(capsys, *argv) == run(capsys, *argv)


def test_bands_dot_restricted_to_the_reachable_classes(capsys):
    code, out, _ = run(capsys, "bands", G0, "--string", "a0", "--side", "+1", "--format", "dot")
    assert code == 0 and out.startswith("digraph")
    assert out.count("->") == 2


def test_bands_json_lists_eight_classes(capsys):
    _, out, _ = run(capsys, "bands", G0, "--format", "json")
    data = json.loads(out)
    assert len(data["classes"]) == 8 and sum(c["domestic"] for c in data["classes"]) == 4


def test_hammock_neighbours(capsys):
    code, out, _ = run(capsys, "hammock", G0, "--string", "a0", "--side", "+1", "--pred", "A1a0")
    assert code == 0 and out.strip() == "B2A5a3A1a0"


def test_condense_report(capsys):
    code, out, _ = run(capsys, "condense", G0, "--string", "a0", "--side", "+1", "--class", "k1K2", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["nB"] == 1 and data["kB"] == 3


def test_limits(capsys):
    code, out, _ = run(capsys, "limits", G0, "--string", "a0", "--side", "+1", "--class", "k1K2", "--from", "A2A1a0")
    assert code == 0 and "^inf(e3E2E1).A2A1a0 PLUS" in out


def test_completion(capsys):
    code, out, _ = run(capsys, "completion", G0, "--expr", "(w+w*).3", "--format", "json")
    assert code == 0 and json.loads(out)["census"]["added_points"] == 3
    code, out, _ = run(capsys, "completion", G0, "--class", "k1K2", "--string", "a0", "--side", "+1")
    assert code == 0 and out.split() == ["MINUS", "PLUS", "ZERO"]


@pytest.mark.parametrize(
    "argv",
    [
        ("check", "/nonexistent.alg"),
        ("ordertype", G0, "--string", "aQ", "--side", "+1"),
        ("ordertype", G0, "--string", "a0", "--side", "2"),
        ("completion", G0, "--expr", "xi()"),
        ("completion", G0, "--expr", "w"),
        ("condense", G0, "--string", "a0", "--side", "+1", "--class", "K99"),
        ("hammock", G0, "--string", "a0", "--side", "+1", "--succ", "A2A1a0", "--depth", "0"),
        ("nosuchcommand", G0),
    ],
)
def test_input_errors_exit_1(capsys, argv):
    code, _, err = run_safely(capsys, argv)
    assert code == 1 and err


def run_safely(capsys, argv):
    try:
        code = cli.run(list(argv))
    except SystemExit as stop:
        code = stop.code
    out, err = capsys.readouterr()
    return code, out, err


def test_indeterminate_exits_2(capsys, monkeypatch):
    def give_up(key):
        raise Indeterminate("cap reached")

    monkeypatch.setattr(cli, "hammock_order_type", give_up)
    code, _, err = run(capsys, "ordertype", G0, "--string", "a0", "--side", "+1")
    assert code == 2 and "INDETERMINATE" in err


def test_internal_invariant_exits_3(capsys, monkeypatch):
    def broken(key):
        raise AssertionError("invariant")

    monkeypatch.setattr(cli, "hammock_order_type", broken)
    code, _, _ = run(capsys, "ordertype", G0, "--string", "a0", "--side", "+1")
    assert code == 3


def test_console_entry_point():
    done = subprocess.run(
        [sys.executable, "-m", "stralg.cli", "ordertype", G0, "--string", "a0", "--side", "+1"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert done.returncode == 0 and expr_equal(parse_expr(done.stdout.strip()), parse_expr(MAIN))
