import subprocess
import sys

import pytest

from hottloop import stdlib
from hottloop.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out.strip(), out.err.strip()


def test_check_corpus(capsys):
    code, out, err = run(capsys, "check", *map(str, stdlib.paths()))
    assert code == 0 and out == "" and err == ""


def test_check_verbose(capsys):
    code, out, _ = run(capsys, "check", "-v", str(stdlib.path("prelude.hott")))
    assert code == 0
    assert "ok Equiv" in out.splitlines() and "ok transport_arrow" in out.splitlines()


def test_check_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "check", str(tmp_path / "missing.hott"))
    assert code == 4 and "cannot open" in err


def test_check_parse_error(capsys, tmp_path):
    f = tmp_path / "p.hott"
    f.write_text("def x := 3;")
    code, _, err = run(capsys, "check", str(f))
    assert code == 2 and err.startswith(f"{f}:1:7: error: expected ':'")


def test_check_highest_severity_wins(capsys, tmp_path):
    bad = tmp_path / "bad.hott"
    bad.write_text("def b : Void := tt;")
    broken = tmp_path / "broken.hott"
    broken.write_text("def")
    code, _, _ = run(capsys, "check", str(bad), str(broken))
    assert code == 2
    code, _, _ = run(capsys, "check", str(bad), str(tmp_path / "nope.hott"))
    assert code == 4


@pytest.mark.parametrize("argv, expected", [
    (["normalize", "-c", "-e", "encode base (loop * loop * ! loop)"], "+1 : Int"),
    (["normalize", "-e", "fst <zero, base>"], "zero : Nat"),
    (["normalize", "-c", "-e", "encode base (refl S1 base)"], "0 : Int"),
    (["normalize", "--compute", "-e", "encode base (! loop * ! loop)"], "-2 : Int"),
    (["normalize", "-e", "loop * refl S1 base"], "loop : Omega"),
    (["normalize", "--no-prelude", "-e", "loop"], "loop : Id S1 base base"),
    (["normalize", "--no-prelude", "-e", "succ zero"], "succ zero : Nat"),
])
def test_normalize(capsys, argv, expected):
    code, out, _ = run(capsys, *argv)
    assert (code, out) == (0, expected)


def test_normalize_errors(capsys):
    assert run(capsys, "normalize", "-e", "zero zero")[0] == 1
    assert run(capsys, "normalize", "-e", "(zero")[0] == 2
    assert run(capsys, "normalize", "--no-prelude", "-e", "zeroInt")[0] == 1
    code, _, err = run(capsys, "normalize", "-c", "--budget", "10", "-e", "encode base (loop * loop)")
    assert code == 3 and "budget" in err


@pytest.mark.parametrize("word, n", [
    ("loop * loop * loop", 3), ("refl", 0), ("!loop * loop", 0), ("! loop", -1),
    ("loop*!loop*!loop", -1),
])
def test_winding(capsys, word, n):
    assert run(capsys, "winding", word)[:2] == (0, str(n))


@pytest.mark.parametrize("word", ["", "loop loop", "loop * refl", "base", "!!loop", "loop *"])
def test_winding_malformed(capsys, word):
    code, _, err = run(capsys, "winding", word)
    assert code == 2 and "malformed" in err


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "hottloop.cli", "winding", "loop * loop"],
                       capture_output=True, text=True)
    assert (r.returncode, r.stdout.strip()) == (0, "2")
