import subprocess
import sys

import pytest

from twosorted.cli import main
from twosorted.syntax import parse_formula

TWO = "[sig]\nfunS g/1\n[domain]\na b\n[funS g]\na->1/4 b->3/4\n"
METRIC = ("[sig]\nfunS d/2\nfunH f/1\n[domain]\na b\n[funS d]\n(a a)->0 (a b)->1/2 (b a)->1/2 (b b)->0\n"
          "[funH f]\na->a b->b\n")


@pytest.fixture
def files(tmp_path):
    (tmp_path / "m.txt").write_text(TWO)
    (tmp_path / "one.txt").write_text("[sig]\nfunS g/1\n[domain]\na\n[funS g]\na->1/2\n")
    (tmp_path / "id.map").write_text("[source] m.txt\n[target] m.txt\n[map] a->a b->b\n")
    (tmp_path / "swap.map").write_text("[source] m.txt\n[target] m.txt\n[map] a->b\n")
    (tmp_path / "far.map").write_text("[source] one.txt\n[target] one.txt\n[map] a->a\n")
    (tmp_path / "metric.txt").write_text(METRIC)
    (tmp_path / "bad.txt").write_text(METRIC.replace("(b a)->1/2", "(b a)->1/3"))
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


class TestEval:
    def test_true_false(self, files, capsys):
        m = files / "m.txt"
        assert run(capsys, "eval", m, "(existsH x (in ((g x)) (box (0 1/2))))")[0] == 0
        assert run(capsys, "eval", m, "(forallH x (in ((g x)) (box (0 1/2))))")[0] == 1

    def test_counterexample_printed(self, files, capsys):
        code, out, _ = run(capsys, "eval", files / "m.txt", "(forallS e (in ((csum (g @a) e)) (box (0 3/4))))",
                           "--format", "machine")
        assert code == 1 and out.startswith("verdict=False") and "witness=e=" in out

    def test_env(self, files, capsys):
        phi = "(and (in ((g x)) (point 1/4)) (in (r) (box (0 1/2))))"
        assert run(capsys, "eval", files / "m.txt", phi, "--env", "x=a", "--env", "r=1/4")[0] == 0
        assert run(capsys, "eval", files / "m.txt", phi, "--env", "x=b", "--env", "r=1/4")[0] == 1

    def test_budget(self, files, capsys):
        code, out, _ = run(capsys, "eval", files / "m.txt", "(existsS e (in (e e) (halfspace (1 -1) -1/1000)))",
                           "--budget", "10")
        assert code == 2 and "budget" in out

    def test_formula_file(self, files, capsys):
        (files / "phi.txt").write_text("(in ((g @b)) (point 3/4))")
        assert run(capsys, "eval", files / "m.txt", f"@{files / 'phi.txt'}")[0] == 0


class TestErrors:
    @pytest.mark.parametrize("argv", [
        [],
        ["eval"],
        ["eval", "missing.txt", "(= x x)"],
        ["transform", "approx", "(in ((g x)) (point 0))"],
        ["transform", "approx", "(in ((g x)) (point 2))", "--eps", "1/4"],
        ["selftest", "--iterations", "x"],
    ])
    def test_usage_errors(self, argv, capsys):
        assert run(capsys, *argv)[0] == 3

    def test_bad_delta(self, files, capsys):
        assert run(capsys, "eval", files / "m.txt", "(= @a @a)", "--delta", "0")[0] == 3


class TestTransform:
    def test_interp(self, capsys):
        code, out, _ = run(capsys, "transform", "interp", "(in ((g x)) (point 1/2))", "--eps", "1/5")
        assert code == 0
        lines = dict(line.split("=", 1) for line in out.splitlines())
        assert lines["approx"] == "(in ((g x)) (box (3/10 7/10)))"
        assert set(lines) == {"sneg0", "sneg1", "approx"}

    @pytest.mark.parametrize("argv", [
        ["approx", "(existsH x (in ((g x)) (point 1/2)))", "--eps", "1/8"],
        ["sneg", "(forallH x (or (R x) (in ((g x)) (box (0 1/4)))))", "--eps", "1/8"],
        ["merge", "(in ((g x)) (point 1/2))", "--eps", "1/8", "--eps2", "1/4"],
        ["sup", "--term", "(g x)", "--tau", "3/4"],
        ["sim", "--term", "(d x z)", "--z", "z"],
    ])
    def test_output_parses(self, argv, capsys):
        code, out, _ = run(capsys, "transform", *argv)
        assert code == 0
        parse_formula(out.strip())

    def test_check(self, capsys):
        code, out, _ = run(capsys, "check", "(R x y)\n(not (in ((g x)) (point 0)))", "--format", "machine")
        assert code == 0
        assert out.splitlines()[0].startswith("class=LH free_h=(x y)")
        assert out.splitlines()[1].startswith("class=L ")


class TestMorphism:
    def test_identity(self, files, capsys):
        assert run(capsys, "morphism", "elementary", files / "id.map")[0] == 0

    def test_counterexample(self, files, capsys):
        code, out, _ = run(capsys, "morphism", "elementary", files / "swap.map", "--format", "machine")
        assert code == 1
        assert any(line.startswith("check=dagger outcome=counterexample") for line in out.splitlines())

    def test_machine_output_deterministic(self, files, capsys):
        a = run(capsys, "morphism", "approx", files / "swap.map", "--format", "machine")
        b = run(capsys, "morphism", "approx", files / "swap.map", "--format", "machine")
        assert a == b

    def test_tv(self, files, capsys):
        m = files / "m.txt"
        corpus = "(in ((g x)) (point 1/4))"
        assert run(capsys, "tv", m, "--elements", "a", "--corpus", corpus)[0] == 1
        assert run(capsys, "tv", m, "--elements", "a", "b", "--corpus", corpus)[0] == 0
        assert run(capsys, "tv", m)[0] == 3


class TestMetric:
    def test_validate(self, files, capsys):
        assert run(capsys, "metric", "validate", files / "metric.txt")[0] == 0
        code, out, _ = run(capsys, "metric", "validate", files / "bad.txt", "--format", "machine")
        assert code == 1 and "axiom=symmetry" in out

    def test_uc(self, files, capsys):
        code, out, _ = run(capsys, "metric", "uc", files / "metric.txt", "--function", "f",
                           "--modulus", "1/4:1/4", "--modulus", "1/2:1/2")
        assert code == 0 and out.count("verdict=True") == 2

    def test_sim(self, files, capsys):
        code, out, _ = run(capsys, "metric", "sim", files / "metric.txt", "--a", "a", "--b", "b")
        assert code == 0 and "direction2=pass" in out


def test_selftest_exit_codes(capsys):
    assert run(capsys, "selftest", "--iterations", "5")[0] == 0
    assert run(capsys, "selftest", "--iterations", "20", "--mutation", "sneg-no-eps")[0] == 1


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "twosorted", "eval", str(files / "m.txt"), "(= @a @b)"],
                          capture_output=True, text=True)
    assert proc.returncode == 1 and proc.stdout.startswith("False")
