"""End-to-end runs of the command-line frontend."""

import pytest

from fuchsguess.cli import main
from fuchsguess.ising import order3_apparent_factor
from fuchsguess.operators import DiffOp
from fuchsguess.series import TruncatedSeries

from conftest import P, P2


@pytest.fixture
def outdir(tmp_path, monkeypatch):
    monkeypatch.setenv("FUCHSGUESS_OUTDIR", str(tmp_path))
    return tmp_path


def run(*argv):
    return main([str(a) for a in argv])


def test_optimal_prints_table_row(capsys):
    assert run("optimal", "d=43", "q=52", "C=1121") == 0
    assert capsys.readouterr().out == "Q0=84 D0=73 f0=3 N0=6287\n"


def test_fit(capsys):
    assert run("fit", "1,0,1", "0,1,1", "0,0,0") == 0
    assert capsys.readouterr().out.startswith("d=")


def test_builtin_reduce_reconstruct_roundtrip(outdir, capsys):
    assert run("gen", "builtin", "L3t", "-o", "l3t.txt") == 0
    assert run("gen", "reduce", outdir / "l3t.txt", "--prime", P, "--prime", P2, "-o", "img.txt") == 0
    targets = ["0:-2,0,2", "inf:1,2,5/2", "1/16:-15/4,-13/4,-1", "1/4:0,1,7/2",
               "root(-8 252 -1678 3607 4352):0,1,3:apparent"]
    argv = ["reconstruct", outdir / f"img.{P}.txt", outdir / f"img.{P2}.txt", "-o", "rec.txt"]
    for t in targets:
        argv += ["--target", t]
    assert run(*argv) == 0
    assert (outdir / "rec.txt").read_text() == (outdir / "l3t.txt").read_text()
    rec = DiffOp.from_text((outdir / "rec.txt").read_text())
    assert rec == order3_apparent_factor().normalize()


def test_series_guess_roundtrip(outdir):
    assert run("gen", "builtin", "K", "-o", "k.txt") == 0
    assert run("gen", "series", outdir / "k.txt", "--prime", P, "--terms", 40, "-o", "k.ser") == 0
    assert run("guess", outdir / "k.ser", "--Q", 2, "--D", 1, "-o", "g.txt") == 0
    g = DiffOp.from_text((outdir / "g.txt").read_text())
    assert g.to_dx().equivalent(DiffOp.from_text((outdir / "k.txt").read_text()).reduce(P))
    assert run("guess", outdir / "k.ser", "-o", "m.txt") == 0
    m = DiffOp.from_text((outdir / "m.txt").read_text())
    assert m.to_dx().equivalent(g.to_dx())


def test_apply_and_zero(outdir):
    run("gen", "builtin", "K", "--prime", P, "-o", "kp.txt")
    run("gen", "series", outdir / "kp.txt", "--terms", 30, "-o", "k.ser")
    assert run("apply", outdir / "kp.txt", outdir / "k.ser", "-o", "z.ser") == 0
    z = TruncatedSeries.from_text((outdir / "z.ser").read_text())
    assert z.is_zero()


def test_exponents_output(outdir, capsys):
    run("gen", "builtin", "L3t", "-o", "l3t.txt")
    assert run("exponents", outdir / "l3t.txt", "--point", "0", "--point", "inf") == 0
    out = capsys.readouterr().out.splitlines()
    assert out == ["point=0 exponents=-2,0,2", "point=inf exponents=1,2,5/2"]


def test_factor_and_sympow(outdir, capsys):
    (outdir / "prod.txt").write_text(
        ((DiffOp.d() - DiffOp.scalar(1)) * (DiffOp.theta() - 2)).reduce(P).to_text())
    assert run("factor", outdir / "prod.txt", "--rho", 2, "--budget", 128) == 0
    out = capsys.readouterr().out
    assert out.startswith("# status factor")
    run("gen", "builtin", "K", "--prime", P, "-o", "kp.txt")
    assert run("sympow", outdir / "kp.txt", "--m", 2) == 0
    assert "#order 3" in capsys.readouterr().out


def test_exit_code_malformed_input(outdir):
    (outdir / "bad.txt").write_text("#basis Dx\n#order 1\n#field rational\ncoeff 0: 1\ncoeff 1: x\n")
    assert run("exponents", outdir / "bad.txt") == 2
    assert run("optimal", "d=1") == 2
    assert run("exponents", outdir / "missing.txt") == 2


def test_exit_code_need_more_terms(outdir):
    run("gen", "builtin", "K", "--prime", P, "-o", "kp.txt")
    run("gen", "series", outdir / "kp.txt", "--terms", 8, "-o", "short.ser")
    assert run("guess", outdir / "short.ser", "--Q", 2, "--D", 4) == 3


def test_exit_code_bad_prime(outdir):
    run("gen", "builtin", "K", "-o", "k.txt")
    assert run("gen", "reduce", outdir / "k.txt", "--prime", 32748) == 4


def test_exit_code_reconstruction_failure(outdir):
    run("gen", "builtin", "L4", "-o", "l4.txt")
    run("gen", "reduce", outdir / "l4.txt", "--prime", P, "--prime", P2, "-o", "i.txt")
    assert run("reconstruct", outdir / f"i.{P}.txt", outdir / f"i.{P2}.txt") == 5
