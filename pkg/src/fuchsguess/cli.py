"""Command-line frontend: thin adapters from files to library operations.

Data goes to the output file (or stdout); progress goes to stderr through
logging.  Errors map to exit codes: 2 malformed input, 3 need more terms,
4 bad prime, 5 reconstruction failure, 1 anything else.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import __version__
from .errors import FuchsError, ParseError
from .factor import factor_by_exponent, symmetric_power
from .fieldcore import GF, QQ, DensePoly
from .guess import (DEFAULT_GUARD, GuessProblem, OdeFormulaModel, fit_formula, guess_ode,
                    minimal_operator_report, optimal_scan)
from .local import as_point, local_exponents, singular_points
from .operators import DX, THETA, DiffOp
from .rebuild import ExponentTarget, OperatorResidues, reconstruct_operator_report
from .series import TruncatedSeries, apply_operator, series_from_operator

log = logging.getLogger("fuchsguess")

OUTDIR_ENV = "FUCHSGUESS_OUTDIR"


# -- configuration ------------------------------------------------------------

@dataclass
class PipelineConfig:
    """Settings shared by the subcommands, loadable from a key=value file."""

    primes: list[int] = dc_field(default_factory=list)
    Q_max: int | None = None
    D_max: int | None = None
    f_max: int | None = None
    lift_bound: int = 256
    guard: int = DEFAULT_GUARD
    extra: dict[str, str] = dc_field(default_factory=dict)

    def validate(self) -> None:
        if len(set(self.primes)) != len(self.primes):
            raise ValueError("primes must be distinct")
        for name in ("Q_max", "D_max", "f_max", "lift_bound", "guard"):
            v = getattr(self, name)
            if v is not None and v <= 0:
                raise ValueError(f"{name} must be positive")

    @classmethod
    def from_pairs(cls, pairs: dict[str, str]) -> "PipelineConfig":
        cfg = cls()
        for key, value in pairs.items():
            if key == "primes":
                cfg.primes = [int(p) for p in value.replace(",", " ").split()]
            elif key in ("Q_max", "D_max", "f_max", "lift_bound", "guard"):
                setattr(cfg, key, int(value))
            else:
                cfg.extra[key] = value
        cfg.validate()
        return cfg


def read_key_values(path: str) -> dict[str, str]:
    out = {}
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected key=value, got {line!r}", lineno, path)
        k, v = line.split("=", 1)
        out[k.strip().replace("-", "_")] = v.strip()
    return out


# -- file helpers --------------------------------------------------------------

def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def load_operator(path: str) -> DiffOp:
    return DiffOp.from_text(_read(path), path)


def load_series(path: str) -> TruncatedSeries:
    return TruncatedSeries.from_text(_read(path), path)


def _output_path(name: str | None) -> Path | None:
    if name is None or name == "-":
        return None
    p = Path(name)
    outdir = os.environ.get(OUTDIR_ENV)
    if outdir and not p.is_absolute():
        p = Path(outdir) / p
    return p


def emit(text: str, output: str | None) -> None:
    path = _output_path(output)
    if path is None:
        sys.stdout.write(text)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    log.info("wrote %s", path)


def _field(prime: int | None):
    return QQ if prime is None else GF(prime)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a rational number: {text!r}") from None


def parse_target(text: str) -> ExponentTarget:
    """``point:e1,e2,...[:apparent]``; point is a number, inf or root(c0 c1 ...)."""
    parts = text.split(":")
    if len(parts) not in (2, 3) or (len(parts) == 3 and parts[2] != "apparent"):
        raise ParseError(f"bad exponent target {text!r}; expected point:e1,e2[:apparent]")
    pt = as_point(parts[0])
    point = pt.minpoly if pt.kind == "algebraic" else ("inf" if pt.kind == "infinity" else pt.value)
    exps = [_fraction(e) for e in parts[1].split(",") if e]
    return ExponentTarget(point, exps, len(parts) == 3)


# -- subcommands -------------------------------------------------------------------

def cmd_gen(args, cfg: PipelineConfig) -> int:
    if args.what == "reduce":
        L = load_operator(args.input)
        primes = args.prime or cfg.primes
        if not primes:
            raise ParseError("gen reduce needs --prime (or primes= in the config)")
        if len(primes) == 1:
            emit(L.reduce(primes[0]).to_text(), args.output)
        else:
            for p in primes:
                emit(L.reduce(p).to_text(), _suffixed(args.output, p))
        return 0
    if args.what == "series":
        L = load_operator(args.input)
        prime = args.prime[0] if args.prime else None
        if prime is not None and L.field == QQ:
            L = L.reduce(prime)
        s = series_from_operator(L.to_dx(), _fraction(args.rho), args.terms)
        emit(s.to_text(), args.output)
        return 0
    from . import ising

    table = {
        "K": ising.elliptic_k_operator, "E": ising.elliptic_e_operator,
        "L2": ising.order2_factor, "L3": ising.order3_factor,
        "L3t": ising.order3_apparent_factor, "L4": ising.order4_factor,
        "L44": ising.order4_chi4_factor,
    }
    if args.input not in table:
        raise ParseError(f"unknown builtin {args.input!r}; choose from {', '.join(table)}")
    L = table[args.input]()
    if args.prime:
        L = L.reduce(args.prime[0])
    emit(L.to_text(), args.output)
    return 0


def _suffixed(output: str | None, p: int) -> str | None:
    if output is None:
        return None
    path = Path(output)
    return str(path.with_name(f"{path.stem}.{p}{path.suffix}"))


def cmd_guess(args, cfg: PipelineConfig) -> int:
    group = tuple(load_series(p) for p in args.series)
    basis = THETA if args.basis == "theta" else DX
    guard = args.guard or cfg.guard
    if args.Q is None:
        rep = minimal_operator_report(group if len(group) > 1 else group[0],
                                      args.strategy, guard, cfg.Q_max, basis)
        log.info("%s", rep.note)
        if rep.model is not None:
            log.info("fitted %s", rep.model.report())
        if rep.operator is None:
            from .errors import NeedMoreTermsError

            raise NeedMoreTermsError(rep.note, model=rep.model)
        emit(rep.operator.to_text(), args.output)
        return 0
    res = guess_ode(GuessProblem(group, args.Q, args.D, basis, guard))
    log.info("Q=%d D=%d: %d operators, N_used=%s", res.Q, res.D, res.f, res.N_used)
    emit("".join(op.to_text() for op in res.operators), args.output)
    return 0 if res.found else 1


def cmd_fit(args, cfg: PipelineConfig) -> int:
    samples = []
    for item in args.samples:
        try:
            Q, D, N = (int(v) for v in item.split(","))
        except ValueError:
            raise ParseError(f"sample {item!r} is not Q,D,N") from None
        samples.append((Q, D, N))
    model = fit_formula(samples)
    emit(model.report() + "\n", args.output)
    return 0


def cmd_optimal(args, cfg: PipelineConfig) -> int:
    vals = {}
    for item in args.params:
        if "=" not in item:
            raise ParseError(f"expected key=value, got {item!r}")
        k, v = item.split("=", 1)
        vals[k] = int(v)
    try:
        model = OdeFormulaModel(vals["d"], vals["q"], vals["C"])
    except KeyError as exc:
        raise ParseError(f"missing parameter {exc.args[0]}=") from None
    best = optimal_scan(model, vals.get("f_max", cfg.f_max), vals.get("Q_max", cfg.Q_max))
    emit(best.report() + "\n", args.output)
    return 0


def cmd_exponents(args, cfg: PipelineConfig) -> int:
    L = load_operator(args.input)
    points = [as_point(p) for p in args.point] if args.point else singular_points(L)
    bound = args.bound or cfg.lift_bound
    lines = [local_exponents(L, pt, bound).format() for pt in points]
    emit("\n".join(lines) + "\n", args.output)
    return 0


def cmd_factor(args, cfg: PipelineConfig) -> int:
    L = load_operator(args.input)
    res = factor_by_exponent(L, args.point, _fraction(args.rho), args.budget,
                             args.guard or cfg.guard)
    log.info("probe status %s after %d terms %s", res.status, res.terms_used, res.note)
    if res.status == "inconclusive":
        from .errors import NeedMoreTermsError

        raise NeedMoreTermsError(f"probe inconclusive: {res.note}", res.terms_needed, res.terms_used)
    header = f"# status {res.status}\n"
    emit(header + res.factor.to_text(), args.output)
    return 0


def cmd_sympow(args, cfg: PipelineConfig) -> int:
    L = load_operator(args.input)
    emit(symmetric_power(L, args.m).to_text(), args.output)
    return 0


def cmd_reconstruct(args, cfg: PipelineConfig) -> int:
    images = [load_operator(p) for p in args.inputs]
    checks = [load_operator(p) for p in args.check]
    targets = [parse_target(t) for t in args.target]
    rep = reconstruct_operator_report(OperatorResidues(images), targets, checks)
    for c in rep.certificates:
        log.info("certificate: %s", c)
    log.info("%d coefficients fixed by targets, %d reconstructed", rep.fixed, rep.reconstructed)
    emit(rep.operator.to_text(), args.output)
    return 0


def cmd_apply(args, cfg: PipelineConfig) -> int:
    L = load_operator(args.operator)
    s = load_series(args.series)
    emit(apply_operator(L, s).to_text(), args.output)
    return 0


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fuchsguess",
                                     description="Guess, analyze and factor linear ODEs from series.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="key=value file with shared settings")
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="progress on stderr (repeat for debug)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("-o", "--output", help=f"output file (relative to ${OUTDIR_ENV} if set)")
        p.set_defaults(func=func)
        return p

    p = add("gen", cmd_gen, "generate series, reduce operators, or emit built-in operators")
    p.add_argument("what", choices=["series", "reduce", "builtin"])
    p.add_argument("input", help="operator file, or built-in name for 'builtin'")
    p.add_argument("--prime", type=int, action="append", help="work modulo this prime")
    p.add_argument("--rho", default="0", help="local exponent of the solution branch")
    p.add_argument("--terms", type=int, default=100)

    p = add("guess", cmd_guess, "guess an annihilating operator (minimal if --Q is omitted)")
    p.add_argument("series", nargs="+")
    p.add_argument("--Q", type=int)
    p.add_argument("--D", type=int)
    p.add_argument("--basis", choices=["theta", "Dx"], default="theta")
    p.add_argument("--guard", type=int)
    p.add_argument("--strategy", choices=["formula", "gcrd"], default="formula")

    p = add("fit", cmd_fit, "fit N = dQ + qD - C from Q,D,N samples")
    p.add_argument("samples", nargs="+", help="Q,D,N triples")

    p = add("optimal", cmd_optimal, "optimal (Q, D, f) for an ODE formula")
    p.add_argument("params", nargs="+", help="d=.. q=.. C=.. [f_max=..] [Q_max=..]")

    p = add("exponents", cmd_exponents, "local exponents at points (default: all singular)")
    p.add_argument("input")
    p.add_argument("--point", action="append", help="0, 1/16, inf, root(c0 c1 ...)")
    p.add_argument("--bound", type=int, help="lift bound for prime-field exponents")

    p = add("factor", cmd_factor, "right factor from a local solution series")
    p.add_argument("input")
    p.add_argument("--point", default="0")
    p.add_argument("--rho", required=True)
    p.add_argument("--budget", type=int, default=2000)
    p.add_argument("--guard", type=int)

    p = add("sympow", cmd_sympow, "symmetric power of an operator")
    p.add_argument("input")
    p.add_argument("--m", type=int, required=True)

    p = add("reconstruct", cmd_reconstruct, "exact operator from images modulo primes")
    p.add_argument("inputs", nargs="+", help="operator files over distinct prime fields")
    p.add_argument("--target", action="append", default=[],
                   help="exponent target point:e1,e2[:apparent]")
    p.add_argument("--check", action="append", default=[],
                   help="extra image used only for verification")

    p = add("apply", cmd_apply, "apply an operator to a series")
    p.add_argument("operator")
    p.add_argument("series")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        pairs = read_key_values(args.config) if args.config else {}
        cfg = PipelineConfig.from_pairs(pairs)
        for key, value in cfg.extra.items():
            if hasattr(args, key) and getattr(args, key) in (None, [], parser.get_default(key)):
                setattr(args, key, type(getattr(args, key))(value)
                        if getattr(args, key) not in (None, []) else value)
        return args.func(args, cfg)
    except FuchsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
