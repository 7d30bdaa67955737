import re

import pytest
import sympy

from fuchsguess.fieldcore import GF, QQ

P = 32749
P2 = 32719
# Nine 15-bit primes used as default moduli.
PAPER_PRIMES = [32749, 32719, 32717, 32713, 32707, 32693, 32687, 32653, 32647]


def primes_below(n: int, count: int) -> list[int]:
    """The ``count`` largest primes below ``n``, descending."""
    out = []
    while len(out) < count:
        n = sympy.prevprime(n)
        out.append(n)
    return out


@pytest.fixture
def Fp():
    return GF(P)


@pytest.fixture
def Q():
    return QQ


# -- acceptance summary: one line per criterion ------------------------------

_CRIT = re.compile(r"test_c(\d+)_")


def pytest_runtest_logreport(report):
    if "test_acceptance" not in report.nodeid or report.when != "call" and not (
            report.when == "setup" and report.failed):
        return
    m = _CRIT.search(report.nodeid.split("::")[-1])
    if not m:
        return

    store = _store.setdefault(int(m.group(1)), [])
    store.append((report.nodeid.split("::")[-1], report.passed))


_store: dict[int, list] = {}


def pytest_terminal_summary(terminalreporter):
    if not _store:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(_store):
        checks = _store[crit]
        failed = [name for name, ok in checks if not ok]
        status = "PASS" if not failed else "FAIL"
        line = f"criterion {crit}: {status} ({len(checks) - len(failed)}/{len(checks)} checks)"
        if failed:
            line += " failing: " + ", ".join(failed)
        terminalreporter.write_line(line)
