from __future__ import annotations

from typing import Callable

import mpmath
import pytest

from spectra_gap.words import BiSeq

mpmath.mp.dps = 60


def cf_value(digits: list[int]) -> mpmath.mpf:
    """[a0; a1, a2, ...] of a long finite digit list, evaluated backwards."""
    x = mpmath.mpf(digits[-1])
    for a in reversed(digits[:-1]):
        x = a + 1 / x
    return x


def oracle_lambda(digit: Callable[[int], int], k: int = 0, terms: int = 160) -> mpmath.mpf:
    """lambda_k from a digit function, by truncated continued fractions."""
    right = [digit(k + i) for i in range(terms)]
    left = [digit(k - 1 - i) for i in range(terms)]
    return cf_value(right) + 1 / cf_value(left)


def seq_digit(s: BiSeq) -> Callable[[int], int]:
    return lambda i: s[i]


def as_mpf(x) -> mpmath.mpf:
    return mpmath.mpf(x.decimal(50)) if hasattr(x, "decimal") else mpmath.mpf(x)


@pytest.fixture(scope="session")
def omega1_ledger():
    from spectra_gap import regions

    return regions.load_ledger("omega1")


@pytest.fixture(scope="session")
def omega2_ledger():
    from spectra_gap import regions

    return regions.load_ledger("omega2")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
