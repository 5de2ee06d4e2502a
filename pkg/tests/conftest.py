from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import strategies as st

from altform.field2 import GF2k, Poly2, RationalFunctionField

GF2 = GF2k(1)
GF4 = GF2k(2)
GF16 = GF2k(4)
QT = RationalFunctionField(["t"])
QT2 = RationalFunctionField(["t1", "t2"])
QT3 = RationalFunctionField(["t1", "t2", "t3"])


def polys(nvars: int, max_exp: int = 3, max_terms: int = 4):
    mono = st.tuples(*[st.integers(0, max_exp)] * nvars)
    return st.lists(mono, max_size=max_terms).map(lambda ms: Poly2.from_exponents(nvars, ms))


def ratfuncs(F: RationalFunctionField, nonzero: bool = False, max_exp: int = 3):
    num = polys(F.nvars, max_exp)
    den = polys(F.nvars, max_exp).filter(bool)
    s = st.builds(F.fraction, num, den)
    return s.filter(bool) if nonzero else s


def gf_elements(F: GF2k, nonzero: bool = False):
    return st.integers(1 if nonzero else 0, (1 << F.k) - 1).map(F.element)


def random_ratfunc(rng: random.Random, F: RationalFunctionField, max_exp: int = 2,
                   max_terms: int = 3, nonzero: bool = False):
    while True:
        def poly():
            ms = [tuple(rng.randrange(max_exp + 1) for _ in range(F.nvars))
                  for _ in range(rng.randrange(1, max_terms + 1))]
            return Poly2.from_exponents(F.nvars, ms)

        den = poly()
        if not den:
            continue
        v = F.fraction(poly(), den)
        if v or not nonzero:
            return v


def all_vectors(F: GF2k, k: int):
    return itertools.product(F.elements(), repeat=k)


@pytest.fixture
def rng():
    return random.Random(1234)


# acceptance criteria record one line each; printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
