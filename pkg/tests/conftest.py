import sys
from dataclasses import dataclass

import pytest

from quadtower.bigpoly import IntPolynomial
from quadtower.family import QuadraticFamily


@pytest.fixture(scope="session", autouse=True)
def _unlimited_int_str():
    # orbit values blow straight past the 4300-digit int->str guard
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    gamma: tuple[int, ...]
    c: tuple[int, ...]
    a: int

    def family(self) -> QuadraticFamily:
        return QuadraticFamily(IntPolynomial(self.gamma), IntPolynomial(self.c))

    def map(self):
        return self.family().specialize(self.a)


# Small-coefficient maps used across property tests.
CORPUS = [
    CorpusEntry("x2+1", (0,), (0, 1), 1),
    CorpusEntry("x2+2", (0,), (0, 1), 2),
    CorpusEntry("x2+3", (0,), (0, 1), 3),
    CorpusEntry("x2-16", (0,), (0, 1), -16),
    CorpusEntry("shifted-jones-small", (0, 1), (1, 1), 4),
    CorpusEntry("gamma-t-c-t2p1", (0, 1), (1, 0, 1), 2),
    CorpusEntry("quadratic-gamma", (1, 0, 1), (1, 1, 1), 3),
    CorpusEntry("mixed-degrees", (0, 2), (0, 0, 1), 3),
    CorpusEntry("constant-pair", (5,), (7,), 0),
    CorpusEntry("fermat", (1,), (1,), 0),
]

# Ten maps with condition (1) and small v, used by the forced-point and
# certificate acceptance criteria (levels up to 9 stay desk-sized).
ACCEPTANCE_MAPS = [
    CorpusEntry("x2+2", (0,), (0, 1), 2),
    CorpusEntry("x2+3", (0,), (0, 1), 3),
    CorpusEntry("x2+5", (0,), (0, 1), 5),
    CorpusEntry("x2+6", (0,), (0, 1), 6),
    CorpusEntry("x2+7", (0,), (0, 1), 7),
    CorpusEntry("x2+10", (0,), (0, 1), 10),
    CorpusEntry("x2+11", (0,), (0, 1), 11),
    CorpusEntry("x2-3", (0,), (0, 1), -3),
    CorpusEntry("shift-by-1", (1,), (3,), 0),
    CorpusEntry("shifted-jones-small", (0, 1), (1, 1), 4),
]

JONES_A = 88255775491812351975604


# -- independent oracles -------------------------------------------------------


def bareiss_det(matrix: list[list[int]]) -> int:
    """Exact determinant by fraction-free Gaussian elimination."""
    m = [row[:] for row in matrix]
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[-1][-1]


def sylvester_resultant(p: IntPolynomial, q: IntPolynomial) -> int:
    """Resultant as the determinant of the Sylvester matrix."""
    dp, dq = p.degree, q.degree
    assert dp is not None and dq is not None
    if dq == 0:
        return q.leading_coefficient ** dp
    if dp == 0:
        return p.leading_coefficient ** dq
    pc = list(reversed(p.coeffs))
    qc = list(reversed(q.coeffs))
    rows = [[0] * i + pc + [0] * (dq - 1 - i) for i in range(dq)]
    rows += [[0] * i + qc + [0] * (dp - 1 - i) for i in range(dp)]
    return bareiss_det(rows)


def naive_orbit_member(gamma_a: int, c_a: int, b: int, p: int) -> bool:
    """Membership oracle: iterate the map mod p for a full p steps."""
    x = b % p
    g = gamma_a % p
    c = c_a % p
    for _ in range(p):
        y = (x - g) % p
        x = (y * y + c) % p
        if x == 0:
            return True
    return False
