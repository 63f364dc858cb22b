"""Exact univariate integer polynomials and big-integer helpers.

A polynomial is a dense tuple of coefficients, low degree first; the highest
stored coefficient is nonzero and the zero polynomial is the empty tuple.
Everything is exact Python-int arithmetic; floats appear only in the
logarithmic height functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable


class ZeroPolynomialError(ValueError):
    """The operation needed a nonzero (or nonconstant) polynomial."""


@dataclass(frozen=True, init=False)
class IntPolynomial:
    """Dense integer polynomial with coefficients stored low-to-high.

    >>> p = IntPolynomial([0, 1, 1])    # t + t^2
    >>> p.evaluate(3)
    12
    >>> str(p)
    't^2 + t'
    """

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    # -- construction and serialization ------------------------------------

    @classmethod
    def constant(cls, c: int) -> IntPolynomial:
        return cls((c,))

    @classmethod
    def parse(cls, text: str) -> IntPolynomial:
        """Parse a comma-separated low-to-high coefficient list ("0,1" is t)."""
        text = text.strip()
        if not text:
            return cls()
        return cls(int(part) for part in text.split(","))

    def serialize(self) -> str:
        """Inverse of parse; the zero polynomial serializes as "0"."""
        if not self.coeffs:
            return "0"
        return ",".join(str(c) for c in self.coeffs)

    # -- basic structure ----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int | None:
        """Degree, or None for the zero polynomial (no -1 sentinel)."""
        return len(self.coeffs) - 1 if self.coeffs else None

    @property
    def leading_coefficient(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    # -- arithmetic ----------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "IntPolynomial | None":
        if isinstance(other, IntPolynomial):
            return other
        if isinstance(other, int):
            return IntPolynomial((other,))
        return None

    def __add__(self, other) -> IntPolynomial:
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        n = max(len(self.coeffs), len(q.coeffs))
        return IntPolynomial(
            (self.coeffs[i] if i < len(self.coeffs) else 0)
            + (q.coeffs[i] if i < len(q.coeffs) else 0)
            for i in range(n)
        )

    __radd__ = __add__

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial(-c for c in self.coeffs)

    def __sub__(self, other) -> IntPolynomial:
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        return self + (-q)

    def __rsub__(self, other) -> IntPolynomial:
        return -(self - other)

    def __mul__(self, other) -> IntPolynomial:
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        if self.is_zero or q.is_zero:
            return IntPolynomial()
        out = [0] * (len(self.coeffs) + len(q.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(q.coeffs):
                out[i + j] += a * b
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> IntPolynomial:
        if n < 0:
            raise ValueError("negative polynomial power")
        result = IntPolynomial((1,))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def evaluate(self, x: int) -> int:
        """Exact value at x by Horner's scheme."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, other: IntPolynomial) -> IntPolynomial:
        """Substitution self(other(t)), expanded over Z."""
        acc = IntPolynomial()
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def derivative(self) -> IntPolynomial:
        return IntPolynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    # -- display ---------------------------------------------------------------

    def to_string(self, var: str = "t") -> str:
        if not self.coeffs:
            return "0"
        parts: list[str] = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                term = str(mag)
            else:
                head = "" if mag == 1 else str(mag)
                term = f"{head}{var}" if i == 1 else f"{head}{var}^{i}"
            if not parts:
                parts.append(("-" if c < 0 else "") + term)
            else:
                parts.append((" - " if c < 0 else " + ") + term)
        return "".join(parts)

    def __str__(self) -> str:
        return self.to_string()


# -- resultants and discriminants -----------------------------------------


def _content(p: IntPolynomial) -> int:
    g = 0
    for c in p.coeffs:
        g = math.gcd(g, c)
    return g


def _divide_coeffs(p: IntPolynomial, k: int) -> IntPolynomial:
    out = []
    for c in p.coeffs:
        q, r = divmod(c, k)
        assert r == 0, "non-exact division in subresultant sequence"
        out.append(q)
    return IntPolynomial(out)


def _int_div_exact(a: int, b: int) -> int:
    q, r = divmod(a, b)
    assert r == 0, "non-exact integer division in subresultant sequence"
    return q


def _pseudo_remainder(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    """prem(a, b): lc(b)^(deg a - deg b + 1) * a reduced mod b, exactly in Z."""
    db = b.degree
    lb = b.leading_coefficient
    r = a
    e = a.degree - db + 1
    while not r.is_zero and r.degree >= db:
        lead = r.leading_coefficient
        shift = r.degree - db
        new = [lb * c for c in r.coeffs]
        for i, bc in enumerate(b.coeffs):
            new[shift + i] -= lead * bc
        r = IntPolynomial(new)
        e -= 1
    return r * (lb ** e)


def resultant(p: IntPolynomial, q: IntPolynomial) -> int:
    """Exact resultant via the subresultant polynomial remainder sequence.

    Convention: resultant(p, q) = lc(p)^deg(q) * prod q(alpha) over the roots
    alpha of p, so resultant(t - 2, t - 3) == -1.
    """
    if p.is_zero or q.is_zero:
        raise ZeroPolynomialError("resultant needs nonzero polynomials")
    a, b = p, q
    s = 1
    if a.degree < b.degree:
        if a.degree % 2 == 1 and b.degree % 2 == 1:
            s = -1
        a, b = b, a
    if b.degree == 0:
        return s * b.leading_coefficient ** a.degree
    ca, cb = _content(a), _content(b)
    a = _divide_coeffs(a, ca)
    b = _divide_coeffs(b, cb)
    t = ca ** b.degree * cb ** a.degree
    g = h = 1
    while True:
        delta = a.degree - b.degree
        if a.degree % 2 == 1 and b.degree % 2 == 1:
            s = -s
        r = _pseudo_remainder(a, b)
        if r.is_zero:
            return 0
        a, b = b, _divide_coeffs(r, g * h ** delta)
        g = a.leading_coefficient
        if delta >= 1:
            h = _int_div_exact(g ** delta, h ** (delta - 1))
        if b.degree == 0:
            return s * t * _int_div_exact(
                b.leading_coefficient ** a.degree, h ** (a.degree - 1)
            )


def discriminant_direct(p: IntPolynomial) -> int:
    """disc(p) = (-1)^(d(d-1)/2) * resultant(p, p') / lc(p) for deg p >= 1."""
    if p.is_zero or p.degree == 0:
        raise ZeroPolynomialError("discriminant needs degree >= 1")
    d = p.degree
    r = resultant(p, p.derivative())
    if (d * (d - 1) // 2) % 2:
        r = -r
    return _int_div_exact(r, p.leading_coefficient)


# -- heights ---------------------------------------------------------------


def height_int(a: "int | Fraction") -> float:
    """Absolute logarithmic height, natural-log units.

    For an integer this is log max(1, |a|); for a rational in lowest terms,
    log max(|numerator|, denominator).
    """
    f = Fraction(a)
    return math.log(max(abs(f.numerator), f.denominator, 1))


def poly_height(p: IntPolynomial) -> float:
    """Max of the coefficient heights; 0 for the zero polynomial."""
    if p.is_zero:
        return 0.0
    return math.log(max(max(abs(c) for c in p.coeffs), 1))


# -- perfect squares --------------------------------------------------------

# Quadratic-residue filters: squares land in few classes mod 64 and mod
# 45045 = 63 * 65 * 11, so almost every non-square is rejected without isqrt.
_SQUARES_MOD_64 = frozenset((i * i) & 63 for i in range(64))
_SQUARES_MOD_45045 = frozenset((i * i) % 45045 for i in range(45045))


def is_perfect_square(n: int) -> int | None:
    """The nonnegative square root of n when n is a perfect square, else None.

    >>> is_perfect_square(4294967296)
    65536
    >>> is_perfect_square(458330) is None
    True
    """
    if n < 0:
        return None
    if (n & 63) not in _SQUARES_MOD_64:
        return None
    if (n % 45045) not in _SQUARES_MOD_45045:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None
