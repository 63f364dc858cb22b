"""Exact big-integer orbits, conjugation identities, and canonical heights.

Orbit values double in bit length per step, so every iterating routine runs
under a configurable bit budget and converts runaway growth into a clean
DigitBudgetError carrying whatever was already computed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from quadtower.bigpoly import height_int
from quadtower.family import SpecializedMap

_LOG2 = math.log(2.0)

# phi^15(gamma) of a small map is already ~32k bits; 2^20 bits of headroom
# keeps desk-scale work comfortable while stopping runaway doubling early.
DEFAULT_MAX_BITS = 1 << 20


class DigitBudgetError(RuntimeError):
    """An orbit value outgrew the bit budget; .partial holds the values
    computed before the overflow."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial if partial is not None else []


class PostCriticallyFiniteError(ValueError):
    """The check only applies to wandering critical orbits (v not in {0,-1,-2})."""


@dataclass(frozen=True)
class OrbitSlice:
    """values[n] = phi_a^n(start) for n = 0..N, exactly."""

    map: SpecializedMap
    start: int
    values: tuple[int, ...]


@dataclass(frozen=True)
class CriticalOrbit:
    """values[n-1] = phi_a^n(gamma_a) for n = 1..N.

    condition_one_holds records whether the first two values are nonzero,
    the nonsingularity hypothesis behind the curve models.
    """

    map: SpecializedMap
    values: tuple[int, ...]
    condition_one_holds: bool


def _guard(value: int, max_bits: int, partial) -> None:
    if value.bit_length() > max_bits:
        raise DigitBudgetError(
            f"orbit value needs {value.bit_length()} bits; budget is {max_bits}",
            partial=list(partial),
        )


def orbit(map: SpecializedMap, b: int, depth: int, max_bits: int = DEFAULT_MAX_BITS) -> OrbitSlice:
    """The first depth+1 orbit values b, phi(b), ..., phi^depth(b)."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    x = int(b)
    values = [x]
    _guard(x, max_bits, values)
    for _ in range(depth):
        x = map.apply(x)
        _guard(x, max_bits, values)
        values.append(x)
    return OrbitSlice(map=map, start=int(b), values=tuple(values))


def critical_orbit(map: SpecializedMap, depth: int, max_bits: int = DEFAULT_MAX_BITS) -> CriticalOrbit:
    """Critical values phi_a^n(gamma_a) for n = 1..depth (so values[0] = c_a)."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    values: list[int] = []
    x = map.gamma_a
    for _ in range(depth):
        x = map.apply(x)
        _guard(x, max_bits, values)
        values.append(x)
    second = values[1] if depth >= 2 else map.apply(values[0])
    return CriticalOrbit(
        map=map,
        values=tuple(values),
        condition_one_holds=values[0] != 0 and second != 0,
    )


def sigma_orbit_identity(map: SpecializedMap, depth: int, max_bits: int = DEFAULT_MAX_BITS) -> bool:
    """Check sigma_a^n(0) == phi_a^n(gamma_a) - gamma_a for all n <= depth,
    computing the two sides independently."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    sig = 0
    phi = map.gamma_a
    seen: list[int] = []
    for _ in range(depth):
        sig = map.apply_sigma(sig)
        phi = map.apply(phi)
        _guard(phi, max_bits, seen)
        seen.append(phi)
        if sig != phi - map.gamma_a:
            return False
    return True


def is_postcritically_finite(map: SpecializedMap) -> bool:
    """For integer parameters the critical orbit is finite exactly when
    v_a lies in {0, -1, -2} (the integer points of the Mandelbrot interval)."""
    return map.v_a in (0, -1, -2)


def canonical_height(
    map: SpecializedMap,
    x: "int | Fraction",
    eps: float,
    max_bits: int = DEFAULT_MAX_BITS,
) -> float:
    """Canonical height of x under sigma_a = x^2 + v_a, within eps.

    Returns h(sigma_a^k(x)) / 2^k for the smallest k with
    (h(v_a) + log 2) / 2^k <= eps; the depth is fixed a priori from that
    error bound, so results are deterministic.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    err = height_int(map.v_a) + _LOG2
    k = 0
    while err > eps * (1 << k):
        k += 1
    v = map.v_a
    start = Fraction(x)
    if start.denominator == 1:
        cur = start.numerator
        for _ in range(k):
            cur = cur * cur + v
            _guard(cur, max_bits, [])
        return height_int(cur) / (1 << k)
    cur_f = start
    for _ in range(k):
        cur_f = cur_f * cur_f + v
        _guard(max(abs(cur_f.numerator), cur_f.denominator), max_bits, [])
    return height_int(cur_f) / (1 << k)


def check_ingram_lower_bound(
    map: SpecializedMap,
    eps: float = 0.03125,
    max_bits: int = DEFAULT_MAX_BITS,
) -> bool:
    """One-sided check of the wandering-point height floor
    h_hat(0) >= max(h(v_a), 1) / 32, via a canonical-height estimate within
    eps (so the check can only fail if the floor is genuinely violated)."""
    if is_postcritically_finite(map):
        raise PostCriticallyFiniteError(f"v_a = {map.v_a} is post-critically finite")
    est = canonical_height(map, 0, eps, max_bits)
    return est + eps >= max(height_int(map.v_a), 1.0) / 32.0
