"""One-sided certificates for the arboreal Galois tower.

Stability scanning (perfect squares in the critical orbit), the discriminant
recurrence, level-maximality certificates built from stripped cofactors,
hyperelliptic curve models with their forced integral points, and a naive
integral-point search.  Certificates never over-claim: CertifiedMaximal and
FailedSquareOverQ are proved, Unknown is exactly that.
"""

from __future__ import annotations

from dataclasses import dataclass

from quadtower.bigpoly import (
    IntPolynomial,
    discriminant_direct,
    height_int,
    is_perfect_square,
    poly_height,
)
from quadtower.factor import SquareFreeDecomposition, stripped_cofactor
from quadtower.family import SpecializedMap
from quadtower.orbit import DEFAULT_MAX_BITS, DigitBudgetError, critical_orbit

CERTIFIED_MAXIMAL = "CertifiedMaximal"
FAILED_SQUARE_OVER_Q = "FailedSquareOverQ"
UNKNOWN = "Unknown"


class SingularModelError(ValueError):
    """The requested curve has a repeated root on its right-hand side."""


@dataclass(frozen=True)
class StabilityReport:
    """Square scan of the critical orbit up to some depth.

    A square at level n is an instability witness; no square up to depth N is
    a one-sided no-obstruction certificate, not a proof of stability.
    """

    map: SpecializedMap
    depth: int
    squares_found: tuple[tuple[int, int], ...]

    @property
    def first_square(self) -> tuple[int, int] | None:
        return self.squares_found[0] if self.squares_found else None

    @property
    def verdict(self) -> str:
        if self.squares_found:
            return f"SquareFoundAt({self.squares_found[0][0]})"
        return f"NoSquareUpTo({self.depth})"

    def to_json_dict(self) -> dict:
        return {
            "depth": self.depth,
            "verdict": self.verdict,
            "squares_found": [
                {"level": n, "root": str(r)} for n, r in self.squares_found
            ],
        }


@dataclass(frozen=True)
class MaximalityCertificate:
    """Level-n tower evidence.

    CertifiedMaximal: witness is the stripped cofactor R > 1, non-square,
    coprime to 2 and to all lower critical values.  FailedSquareOverQ:
    witness is the integer square root.  Unknown: nothing survived stripping.
    """

    level: int
    status: str
    witness: int | None

    def to_json_dict(self) -> dict:
        return {
            "level": self.level,
            "status": self.status,
            "witness": None if self.witness is None else str(self.witness),
        }


@dataclass(frozen=True)
class TowerReport:
    map: SpecializedMap
    first_level: int
    last_level: int
    certificates: tuple[MaximalityCertificate, ...]

    @property
    def counts(self) -> dict[str, int]:
        out = {CERTIFIED_MAXIMAL: 0, UNKNOWN: 0, FAILED_SQUARE_OVER_Q: 0}
        for cert in self.certificates:
            out[cert.status] += 1
        return out

    def to_json_dict(self) -> dict:
        return {
            "from": self.first_level,
            "to": self.last_level,
            "certificates": [c.to_json_dict() for c in self.certificates],
            "counts": self.counts,
        }


@dataclass(frozen=True)
class CurveModel:
    """Y^2 = 2^e * d * (X - c_a) * g(X) with g = phi_a (genus 1, cubic RHS)
    or g = phi_a^2 (genus 2, quintic RHS)."""

    rhs: IntPolynomial
    level: int
    genus: int
    e: int
    d: int
    c_a: int

    def equation(self) -> str:
        return f"Y^2 = {self.rhs.to_string(var='X')}"

    def to_json_dict(self) -> dict:
        return {
            "level": self.level,
            "genus": self.genus,
            "e": self.e,
            "d": str(self.d),
            "rhs_coeffs": [str(c) for c in self.rhs.coeffs],
            "equation": self.equation(),
        }


@dataclass(frozen=True)
class IntegralPoint:
    x: int
    y: int
    hall_lang_ratio: float

    def to_json_dict(self) -> dict:
        return {"x": str(self.x), "y": str(self.y), "hall_lang_ratio": self.hall_lang_ratio}


def stability_scan(
    map: SpecializedMap, depth: int, max_bits: int = DEFAULT_MAX_BITS
) -> StabilityReport:
    """Square-test every critical value phi_a^n(gamma_a), n = 1..depth."""
    crit = critical_orbit(map, depth, max_bits)
    squares = []
    for n, value in enumerate(crit.values, start=1):
        root = is_perfect_square(value)
        if root is not None:
            squares.append((n, root))
    return StabilityReport(map=map, depth=depth, squares_found=tuple(squares))


def discriminant_recurrence(
    map: SpecializedMap, n: int, max_bits: int = DEFAULT_MAX_BITS
) -> int:
    """|disc(phi_a^n)| via |D_n| = D_{n-1}^2 * 2^(2^n) * |phi_a^n(gamma_a)|,
    seeded by the directly computed quadratic discriminant D_1."""
    if n < 1:
        raise ValueError("level must be >= 1")
    delta = abs(discriminant_direct(map.phi_polynomial()))
    if n == 1:
        return delta
    crit = critical_orbit(map, n, max_bits)
    for k in range(2, n + 1):
        if (1 << k) > max_bits:  # the 2^(2^k) factor alone would overflow
            raise DigitBudgetError(
                f"discriminant at level {k} needs more than {max_bits} bits"
            )
        delta = delta * delta * (1 << (1 << k)) * abs(crit.values[k - 1])
        _budget_check(delta, max_bits)
    return delta


def _budget_check(value: int, max_bits: int) -> None:
    if value.bit_length() > max_bits:
        raise DigitBudgetError(
            f"discriminant needs {value.bit_length()} bits; budget is {max_bits}"
        )


def _certify_from_values(values: tuple[int, ...], n: int) -> MaximalityCertificate:
    value = values[n - 1]
    root = is_perfect_square(value)
    if root is not None:
        return MaximalityCertificate(level=n, status=FAILED_SQUARE_OVER_Q, witness=root)
    earlier = values[: n - 1]
    if any(e == 0 for e in earlier):
        # degenerate orbit through 0; nothing can be stripped meaningfully
        return MaximalityCertificate(level=n, status=UNKNOWN, witness=None)
    r = stripped_cofactor(value, earlier)
    if r > 1 and is_perfect_square(r) is None:
        return MaximalityCertificate(level=n, status=CERTIFIED_MAXIMAL, witness=r)
    return MaximalityCertificate(level=n, status=UNKNOWN, witness=r)


def certify_level_maximal(
    map: SpecializedMap, n: int, max_bits: int = DEFAULT_MAX_BITS
) -> MaximalityCertificate:
    """Certify maximality of the level-n tower step.

    A perfect-square critical value disproves maximality over Q.  Otherwise
    the stripped cofactor R of the level value against all lower values is
    odd, unramified below, and keeps full valuations; R > 1 and non-square
    certify a square-free primitive prime divisor and hence maximality.
    Everything else is Unknown (the criterion is sufficient, not necessary).
    """
    if n < 1:
        raise ValueError("level must be >= 1")
    crit = critical_orbit(map, n, max_bits)
    return _certify_from_values(crit.values, n)


def certify_tower(
    map: SpecializedMap,
    first_level: int,
    last_level: int,
    max_bits: int = DEFAULT_MAX_BITS,
) -> TowerReport:
    """Per-level certificates over an inclusive level range, sharing one
    critical-orbit prefix.  On budget overflow the DigitBudgetError carries a
    TowerReport for the levels that were still computable."""
    if not 1 <= first_level <= last_level:
        raise ValueError("need 1 <= first_level <= last_level")
    budget_error = None
    try:
        values = critical_orbit(map, last_level, max_bits).values
    except DigitBudgetError as err:
        values = tuple(err.partial)
        budget_error = err
    certs = tuple(
        _certify_from_values(values, n)
        for n in range(first_level, min(last_level, len(values)) + 1)
    )
    report = TowerReport(
        map=map, first_level=first_level, last_level=last_level, certificates=certs
    )
    if budget_error is not None:
        raise DigitBudgetError(str(budget_error), partial=report)
    return report


def curve_model(
    map: SpecializedMap,
    n: int,
    dec: SquareFreeDecomposition,
    genus: int = 1,
) -> CurveModel:
    """Emit Y^2 = 2^e * d * (X - c_a) * phi_a(X) (genus 1) or the phi_a^2
    variant (genus 2) for the level-n decomposition 2^e * d * y^2."""
    if genus not in (1, 2):
        raise ValueError("genus must be 1 or 2")
    phi = map.phi_polynomial()
    g = phi if genus == 1 else phi.compose(phi)
    rhs = IntPolynomial((-map.c_a, 1)) * g * ((1 << dec.e) * dec.d)
    if discriminant_direct(rhs) == 0:
        raise SingularModelError("right-hand side has a repeated root")
    return CurveModel(rhs=rhs, level=n, genus=genus, e=dec.e, d=dec.d, c_a=map.c_a)


def verify_forced_point(
    model: CurveModel,
    map: SpecializedMap,
    n: int,
    dec: SquareFreeDecomposition,
    max_bits: int = DEFAULT_MAX_BITS,
) -> bool:
    """Substitute the forced integral point
    (phi^(n-1)(gamma), 2^e * d * y * (phi^(n-2)(gamma) - gamma)) into the
    genus-1 model; this is an algebraic identity of the whole pipeline and
    must come back True for every n >= 2."""
    if model.genus != 1:
        raise ValueError("the forced point lives on the genus-1 model")
    if n < 2:
        raise ValueError("the forced point needs level >= 2")
    crit = critical_orbit(map, n, max_bits)
    if dec.value() != crit.values[n - 1]:
        raise ValueError("decomposition does not reconstruct the level value")
    x = crit.values[n - 2]
    prev = crit.values[n - 3] if n >= 3 else map.gamma_a
    y = (1 << dec.e) * dec.d * dec.y * (prev - map.gamma_a)
    return y * y == model.rhs.evaluate(x)


def search_integral_points(model: CurveModel, xbound: int) -> list[IntegralPoint]:
    """All integral points with |X| <= xbound, by testing whether the RHS is a
    perfect square; each point carries the ratio h(X)/max(1, h(RHS)) probed
    against the conjectural integral-point bound."""
    if xbound < 1:
        raise ValueError("xbound must be >= 1")
    scale = max(1.0, poly_height(model.rhs))
    points: list[IntegralPoint] = []
    for x in range(-xbound, xbound + 1):
        value = model.rhs.evaluate(x)
        if value < 0:
            continue
        root = is_perfect_square(value)
        if root is None:
            continue
        ratio = height_int(x) / scale
        points.append(IntegralPoint(x=x, y=root, hall_lang_ratio=ratio))
        if root:
            points.append(IntegralPoint(x=x, y=-root, hall_lang_ratio=ratio))
    return points
