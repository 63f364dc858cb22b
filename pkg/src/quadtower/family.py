"""The parametric family phi(x) = (x - gamma(t))^2 + c(t).

Specialization and conjugation, the m_phi threshold, the exceptional
polynomial P_phi and exceptional set F_phi, explicit height constants, and
the conditional bound-chain evaluator that turns hypothetical Hall-Lang
constants into a concrete tower level n_phi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

from quadtower.bigpoly import (
    IntPolynomial,
    ZeroPolynomialError,
    poly_height,
)
from quadtower.factor import (
    DEFAULT_BUDGET,
    Budget,
    IncompleteFactorizationError,
    factorize,
)

_LOG2 = math.log(2.0)


class IsotrivialError(ValueError):
    """The construction needs c - gamma to be nonconstant."""


class InvalidConstantsError(ValueError):
    """Hall-Lang constants must be finite, nonnegative, with kappa1 > 0."""


@dataclass(frozen=True)
class SpecializedMap:
    """phi_a(x) = (x - gamma_a)^2 + c_a and its conjugate sigma_a = x^2 + v_a.

    v_a = c_a - gamma_a; conjugation is by the shift lambda_a(x) = x + gamma_a.
    """

    a: int
    gamma_a: int
    c_a: int
    v_a: int

    def __post_init__(self):
        if self.v_a != self.c_a - self.gamma_a:
            raise ValueError("v_a must equal c_a - gamma_a")

    @classmethod
    def make(cls, a: int, gamma_a: int, c_a: int) -> SpecializedMap:
        return cls(a=int(a), gamma_a=int(gamma_a), c_a=int(c_a), v_a=int(c_a) - int(gamma_a))

    def apply(self, x: int) -> int:
        y = x - self.gamma_a
        return y * y + self.c_a

    def apply_sigma(self, x):
        return x * x + self.v_a

    def apply_mod(self, x: int, p: int) -> int:
        y = (x - self.gamma_a) % p
        return (y * y + self.c_a) % p

    def phi_polynomial(self) -> IntPolynomial:
        """phi_a as a polynomial in x."""
        g = self.gamma_a
        return IntPolynomial((g * g + self.c_a, -2 * g, 1))

    def sigma_polynomial(self) -> IntPolynomial:
        return IntPolynomial((self.v_a, 0, 1))

    def describe(self) -> str:
        return f"(x - {self.gamma_a})^2 + {self.c_a}"


@dataclass(frozen=True)
class HallLangConstants:
    """Hypothetical integral-point constants kappa1..kappa3 (never proved;
    supplied by the user as inputs to the conditional bound chain)."""

    kappa1: float
    kappa2: float
    kappa3: float

    def __post_init__(self):
        for name in ("kappa1", "kappa2", "kappa3"):
            val = getattr(self, name)
            if not math.isfinite(val) or val < 0:
                raise InvalidConstantsError(f"{name} must be finite and nonnegative")
        if self.kappa1 <= 0:
            raise InvalidConstantsError("kappa1 must be positive")


@dataclass(frozen=True)
class BoundConstants:
    """Explicit height constants attached to a family.

    Contracts, for f = c - gamma of degree d and all integers a:
      h(gamma(a))            <= deg(gamma) * h(a) + a3
      h(f(a))                <= d * h(a) + a4
      h(x - gamma(a))        >= h(x) - deg(gamma) * h(a) - a1
      h(sigma_a^m(x))        <= 2^m * (h(x) + a2 + d * h(a))
      h(f(a))                >= d * h(a) - b1          whenever f(a) != 0
    b1 = d * log(threshold) with integer threshold >= 2, so the height ball
    {h(a) <= b1/d} is exactly {|a| <= threshold}.
    """

    a1: float
    a2: float
    a3: float
    a4: float
    b1: float
    threshold: int | None = None


@dataclass(frozen=True)
class NphiReport:
    """Linear-fractional suprema M1..M4, their max M_phi, and the level n_phi."""

    m1: float
    m2: float
    m3: float
    m4: float
    m_phi: float
    n_phi: int
    kappa2_prime: float
    kappa3_prime: float
    a_min: int
    x_min: float
    bounds: BoundConstants

    def to_json_dict(self) -> dict:
        return {
            "A1": self.bounds.a1,
            "A2": self.bounds.a2,
            "A3": self.bounds.a3,
            "A4": self.bounds.a4,
            "B1": self.bounds.b1,
            "threshold": self.bounds.threshold,
            "kappa2_prime": self.kappa2_prime,
            "kappa3_prime": self.kappa3_prime,
            "a_min": self.a_min,
            "x_min": self.x_min,
            "M1": self.m1,
            "M2": self.m2,
            "M3": self.m3,
            "M4": self.m4,
            "M_phi": self.m_phi,
            "n_phi": self.n_phi,
        }


def _log_coeff_sum(p: IntPolynomial) -> float:
    return math.log(max(1, sum(abs(c) for c in p.coeffs)))


@dataclass(frozen=True)
class QuadraticFamily:
    """The pair (gamma, c) of integer polynomials defining
    phi(x) = (x - gamma(t))^2 + c(t)."""

    gamma: IntPolynomial
    c: IntPolynomial

    @classmethod
    def of(cls, gamma_coeffs, c_coeffs) -> QuadraticFamily:
        return cls(IntPolynomial(gamma_coeffs), IntPolynomial(c_coeffs))

    @cached_property
    def difference(self) -> IntPolynomial:
        """c - gamma; its degree drives isotriviality and every threshold."""
        return self.c - self.gamma

    @property
    def is_isotrivial(self) -> bool:
        """True iff c - gamma is constant (possibly zero): every
        specialization is then affinely conjugate to a single map."""
        return self.difference.degree in (None, 0)

    def specialize(self, a: int) -> SpecializedMap:
        return SpecializedMap.make(a, self.gamma.evaluate(a), self.c.evaluate(a))

    def m_phi(self) -> int:
        """Tree level whose maximality persists generically in the family:
        17 when deg(gamma) != deg(c), else
        ceil(2 * log2(78 * deg(gamma)/deg(c - gamma) + 9))."""
        if self.is_isotrivial:
            raise IsotrivialError("m_phi needs deg(c - gamma) >= 1")
        dg, dc = self.gamma.degree, self.c.degree
        if dg != dc:
            return 17
        return math.ceil(2 * math.log2(78 * dg / self.difference.degree + 9))

    def exceptional_polynomial(self) -> IntPolynomial:
        """P_phi(t) = phi(gamma) * phi^2(gamma) * (c-g) * (c-g+1) * (c-g+2).

        Its integer roots are the specializations where the critical orbit
        degenerates or the conjugate lands on a post-critically finite map.
        """
        f = self.difference
        phi1 = self.c            # phi(gamma(t)) collapses to c(t)
        phi2 = f * f + self.c    # phi^2(gamma(t)) = (c - gamma)^2 + c
        return phi1 * phi2 * f * (f + 1) * (f + 2)

    def compute_bound_constants(self) -> BoundConstants:
        """Fully explicit constants; see BoundConstants for the contracts.

        With S(p) = log max(1, sum |coeffs|): a3 = S(gamma), a4 = S(c-gamma),
        a1 = a3 + log 2, a2 = a4 + log 2.  b1 = d * log T where T is the
        least integer >= 2 exceeding 2*d*H/|lc|, H the largest non-leading
        |coefficient| of c - gamma: beyond |a| = T the leading term dominates,
        giving |f(a)| > |a|^d / 2 >= (|a|/T)^d.
        """
        if self.is_isotrivial:
            raise IsotrivialError("bound constants need deg(c - gamma) >= 1")
        f = self.difference
        a3 = _log_coeff_sum(self.gamma)
        a4 = _log_coeff_sum(f)
        d = f.degree
        lc = abs(f.leading_coefficient)
        high = max((abs(cf) for cf in f.coeffs[:-1]), default=0)
        threshold = max(2, (2 * d * high + lc - 1) // lc + 1)
        return BoundConstants(
            a1=a3 + _LOG2,
            a2=a4 + _LOG2,
            a3=a3,
            a4=a4,
            b1=d * math.log(threshold),
            threshold=threshold,
        )

    def exceptional_set(self, budget: Budget = DEFAULT_BUDGET) -> list[int]:
        """F_phi: integer roots of P_phi united with the small-height ball
        {|a| <= threshold}; sorted.  The roots come from divisor enumeration
        of the trailing nonzero coefficient, never polynomial factorization.
        """
        if self.is_isotrivial:
            raise IsotrivialError("the exceptional set needs deg(c - gamma) >= 1")
        poly = self.exceptional_polynomial()
        if poly.is_zero:
            raise ZeroPolynomialError("P_phi vanishes identically")
        out = _integer_roots(poly, budget)
        threshold = self.compute_bound_constants().threshold
        out.update(range(-threshold, threshold + 1))
        return sorted(out)

    def nphi_bound(
        self,
        constants: HallLangConstants,
        bounds: BoundConstants | None = None,
    ) -> NphiReport:
        """Evaluate the conditional bound chain.

        Each rho_i is a linear-fractional function of x = h(a) over the
        denominator D*x - b1 (D = deg(c - gamma)); on the admissible ray
        x >= x_min it is monotone, so its supremum is the larger of the value
        at x_min and the asymptote.  x_min = log(a_min) with a_min the least
        integer exceeding exp(b1/D).  Then M_phi = max M_i and
        n_phi = 1 + max(6, ceil(2*log2(M_phi) + 19)).
        """
        if self.is_isotrivial:
            raise IsotrivialError("nphi_bound needs deg(c - gamma) >= 1")
        if bounds is None:
            bounds = self.compute_bound_constants()
        big_d = self.difference.degree
        big_g = self.gamma.degree or 0
        k1 = constants.kappa1
        kappa2_prime = constants.kappa2 + big_g + big_d
        kappa3_prime = (
            constants.kappa3
            + 2 * math.log(3.0)
            + poly_height(self.gamma)
            + bounds.a4
            + _LOG2
        )
        if bounds.threshold is not None:
            a_min = bounds.threshold + 1
        else:
            if bounds.b1 / big_d > 300:
                raise ValueError("b1 too large to search for a_min; supply threshold")
            a_min = max(1, math.floor(math.exp(bounds.b1 / big_d)) - 2)
            while not big_d * math.log(a_min) > bounds.b1:
                a_min += 1
        x_min = math.log(a_min)
        denom = big_d * x_min - bounds.b1

        def sup(slope: float, const: float) -> float:
            return max((slope * x_min + const) / denom, slope / big_d)

        m1 = sup(k1 * big_d, k1 * bounds.a2)
        m2 = sup(k1 * big_g, k1 * bounds.a3)
        m3 = sup(k1 * big_g, k1 * bounds.a1)
        m4 = sup(kappa2_prime, kappa3_prime)
        m_phi = max(m1, m2, m3, m4)
        if m_phi > 0:
            n_phi = 1 + max(6, math.ceil(2 * math.log2(m_phi) + 19))
        else:
            n_phi = 7
        return NphiReport(
            m1=m1,
            m2=m2,
            m3=m3,
            m4=m4,
            m_phi=m_phi,
            n_phi=n_phi,
            kappa2_prime=kappa2_prime,
            kappa3_prime=kappa3_prime,
            a_min=a_min,
            x_min=x_min,
            bounds=bounds,
        )


def index_bound(n_phi: int) -> int:
    """Uniform index bound 2^(2^n_phi - n_phi - 1) as an exact big integer."""
    if n_phi < 1:
        raise ValueError("n_phi must be >= 1")
    return 1 << ((1 << n_phi) - n_phi - 1)


def _divisors(n: int, budget: Budget) -> list[int]:
    fac = factorize(n, budget)
    if not fac.complete:
        raise IncompleteFactorizationError(
            "cannot enumerate divisors of the trailing coefficient", fac
        )
    divs = [1]
    for p, e in fac.factors:
        if len(divs) * (e + 1) > 2_000_000:
            raise ValueError("trailing coefficient has too many divisors")
        divs = [d * p ** k for d in divs for k in range(e + 1)]
    return divs


def _integer_roots(p: IntPolynomial, budget: Budget = DEFAULT_BUDGET) -> set[int]:
    """All integer roots of a nonzero polynomial: strip powers of t, then test
    the divisors of the trailing nonzero coefficient."""
    coeffs = list(p.coeffs)
    stripped = 0
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
        stripped += 1
    roots = {0} if stripped else set()
    if len(coeffs) <= 1:
        return roots
    q = IntPolynomial(coeffs)
    for d in _divisors(abs(coeffs[0]), budget):
        if q.evaluate(d) == 0:
            roots.add(d)
        if q.evaluate(-d) == 0:
            roots.add(-d)
    return roots
