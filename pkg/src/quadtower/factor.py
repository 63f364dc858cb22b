"""Desk-scale integer factorization and primitive-prime-divisor machinery.

Trial division plus Brent-variant Pollard rho, strong-probable-prime tests,
square-free decompositions 2^e * d * y^2, and the gcd-stripping cofactor that
lets tower certificates avoid factoring altogether.  Everything is
deterministic given the budget and its seed.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from quadtower.bigpoly import is_perfect_square


class ZeroInputError(ValueError):
    """Zero was passed where a nonzero integer is required."""


class IncompleteFactorizationError(RuntimeError):
    """The budget ran out; .factorization holds the partial result."""

    def __init__(self, message: str, factorization: "Factorization"):
        super().__init__(message)
        self.factorization = factorization


class PreconditionError(ValueError):
    """A stated divisibility hypothesis does not hold."""


@dataclass(frozen=True)
class Budget:
    """Effort knobs for factorize; defaults favour reproducibility over speed.

    trial_bound -- trial-divide by primes up to this bound
    rho_iters   -- Brent rho iterations allowed per composite cofactor
    mr_rounds   -- random strong-probable-prime rounds for inputs >= 2^64
    seed        -- seeds rho parameters and the large Miller-Rabin bases
    """

    trial_bound: int = 10 ** 6
    rho_iters: int = 10 ** 7
    mr_rounds: int = 40
    seed: int = 0

    def __post_init__(self):
        if self.trial_bound < 2:
            raise ValueError("trial_bound must be >= 2")
        if self.rho_iters < 0:
            raise ValueError("rho_iters must be >= 0")
        if self.mr_rounds < 1:
            raise ValueError("mr_rounds must be >= 1")


DEFAULT_BUDGET = Budget()

# Small budget used only to annotate certificate witnesses with their prime
# factors when that happens to be easy.
_COURTESY_BUDGET = Budget(trial_bound=10 ** 4, rho_iters=10 ** 5)

# Deterministic strong-probable-prime bases; complete below 2^64.
_MR_BASES_SMALL = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@dataclass(frozen=True)
class Factorization:
    """sign * prod(p^e) * cofactor == the input; cofactor > 1 means incomplete."""

    sign: int
    factors: tuple[tuple[int, int], ...]
    cofactor: int
    complete: bool

    def value(self) -> int:
        out = self.sign
        for p, e in self.factors:
            out *= p ** e
        return out * self.cofactor

    def to_json_dict(self) -> dict:
        return {
            "sign": self.sign,
            "factors": [[str(p), e] for p, e in self.factors],
            "cofactor": str(self.cofactor),
            "complete": self.complete,
        }


@dataclass(frozen=True)
class SquareFreeDecomposition:
    """value == 2^e * d * y^2 with e in {0, 1}, d odd and square-free.

    d carries the sign of the input; y >= 1.
    """

    e: int
    d: int
    y: int

    def value(self) -> int:
        return (1 << self.e) * self.d * self.y * self.y


@dataclass(frozen=True)
class PrimitiveDivisorReport:
    """Square-free primitive prime divisors of the level-n critical value.

    method "exact" lists every odd prime with odd valuation at level n and
    valuation zero at all lower levels; certified means the list is nonempty.
    method "certificate" carries the stripped cofactor R as witness; certified
    means R > 1 and R is not a perfect square, which proves such a prime
    exists without factoring (one-sided: not-certified means unknown).
    two_primitive is exact-route metadata for the excluded prime 2.
    """

    level: int
    primes: tuple[int, ...]
    method: str
    certified: bool
    witness: int | None = None
    two_primitive: bool | None = None

    def to_json_dict(self) -> dict:
        out = {
            "level": self.level,
            "method": self.method,
            "certified": self.certified,
            "primes": [str(p) for p in self.primes],
        }
        if self.witness is not None:
            out["witness"] = str(self.witness)
        if self.two_primitive is not None:
            out["two_primitive"] = self.two_primitive
        return out


# -- primes ------------------------------------------------------------------

_primes_list: list[int] = []
_primes_bound = 0


def _small_primes(bound: int) -> list[int]:
    """Primes up to bound by a plain sieve, cached and grown on demand."""
    global _primes_list, _primes_bound
    if bound > _primes_bound:
        flags = bytearray([1]) * (bound + 1)
        flags[0:2] = b"\x00\x00"
        for i in range(2, math.isqrt(bound) + 1):
            if flags[i]:
                flags[i * i :: i] = bytearray(len(range(i * i, bound + 1, i)))
        _primes_list = [i for i in range(bound + 1) if flags[i]]
        _primes_bound = bound
    return _primes_list


def is_probable_prime(n: int, budget: Budget = DEFAULT_BUDGET) -> bool:
    """Strong-probable-prime test.

    Deterministic (and in fact exact) for n < 2^64 via a fixed base set;
    above that, budget.mr_rounds seeded random bases.
    """
    if n < 2:
        return False
    for p in _MR_BASES_SMALL:
        if n % p == 0:
            return n == p
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    if n >> 64:
        rng = random.Random(f"sprp:{budget.seed}:{n}")
        bases = [rng.randrange(2, n - 1) for _ in range(budget.mr_rounds)]
    else:
        bases = _MR_BASES_SMALL
    for a in bases:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n: int, rng: random.Random, max_iters: int) -> int | None:
    """Brent's cycle variant of Pollard rho; returns a nontrivial factor of
    the odd composite n, or None once max_iters map evaluations are spent."""
    used = 0
    while used < max_iters:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n - 1)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1 and used < max_iters:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            used += r
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                used += min(m, r - k)
                g = math.gcd(q, n)
                k += m
            r <<= 1
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
        # cycle collapsed or budget ran dry inside the batch; retry fresh
    return None


def factorize(n: int, budget: Budget = DEFAULT_BUDGET) -> Factorization:
    """Factor n by trial division then budgeted Brent rho.

    Every reported prime passes the strong-probable-prime test; whatever
    resists the budget is returned as a composite cofactor with
    complete=False.  Deterministic for a fixed budget.

    >>> factorize(4294967297).factors
    ((641, 1), (6700417, 1))
    """
    if n == 0:
        raise ZeroInputError("cannot factor 0")
    sign = -1 if n < 0 else 1
    m = abs(n)
    counts: dict[int, int] = {}
    if m > 1:
        # the cache may hold primes past this budget's bound; stop at both
        for p in _small_primes(budget.trial_bound):
            if p > budget.trial_bound or p * p > m:
                break
            while m % p == 0:
                counts[p] = counts.get(p, 0) + 1
                m //= p
    pending = [m] if m > 1 else []
    rng = random.Random(f"rho:{budget.seed}:{abs(n)}")
    stuck: list[int] = []
    while pending:
        x = pending.pop()
        if x < budget.trial_bound * budget.trial_bound or is_probable_prime(x, budget):
            # no factor below trial_bound survives, so x < bound^2 is prime
            counts[x] = counts.get(x, 0) + 1
            continue
        root = is_perfect_square(x)
        if root is not None:
            pending += [root, root]
            continue
        f = _brent_rho(x, rng, budget.rho_iters)
        if f is None:
            stuck.append(x)
            continue
        pending += [f, x // f]
    cofactor = 1
    for x in stuck:
        cofactor *= x
    return Factorization(
        sign=sign,
        factors=tuple(sorted(counts.items())),
        cofactor=cofactor,
        complete=cofactor == 1,
    )


def squarefree_decompose(
    n: int, budget: Budget = DEFAULT_BUDGET
) -> SquareFreeDecomposition:
    """Write n as 2^e * d * y^2 with d odd square-free carrying the sign.

    The 2-adic valuation v2 contributes v2 mod 2 to e and floor(v2/2) to y.

    >>> squarefree_decompose(-8)
    SquareFreeDecomposition(e=1, d=-1, y=2)
    """
    if n == 0:
        raise ZeroInputError("cannot decompose 0")
    fac = factorize(n, budget)
    if not fac.complete:
        raise IncompleteFactorizationError(
            f"budget exhausted on cofactor {fac.cofactor}", fac
        )
    e, d, y = 0, 1, 1
    for p, k in fac.factors:
        if p == 2:
            e = k & 1
            y <<= k >> 1
        else:
            if k & 1:
                d *= p
            y *= p ** (k >> 1)
    return SquareFreeDecomposition(e=e, d=fac.sign * d, y=y)


def stripped_cofactor(value: int, earlier: list[int] | tuple[int, ...]) -> int:
    """The part of |value| coprime to 2 and to every earlier value.

    No factoring: remove all factors of 2, then repeatedly divide by
    gcds with each earlier value until coprime.  Every prime p of the result
    satisfies v_p(result) = v_p(value), p odd, and p divides no earlier value.
    """
    if value == 0:
        raise ZeroInputError("cannot strip 0")
    if any(e == 0 for e in earlier):
        raise ZeroInputError("earlier values must be nonzero")
    r = abs(value)
    r >>= (r & -r).bit_length() - 1
    for e in earlier:
        g = math.gcd(r, e)
        while g > 1:
            r //= g
            g = math.gcd(r, e)
    return r


def primitive_divisor_exact(
    critical_values: list[int] | tuple[int, ...],
    n: int,
    budget: Budget = DEFAULT_BUDGET,
) -> PrimitiveDivisorReport:
    """Factor the level-n value and list its square-free primitive prime
    divisors: odd primes with odd valuation there and zero valuation at all
    lower levels.  2 is reported separately via two_primitive."""
    if not 1 <= n <= len(critical_values):
        raise ValueError(f"level {n} outside computed orbit")
    value = critical_values[n - 1]
    if value == 0:
        raise ZeroInputError("level value is zero")
    earlier = critical_values[: n - 1]
    fac = factorize(value, budget)
    if not fac.complete:
        raise IncompleteFactorizationError(
            f"level {n} value resists the factoring budget", fac
        )
    primes = []
    two_primitive = False
    for p, k in fac.factors:
        if k % 2 == 0:
            continue
        fresh = all(e % p != 0 for e in earlier)
        if p == 2:
            two_primitive = fresh
        elif fresh:
            primes.append(p)
    return PrimitiveDivisorReport(
        level=n,
        primes=tuple(primes),
        method="exact",
        certified=bool(primes),
        two_primitive=two_primitive,
    )


def primitive_divisor_certificate(
    critical_values: list[int] | tuple[int, ...], n: int
) -> PrimitiveDivisorReport:
    """Certify a square-free primitive prime divisor at level n without
    factoring.

    R = stripped_cofactor(level n, lower levels) is odd, coprime to every
    lower level, and keeps full valuations, so R > 1 and R not a perfect
    square force some prime of R to divide level n to odd order while
    dividing nothing earlier.  One-sided: not certified only means unknown.
    """
    if not 1 <= n <= len(critical_values):
        raise ValueError(f"level {n} outside computed orbit")
    value = critical_values[n - 1]
    if value == 0:
        raise ZeroInputError("level value is zero")
    r = stripped_cofactor(value, critical_values[: n - 1])
    certified = r > 1 and is_perfect_square(r) is None
    primes: tuple[int, ...] = ()
    if certified:
        fac = factorize(r, _COURTESY_BUDGET)
        if fac.complete:
            primes = tuple(p for p, _ in fac.factors)
    return PrimitiveDivisorReport(
        level=n,
        primes=primes,
        method="certificate",
        certified=certified,
        witness=r,
    )


def doubling_check(map, n: int, m: int, p: int) -> bool:
    """Consistency check behind the floor(n/2) refinement: a prime p dividing
    the critical values at levels m < n must divide the n-m orbit value of 0.

    Verifies the divisibility hypotheses mod p first and raises
    PreconditionError when they fail; the returned verdict must be True
    whenever they hold.
    """
    if not 1 <= m < n:
        raise PreconditionError("need 1 <= m < n")
    if p < 2:
        raise PreconditionError("p must be a prime >= 2")
    x = map.gamma_a % p
    for j in range(1, n + 1):
        x = map.apply_mod(x, p)
        if j == m and x != 0:
            raise PreconditionError(f"{p} does not divide the level-{m} value")
        if j == n and x != 0:
            raise PreconditionError(f"{p} does not divide the level-{n} value")
    z = 0
    for _ in range(n - m):
        z = map.apply_mod(z, p)
    return z == 0
