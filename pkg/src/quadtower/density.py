"""Empirical density of prime divisors of orbits.

A prime p belongs to the divisor set of the orbit of b when some iterate
phi_a^n(b) with n >= 1 vanishes mod p (n = 0 does not count).  Membership is
decided by Brent cycle detection on the map mod p; the density curve sweeps
all primes up to X with checkpointed exact proportions, optionally sharded
across processes with bit-identical output.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from quadtower.family import SpecializedMap

DEFAULT_SEGMENT_SIZE = 1 << 16


@dataclass(frozen=True)
class DensityRow:
    x: int
    primes_tested: int
    members: int
    proportion: Fraction


@dataclass(frozen=True)
class DensityCurve:
    map: SpecializedMap
    b: int
    rows: tuple[DensityRow, ...]
    member_primes: tuple[int, ...]

    def to_csv(self) -> str:
        lines = ["X,primes_tested,members,proportion"]
        for r in self.rows:
            lines.append(
                f"{r.x},{r.primes_tested},{r.members},{float(r.proportion)!r}"
            )
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "b": str(self.b),
            "checkpoints": [
                {
                    "X": r.x,
                    "primes_tested": r.primes_tested,
                    "members": r.members,
                    "proportion": float(r.proportion),
                }
                for r in self.rows
            ],
        }


@lru_cache(maxsize=8)
def _base_primes(limit: int) -> tuple[int, ...]:
    if limit < 2:
        return ()
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(range(i * i, limit + 1, i)))
    return tuple(i for i in range(limit + 1) if flags[i])


def _primes_in_range(lo: int, hi: int, segment_size: int = DEFAULT_SEGMENT_SIZE) -> Iterator[int]:
    lo = max(lo, 2)
    if hi < lo:
        return
    base = _base_primes(math.isqrt(hi))
    for p in base:
        if p > hi:
            return
        if p >= lo:
            yield p
    start = max(lo, (base[-1] if base else 1) + 1)
    while start <= hi:
        end = min(start + segment_size - 1, hi)
        flags = bytearray([1]) * (end - start + 1)
        for p in base:
            first = max(p * p, (start + p - 1) // p * p)
            if first > end:
                continue
            flags[first - start :: p] = bytearray(len(range(first, end + 1, p)))
        for i, keep in enumerate(flags):
            if keep:
                yield start + i
        start = end + 1


def primes_up_to(x: int, segment_size: int = DEFAULT_SEGMENT_SIZE) -> Iterator[int]:
    """All primes <= x in increasing order, by a segmented sieve."""
    if x < 2:
        raise ValueError("need x >= 2")
    return _primes_in_range(2, x, segment_size)


def _hits_zero(gamma_a: int, c_a: int, b: int, p: int) -> bool:
    g = gamma_a % p
    c = c_a % p
    x0 = b % p

    def step(x: int) -> int:
        y = x - g
        return (y * y + c) % p

    # Brent: find the cycle length lam, then the tail length mu.
    power = lam = 1
    tortoise = x0
    hare = step(x0)
    while tortoise != hare:
        if power == lam:
            tortoise = hare
            power <<= 1
            lam = 0
        hare = step(hare)
        lam += 1
    tortoise = hare = x0
    for _ in range(lam):
        hare = step(hare)
    mu = 0
    while tortoise != hare:
        tortoise = step(tortoise)
        hare = step(hare)
        mu += 1
    # every reachable value appears among x_1 .. x_(mu+lam)
    x = x0
    for _ in range(mu + lam):
        x = step(x)
        if x == 0:
            return True
    return False


def orbit_hits_zero_mod_p(map: SpecializedMap, b: int, p: int) -> bool:
    """True iff phi_a^n(b) == 0 mod p for some n >= 1 (decided after at most
    tail + cycle length steps, found by Brent cycle detection)."""
    return _hits_zero(map.gamma_a, map.c_a, b, p)


def _scan_shard(args: tuple) -> tuple[int, list[int]]:
    gamma_a, c_a, b, lo, hi, segment_size = args
    members: list[int] = []
    count = 0
    for p in _primes_in_range(lo, hi, segment_size):
        count += 1
        if _hits_zero(gamma_a, c_a, b, p):
            members.append(p)
    return count, members


def default_checkpoints(x: int) -> list[int]:
    """Powers of ten up to x, always ending at x itself."""
    out = [10 ** k for k in range(1, 19) if 10 ** k < x]
    out.append(x)
    return [c for c in out if c >= 2]


def density_curve(
    map: SpecializedMap,
    b: int,
    x_max: int,
    checkpoints: list[int] | None = None,
    shards: int = 1,
    workers: int = 1,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
) -> DensityCurve:
    """Sweep all primes p <= x_max for orbit membership.

    The prime range splits into contiguous shards whose merge is order-fixed,
    so any shard count and worker count produce identical curves; worker
    processes only pay off for large x_max.
    """
    if x_max < 2:
        raise ValueError("need x_max >= 2")
    if shards < 1 or workers < 1:
        raise ValueError("shards and workers must be >= 1")
    if checkpoints is None:
        checkpoints = default_checkpoints(x_max)
    if not checkpoints or sorted(set(checkpoints)) != list(checkpoints):
        raise ValueError("checkpoints must be strictly increasing")
    if checkpoints[0] < 2 or checkpoints[-1] > x_max:
        raise ValueError("checkpoints must lie in [2, x_max]")

    span = x_max - 1  # integers 2..x_max
    bounds = [2 + span * i // shards for i in range(shards + 1)]
    jobs = [
        (map.gamma_a, map.c_a, b, bounds[i], bounds[i + 1] - 1, segment_size)
        for i in range(shards)
        if bounds[i] <= bounds[i + 1] - 1
    ]
    if workers == 1:
        results = [_scan_shard(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_shard, jobs))

    members: list[int] = []
    for _, shard_members in results:
        members.extend(shard_members)
    all_primes = list(primes_up_to(x_max, segment_size))
    assert sum(count for count, _ in results) == len(all_primes)

    rows = []
    for cp in checkpoints:
        tested = bisect_right(all_primes, cp)
        hit = bisect_right(members, cp)
        rows.append(
            DensityRow(x=cp, primes_tested=tested, members=hit, proportion=Fraction(hit, tested))
        )
    return DensityCurve(map=map, b=b, rows=tuple(rows), member_primes=tuple(members))
