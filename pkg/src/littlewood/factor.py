"""Integer factorization: trial division, then Pollard-Brent rho.

Primality of every reported prime is certified by a deterministic
Miller-Rabin test below 3.3e24. Larger prime factors are flagged as
probable primes in :attr:`Factorization.uncertified`.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Tuple

from .errors import FactorizationTimeout

TRIAL_LIMIT = 10**6
RHO_BUDGET = 200_000
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_DETERMINISTIC = 3317044064679887385961981


@lru_cache(maxsize=4)
def small_primes(limit: int = TRIAL_LIMIT) -> Tuple[int, ...]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
    return tuple(i for i, v in enumerate(sieve) if v)


def _mr_round(n: int, a: int, d: int, s: int) -> bool:
    x = pow(a, d, n)
    if x in (1, n - 1):
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Miller-Rabin; deterministic for n < 3.3e24, probabilistic beyond."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    return all(_mr_round(n, a, d, s) for a in _MR_BASES)


def prime_certified(n: int) -> bool:
    return n < _MR_DETERMINISTIC and is_prime(n)


def _brent(n: int, budget: int, rng: random.Random) -> int:
    """A non-trivial factor of the odd composite n, or 0 when the budget runs out."""
    spent = 0
    while spent < budget:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1 and spent < budget:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            spent += r
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    return 0


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: Tuple[Tuple[int, int], ...]
    uncertified: Tuple[int, ...] = field(default=())

    def product(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= p ** e
        return out


def factorize(n: int, trial_limit: int = TRIAL_LIMIT, budget: int = RHO_BUDGET, seed: int = 0) -> Factorization:
    """Prime factorization of n >= 1 as sorted (prime, exponent) pairs.

    Raises FactorizationTimeout when a composite cofactor survives the rho
    budget; the exception carries the partial factorization and the cofactor.
    """
    if n < 1:
        raise ValueError("factorize needs n >= 1")
    counts = {}
    m = n
    for p in small_primes(trial_limit):
        if p * p > m:
            break
        while m % p == 0:
            counts[p] = counts.get(p, 0) + 1
            m //= p
    rng = random.Random(seed)
    stack = [m] if m > 1 else []
    uncertified = []
    while stack:
        c = stack.pop()
        if c == 1:
            continue
        if c <= trial_limit * trial_limit or is_prime(c):
            # below trial_limit^2 a survivor of trial division is prime
            counts[c] = counts.get(c, 0) + 1
            if not (c <= trial_limit * trial_limit or prime_certified(c)):
                uncertified.append(c)
            continue
        d = _brent(c, budget, rng)
        if d == 0:
            partial = tuple(sorted(counts.items()))
            raise FactorizationTimeout(f"cofactor {c} not split within budget", partial=partial, cofactor=c)
        stack += [d, c // d]
    return Factorization(n, tuple(sorted(counts.items())), tuple(sorted(set(uncertified))))
