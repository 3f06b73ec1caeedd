"""Integer factorization of minor norms.

Trial division up to ``TRIAL_LIMIT``, then Pollard rho under a step budget.
Cofactors that resist the budget are reported as composite, never dropped.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from sympy import isprime, pollard_rho, primerange

TRIAL_LIMIT = 10**6
DEFAULT_BUDGET = 200_000


def _small_primes(m: int):
    """Primes up to min(TRIAL_LIMIT, sqrt(m)); sympy's shared sieve grows only as needed."""
    return primerange(2, min(TRIAL_LIMIT, math.isqrt(m)) + 1)


@dataclass
class Factorization:
    n: int
    primes: list[tuple[int, int]] = field(default_factory=list)
    composites: list[tuple[int, int]] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return not self.composites

    def value(self) -> int:
        v = 1
        for p, e in self.primes + self.composites:
            v *= p**e
        return v

    def prime_set(self) -> set[int]:
        return {p for p, _ in self.primes}

    def format(self) -> str:
        parts = [f"{p}^{e}" if e > 1 else str(p) for p, e in self.primes]
        parts += [f"[{c}]^{e}" if e > 1 else f"[{c}]" for c, e in self.composites]
        return "·".join(parts) if parts else "1"


def _merge(acc: dict[int, int], p: int, e: int) -> None:
    acc[p] = acc.get(p, 0) + e


def factorize(n: int, budget: int = DEFAULT_BUDGET) -> Factorization:
    """Factor |n|; ``budget`` caps the Pollard rho steps per attempt."""
    if n == 0:
        raise ValueError("cannot factor zero")
    m = abs(n)
    primes: dict[int, int] = {}
    for p in _small_primes(m):
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            primes[p] = e
    composites: dict[int, int] = {}
    stack = [m] if m > 1 else []
    while stack:
        c = stack.pop()
        if c <= TRIAL_LIMIT**2 or isprime(c):
            # after trial division, anything below TRIAL_LIMIT^2 is prime
            _merge(primes, c, 1)
            continue
        d = pollard_rho(c, retries=5, max_steps=budget) if budget > 0 else None
        if not d:
            _merge(composites, c, 1)
        else:
            stack += [d, c // d]
    return Factorization(
        n=n, primes=sorted(primes.items()), composites=sorted(composites.items())
    )
