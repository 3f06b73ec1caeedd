"""Word-size-free modular helpers: primes l = 1 (mod n), roots of unity mod l, CRT."""
from __future__ import annotations

import math
from functools import lru_cache
from typing import Sequence

from sympy import isprime, primefactors

PRIME_BITS = 62


@lru_cache(maxsize=None)
def _prime_list(n: int, count: int) -> tuple[int, ...]:
    out = []
    k = ((1 << PRIME_BITS) - 1) // n
    while len(out) < count:
        ell = k * n + 1
        if isprime(ell):
            out.append(ell)
        k -= 1
    return tuple(out)


def primes_one_mod(n: int):
    """Yield primes l = 1 (mod n) just below 2^62, largest first, deterministically."""
    count = 8
    i = 0
    while True:
        primes = _prime_list(n, count)
        while i < len(primes):
            yield primes[i]
            i += 1
        count *= 2


@lru_cache(maxsize=None)
def root_of_unity(n: int, ell: int) -> int:
    """A deterministic element of exact order n in F_l (requires l = 1 mod n)."""
    if (ell - 1) % n:
        raise ValueError(f"{ell} is not 1 mod {n}")
    if n == 1:
        return 1
    ps = primefactors(n)
    x = 2
    while True:
        g = pow(x, (ell - 1) // n, ell)
        if all(pow(g, n // p, ell) != 1 for p in ps):
            return g
        x += 1


@lru_cache(maxsize=None)
def primitive_roots(n: int, ell: int) -> tuple[int, ...]:
    """All primitive n-th roots of unity in F_l, as g^k for units k in increasing order."""
    g = root_of_unity(n, ell)
    if n == 1:
        return (1,)
    return tuple(pow(g, k, ell) for k in range(1, n) if math.gcd(k, n) == 1)


def det_mod(rows: list[list[int]], ell: int) -> int:
    """Determinant mod a prime by Gaussian elimination (destroys ``rows``)."""
    n = len(rows)
    det = 1
    for c in range(n):
        piv = None
        for r in range(c, n):
            if rows[r][c] % ell:
                piv = r
                break
        if piv is None:
            return 0
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = -det
        pr = rows[c]
        pv = pr[c] % ell
        det = det * pv % ell
        inv = pow(pv, -1, ell)
        for r in range(c + 1, n):
            row = rows[r]
            f = row[c] * inv % ell
            if f:
                for j in range(c + 1, n):
                    row[j] = (row[j] - f * pr[j]) % ell
    return det % ell


def crt_symmetric(residues: Sequence[int], moduli: Sequence[int]) -> int:
    """The unique x with |x| < prod(moduli)/2 matching every residue."""
    x, m = 0, 1
    for r, ell in zip(residues, moduli):
        t = (r - x) * pow(m, -1, ell) % ell
        x += m * t
        m *= ell
    x %= m
    if 2 * x > m:
        x -= m
    return x
