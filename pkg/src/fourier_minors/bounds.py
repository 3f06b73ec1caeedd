"""Explicit bounds: Vandermonde quotients, Gamma_p, prime thresholds and the Hadamard bound.

Every inequality with a fractional exponent is raised to an integer power
first, so each verdict is an exact big-integer comparison.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from sympy import isprime

from .cyclotomic import euler_phi, mult_order


def _vandermonde(a: Sequence[int]) -> int:
    v = 1
    for i, j in combinations(range(len(a)), 2):
        v *= a[j] - a[i]
    return v


def _superfactorial(n: int) -> int:
    """prod_{i<j<n} (j - i) = 0! 1! ... (n-1)!"""
    v = 1
    for k in range(n):
        v *= math.factorial(k)
    return v


def check_tuple(a: Sequence[int], p: int | None = None) -> tuple[int, ...]:
    a = tuple(a)
    if not a or any(x < 0 for x in a) or any(x >= y for x, y in zip(a, a[1:])):
        raise ValueError(f"not a strictly increasing nonnegative tuple: {a}")
    if p is not None and a[-1] > p - 1:
        raise ValueError(f"tuple entries must be at most {p - 1}")
    return a


def schur_at_one(a: Sequence[int]) -> int:
    """Value at (1, ..., 1) of the Schur polynomial V_a / V_(0..n-1)."""
    a = check_tuple(a)
    num, den = _vandermonde(a), _superfactorial(len(a))
    q, r = divmod(num, den)
    if r:
        raise ArithmeticError(f"Vandermonde quotient not integral for {a}")
    return q


def gamma_n(p: int, n: int, exhaustive: bool = False) -> int:
    """Largest schur_at_one over tuples 0 <= a_1 < ... < a_n <= p-1.

    Translating a tuple to start at 0 and then moving its top entry to p-1
    never lowers any difference, so the maximum is attained with
    a_1 = 0 and a_n = p-1; only those tuples are scanned unless
    ``exhaustive`` is set.
    """
    if not 2 <= n <= p - 1:
        raise ValueError(f"need 2 <= n <= p-1, got n={n}, p={p}")
    if exhaustive:
        cands = combinations(range(p), n)
    else:
        cands = ((0,) + mid + (p - 1,) for mid in combinations(range(1, p - 1), n - 2))
    best = max(_vandermonde(a) for a in cands)
    return best // _superfactorial(n)


@lru_cache(maxsize=None)
def Gamma(p: int) -> int:
    """max of gamma_n(p, n) over 2 <= n <= p-1."""
    if p < 3:
        raise ValueError("Gamma is defined for p >= 3")
    return max(gamma_n(p, n) for n in range(2, p))


@dataclass
class ThresholdReport:
    description: str
    lhs: int
    rhs: int
    holds: bool
    data: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "description": self.description,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "holds": self.holds,
            **self.data,
        }


def zhang_threshold_holds(p: int, q: int) -> ThresholdReport:
    """Does q > Gamma_p^((p-1)/r) hold, r the order of q mod p?  Decided as q^r > Gamma_p^(p-1)."""
    if p == q:
        raise ValueError("p and q must be distinct")
    if not (isprime(p) and isprime(q)):
        raise ValueError("p and q must be prime")
    r = mult_order(q, p)
    G = Gamma(p)
    lhs, rhs = q**r, G ** (p - 1)
    return ThresholdReport(
        description=f"{q}^{r} > Gamma_{p}^{p - 1}",
        lhs=lhs,
        rhs=rhs,
        holds=lhs > rhs,
        data={"p": p, "q": q, "r": r, "Gamma": G},
    )


def _check_prefix(prefix: Sequence[int]) -> tuple[int, ...]:
    prefix = tuple(prefix)
    if not prefix or any(not isprime(x) for x in prefix):
        raise ValueError("prefix must be a nonempty list of primes")
    if any(x >= y for x, y in zip(prefix, prefix[1:])):
        raise ValueError("prefix must be strictly increasing")
    return prefix


def chain_threshold_holds(prefix: Sequence[int], p_next: int) -> ThresholdReport:
    """Decide p_next > (P/2)^(P*phi(P)/4) for P = prod(prefix).

    Compared as p_next^4 * 2^(P*phi(P)) > P^(P*phi(P)).  The report also
    carries floor((P/2)^(P*phi(P)/4)) and whether that value is exact.
    """
    prefix = _check_prefix(prefix)
    if p_next <= prefix[-1]:
        raise ValueError("next prime must exceed the prefix")
    P = math.prod(prefix)
    e = P * euler_phi(P)
    lhs, rhs = p_next**4 * 2**e, P**e
    base = P**e // 2**e
    t = math.isqrt(math.isqrt(base))
    exact = t**4 * 2**e == P**e
    return ThresholdReport(
        description=f"{p_next} > ({P}/2)^({e}/4)",
        lhs=lhs,
        rhs=rhs,
        holds=lhs > rhs,
        data={"P": P, "exponent_times_4": e, "threshold_floor": t, "threshold_exact": exact},
    )


def hadamard_char_bound(m: int, N: int) -> int:
    """m^(m*phi(N)/2): primes above it cannot divide the norm of a nonzero m x m minor of F_N."""
    if m < 1:
        raise ValueError("m must be positive")
    if m == 1:
        return 1
    if N < 3:
        raise ValueError("N >= 3 required for m > 1")
    return m ** (m * euler_phi(N) // 2)


@dataclass
class LiftReport:
    residues: list[int]
    congruent_mod_q: bool
    q_exceeds_f1: bool
    equal_over_z: bool

    @property
    def conclusion_applies(self) -> bool:
        return self.congruent_mod_q and self.q_exceeds_f1


def lift_divisibility(f: Sequence[int], p: int, q: int) -> LiftReport:
    """Compare divisibility of f by 1 + X + ... + X^(p-1) mod q and over Z.

    ``residues[i]`` sums the coefficients f_j with j = i mod p.  Divisibility
    over Z is equivalent to all residues being equal, and mod q to all being
    congruent.  Raises if mod-q divisibility with q > f(1) fails to lift.
    """
    if p == q:
        raise ValueError("p and q must be distinct")
    if any(c < 0 for c in f):
        raise ValueError("coefficients must be nonnegative")
    r = [0] * p
    for j, c in enumerate(f):
        r[j % p] += c
    rep = LiftReport(
        residues=r,
        congruent_mod_q=len({x % q for x in r}) == 1,
        q_exceeds_f1=q > sum(f),
        equal_over_z=len(set(r)) == 1,
    )
    if rep.conclusion_applies and not rep.equal_over_z:
        raise AssertionError(f"divisibility mod {q} did not lift for {list(f)}")
    return rep
