"""The field F_{q^f} = F_q[X]/(g), g an irreducible factor of Phi_n mod q.

The class of X is then a primitive n-th root of unity, which is the ``zeta``
used to build Fourier matrices in characteristic q.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from sympy import Poly, isprime, primefactors, symbols

from .cyclotomic import cyclotomic_poly, mult_order

__all__ = [
    "FiniteFieldCtx",
    "FFElt",
    "build_field",
    "mult_order",
    "ff_add",
    "ff_mul",
    "ff_pow",
    "ff_inv",
    "ff_is_zero",
    "ff_det",
]

_X = symbols("X")


def _factor_mod(poly: Sequence[int], q: int) -> list[tuple[int, ...]]:
    """Monic irreducible factors of ``poly`` over F_q, each low-degree-first with residues in [0, q)."""
    p = Poly(list(reversed(poly)), _X, modulus=q)
    out = []
    for fac, _ in p.factor_list()[1]:
        c = [int(x) % q for x in reversed(fac.all_coeffs())]
        inv = pow(c[-1], -1, q)
        out.append(tuple(x * inv % q for x in c))
    return out


@dataclass(frozen=True, eq=False)
class FiniteFieldCtx:
    q: int
    n: int
    f: int
    modulus: tuple[int, ...]

    def elt(self, coeffs: Sequence[int] | int) -> "FFElt":
        if isinstance(coeffs, int):
            coeffs = [coeffs]
        c = [x % self.q for x in coeffs]
        if len(c) > self.f:
            c = _polymod(c, self.modulus, self.q)
        return FFElt(self, tuple(c) + (0,) * (self.f - len(c)))

    @property
    def zero(self) -> "FFElt":
        return self.elt(0)

    @property
    def one(self) -> "FFElt":
        return self.elt(1)

    @property
    def zeta(self) -> "FFElt":
        """The class of X, a root of ``modulus`` of exact multiplicative order n."""
        if self.f == 1:
            return self.elt(-self.modulus[0])
        return self.elt([0, 1])

    def __repr__(self):
        return f"FiniteFieldCtx(q={self.q}, n={self.n}, f={self.f}, modulus={self.modulus})"


def _polymod(c: list[int], g: Sequence[int], q: int) -> list[int]:
    d = len(g) - 1
    c = list(c)
    for i in range(len(c) - 1, d - 1, -1):
        t = c[i]
        if t:
            for j in range(d + 1):
                c[i - d + j] = (c[i - d + j] - t * g[j]) % q
    return c[:d]


@dataclass(frozen=True)
class FFElt:
    ctx: FiniteFieldCtx
    coeffs: tuple[int, ...]

    def _same(self, other: "FFElt") -> None:
        if other.ctx is not self.ctx:
            raise ValueError("elements belong to different field contexts")

    def __add__(self, other: "FFElt") -> "FFElt":
        self._same(other)
        q = self.ctx.q
        return FFElt(self.ctx, tuple((a + b) % q for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "FFElt") -> "FFElt":
        self._same(other)
        q = self.ctx.q
        return FFElt(self.ctx, tuple((a - b) % q for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "FFElt":
        q = self.ctx.q
        return FFElt(self.ctx, tuple(-a % q for a in self.coeffs))

    def __mul__(self, other: "FFElt") -> "FFElt":
        self._same(other)
        ctx = self.ctx
        q = ctx.q
        if ctx.f == 1:
            return FFElt(ctx, (self.coeffs[0] * other.coeffs[0] % q,))
        prod = [0] * (2 * ctx.f - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    prod[i + j] += a * b
        return FFElt(ctx, tuple(_polymod([x % q for x in prod], ctx.modulus, q)))

    def __pow__(self, e: int) -> "FFElt":
        if e < 0:
            return ff_inv(self) ** (-e)
        result, base = self.ctx.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __repr__(self):
        return f"FFElt({list(self.coeffs)} mod {self.ctx.q})"


def ff_add(a: FFElt, b: FFElt) -> FFElt:
    return a + b


def ff_mul(a: FFElt, b: FFElt) -> FFElt:
    return a * b


def ff_pow(a: FFElt, e: int) -> FFElt:
    return a**e


def ff_is_zero(a: FFElt) -> bool:
    return a.is_zero()


def ff_inv(a: FFElt) -> FFElt:
    if a.is_zero():
        raise ZeroDivisionError("inverse of zero in a finite field")
    ctx = a.ctx
    if ctx.f == 1:
        return FFElt(ctx, (pow(a.coeffs[0], -1, ctx.q),))
    return a ** (ctx.q**ctx.f - 2)


def ff_det(m: Sequence[Sequence[FFElt]]) -> FFElt:
    """Determinant by Gaussian elimination over the field."""
    rows = [list(r) for r in m]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix is not square")
    if n == 0:
        raise ValueError("empty matrix has no field context")
    det = rows[0][0].ctx.one
    for c in range(n):
        piv = next((r for r in range(c, n) if not rows[r][c].is_zero()), None)
        if piv is None:
            return det.ctx.zero
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = -det
        p = rows[c][c]
        det = det * p
        inv = ff_inv(p)
        for r in range(c + 1, n):
            if rows[r][c].is_zero():
                continue
            f = rows[r][c] * inv
            rows[r] = [rows[r][j] - f * rows[c][j] if j > c else rows[r][j] for j in range(n)]
    return det


@lru_cache(maxsize=None)
def build_field(n: int, q: int) -> FiniteFieldCtx:
    """Smallest field of characteristic q holding a primitive n-th root of unity.

    The modulus is the lexicographically smallest (low-degree coefficients
    compared first) irreducible factor of Phi_n mod q, so the choice of zeta
    is reproducible.
    """
    if not isprime(q):
        raise ValueError(f"{q} is not prime")
    if n < 1:
        raise ValueError("n must be positive")
    if n % q == 0:
        raise ValueError(f"characteristic {q} divides {n}")
    f = mult_order(q, n)
    factors = _factor_mod(cyclotomic_poly(n), q)
    if any(len(g) - 1 != f for g in factors):
        raise ArithmeticError(f"Phi_{n} mod {q} has a factor of degree != {f}")
    ctx = FiniteFieldCtx(q=q, n=n, f=f, modulus=min(factors))
    z = ctx.zeta
    if not (z**n == ctx.one and all(z ** (n // p) != ctx.one for p in primefactors(n))):
        raise ArithmeticError("constructed zeta does not have exact order n")
    return ctx
