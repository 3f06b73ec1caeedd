"""Exact arithmetic in the cyclotomic ring Z[w_n].

Polynomials over Z are plain lists of ints, lowest degree first, with no
trailing zeros (the zero polynomial is ``[]``).  Elements of Z[w_n] are
stored in the power basis 1, w, ..., w^(phi(n)-1), i.e. as the remainder of
a representing polynomial modulo the n-th cyclotomic polynomial.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from sympy import factorint, totient

from . import modular


class OrderMismatchError(ValueError):
    pass


def trim(p: Iterable[int]) -> list[int]:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out)


def poly_sub(a: Sequence[int], b: Sequence[int]) -> list[int]:
    n = max(len(a), len(b))
    return trim((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n))


def poly_divmod_monic(a: Sequence[int], m: Sequence[int]) -> tuple[list[int], list[int]]:
    """Quotient and remainder of ``a`` by the monic polynomial ``m`` over Z."""
    if not m or m[-1] != 1:
        raise ValueError("divisor must be monic")
    r = list(a)
    dm = len(m) - 1
    if len(r) - 1 < dm:
        return [], trim(r)
    q = [0] * (len(r) - dm)
    for i in range(len(r) - 1, dm - 1, -1):
        c = r[i]
        if c:
            q[i - dm] = c
            for j in range(dm + 1):
                r[i - dm + j] -= c * m[j]
    return trim(q), trim(r[:dm])


def poly_eval(p: Sequence[int], x: int, mod: int | None = None) -> int:
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
        if mod is not None:
            acc %= mod
    return acc


@lru_cache(maxsize=None)
def _phi_tuple(n: int) -> tuple[int, ...]:
    if n == 1:
        return (-1, 1)
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num, rem = poly_divmod_monic(num, _phi_tuple(d))
            if rem:
                raise ArithmeticError(f"inexact division building Phi_{n}")
    return tuple(num)


def cyclotomic_poly(n: int) -> list[int]:
    """Return the n-th cyclotomic polynomial as a coefficient list.

    Built by dividing X^n - 1 by every Phi_d with d a proper divisor of n;
    results are memoized.
    """
    if n < 1:
        raise ValueError("n must be positive")
    return list(_phi_tuple(n))


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    return int(totient(n))


def units(n: int) -> list[int]:
    """Representatives of (Z/nZ)^* in increasing order (``[0]`` for n = 1)."""
    if n == 1:
        return [0]
    return [k for k in range(1, n) if math.gcd(k, n) == 1]


def is_squarefree(n: int) -> bool:
    return n >= 1 and all(e == 1 for e in factorint(n).values())


def prime_divisors(n: int) -> list[int]:
    return sorted(factorint(n))


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def reduce(p: Sequence[int], n: int) -> "CycElt":
    """Canonical form of p(w_n): fold mod X^n - 1, then take the remainder mod Phi_n."""
    if n < 1:
        raise ValueError("n must be positive")
    folded = [0] * n
    for i, c in enumerate(p):
        folded[i % n] += c
    _, r = poly_divmod_monic(folded, _phi_tuple(n))
    return CycElt._raw(n, r)


@dataclass(frozen=True)
class CycElt:
    """An element of Z[w_n] in canonical power-basis form."""

    order: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be positive")
        if len(self.coeffs) != euler_phi(self.order):
            raise ValueError(
                f"expected {euler_phi(self.order)} coefficients, got {len(self.coeffs)}"
            )

    @classmethod
    def _raw(cls, n: int, r: Sequence[int]) -> "CycElt":
        k = euler_phi(n)
        return cls(n, tuple(r) + (0,) * (k - len(r)))

    @classmethod
    def from_int(cls, n: int, c: int) -> "CycElt":
        return cls._raw(n, [c] if c else [])

    @classmethod
    def zero(cls, n: int) -> "CycElt":
        return cls._raw(n, [])

    @classmethod
    def one(cls, n: int) -> "CycElt":
        return cls.from_int(n, 1)

    @classmethod
    def root_power(cls, n: int, k: int) -> "CycElt":
        """w_n^k."""
        return reduce([0] * (k % n) + [1], n)

    @property
    def poly(self) -> list[int]:
        return trim(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _check(self, other: "CycElt") -> None:
        if not isinstance(other, CycElt):
            raise TypeError(f"expected CycElt, got {type(other).__name__}")
        if other.order != self.order:
            raise OrderMismatchError(f"orders differ: {self.order} vs {other.order}")

    def _coerce(self, other):
        if isinstance(other, int):
            return CycElt.from_int(self.order, other)
        self._check(other)
        return other

    def __add__(self, other):
        other = self._coerce(other)
        return CycElt(self.order, tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycElt(self.order, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        return CycElt(self.order, tuple(x - y for x, y in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return CycElt(self.order, tuple(other * x for x in self.coeffs))
        self._check(other)
        _, r = poly_divmod_monic(poly_mul(self.poly, other.poly), _phi_tuple(self.order))
        return CycElt._raw(self.order, r)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not supported in Z[w]")
        result = CycElt.one(self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def galois(self, k: int) -> "CycElt":
        return galois_apply(k, self)

    def norm(self) -> int:
        return norm(self)

    def exact_div(self, other: "CycElt") -> "CycElt":
        """Quotient in Z[w] when ``other`` divides ``self``.

        Multiplies by the product of the other conjugates of ``other`` and
        divides the coefficients by its norm.
        """
        self._check(other)
        return _divide(self, *_conjugate_data(other))

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*w^{i}")
        return f"CycElt({self.order}: {' + '.join(terms) or '0'})"


def _conjugate_data(b: CycElt) -> tuple[CycElt, int]:
    nb = norm(b)
    if nb == 0:
        raise ZeroDivisionError("division by zero in Z[w]")
    acc = CycElt.one(b.order)
    for k in units(b.order)[1:]:
        acc = acc * galois_apply(k, b)
    return acc, nb


def _divide(a: CycElt, conj: CycElt, nb: int) -> CycElt:
    out = []
    for c in (a * conj).coeffs:
        q, r = divmod(c, nb)
        if r:
            raise ArithmeticError("inexact division in Z[w]")
        out.append(q)
    return CycElt(a.order, tuple(out))


def add(a: CycElt, b: CycElt) -> CycElt:
    return a + b


def mul(a: CycElt, b: CycElt) -> CycElt:
    return a * b


def neg(a: CycElt) -> CycElt:
    return -a


def is_zero(a: CycElt) -> bool:
    return a.is_zero()


def galois_apply(k: int, a: CycElt) -> CycElt:
    """Image of ``a`` under the automorphism w -> w^k."""
    n = a.order
    if math.gcd(k, n) != 1:
        raise ValueError(f"{k} is not a unit modulo {n}")
    folded = [0] * n
    for i, c in enumerate(a.coeffs):
        if c:
            folded[(i * k) % n] += c
    return reduce(folded, n)


# --- resultants -----------------------------------------------------------


def _content(p: Sequence[int]) -> int:
    g = 0
    for c in p:
        g = math.gcd(g, c)
    return g


def _prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a mod b."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    e = len(a) - len(b) + 1
    while r and len(r) - 1 >= db:
        c = r[-1]
        shift = len(r) - 1 - db
        r = [lb * x for x in r]
        for j in range(db + 1):
            r[shift + j] -= c * b[j]
        r = trim(r)
        e -= 1
    if e > 0:
        f = lb**e
        r = [f * x for x in r]
    return r


def resultant(a: Sequence[int], b: Sequence[int]) -> int:
    """Res(a, b) over Z by the subresultant PRS.

    Convention: Res(a, b) = lc(a)^deg(b) * prod b(alpha) over the roots alpha of a.
    """
    a, b = trim(a), trim(b)
    if not a or not b:
        return 0
    ca, cb = _content(a), _content(b)
    if a[-1] < 0:
        ca = -ca
    if b[-1] < 0:
        cb = -cb
    A = [x // ca for x in a]
    B = [x // cb for x in b]
    t = ca ** (len(b) - 1) * cb ** (len(a) - 1)
    g = h = s = 1
    if len(A) < len(B):
        A, B = B, A
        if (len(A) - 1) % 2 == 1 and (len(B) - 1) % 2 == 1:
            s = -1
    while len(B) - 1 > 0:
        da, db = len(A) - 1, len(B) - 1
        delta = da - db
        if da % 2 == 1 and db % 2 == 1:
            s = -s
        R = _prem(A, B)
        A = B
        div = g * h**delta
        B = [x // div for x in R]
        g = A[-1]
        if delta == 0:
            pass
        else:
            h = g**delta // h ** (delta - 1)
        if not B:
            return 0
    da = len(A) - 1
    lb = B[0]
    if da == 0:
        return s * t
    h = lb**da // h ** (da - 1)
    return s * t * h


def norm(a: CycElt) -> int:
    """Absolute norm of ``a``: the product of its phi(n) Galois conjugates."""
    p = a.poly
    if not p:
        return 0
    if len(p) == 1:
        return p[0] ** euler_phi(a.order)
    return resultant(list(_phi_tuple(a.order)), p)


def norm_bound(a: CycElt) -> int:
    """Upper bound on |norm(a)| from the l1 size of the coefficients."""
    return sum(abs(c) for c in a.coeffs) ** euler_phi(a.order)


def norm_modular(a: CycElt) -> int:
    """Norm via evaluation at all primitive roots modulo primes l = 1 mod n plus CRT."""
    n = a.order
    p = a.poly
    if not p:
        return 0
    limit = 2 * norm_bound(a)
    residues, moduli = [], []
    for ell in modular.primes_one_mod(n):
        prod = 1
        for r in modular.primitive_roots(n, ell):
            prod = prod * poly_eval(p, r, ell) % ell
        residues.append(prod)
        moduli.append(ell)
        if math.prod(moduli) > limit:
            break
    return modular.crt_symmetric(residues, moduli)


# --- distinguished values ----------------------------------------------------


def norm_of_cyclo_at_conjugate(N: int, p: int) -> int:
    """Norm over Q(z) of Phi_N(z), where z = w_N^p is a primitive (N/p)-th root of unity."""
    if N % p != 0 or p not in prime_divisors(N):
        raise ValueError(f"{p} is not a prime divisor of {N}")
    if not is_squarefree(N):
        raise ValueError(f"{N} is not square-free")
    return norm(reduce(cyclotomic_poly(N), N // p))


@dataclass(frozen=True)
class SplittingData:
    n: int
    q: int
    e: int
    f: int
    r: int


def mult_order(q: int, n: int) -> int:
    """Smallest f >= 1 with q^f = 1 mod n."""
    if n < 1:
        raise ValueError("n must be positive")
    if math.gcd(q, n) != 1:
        raise ValueError(f"gcd({q}, {n}) != 1")
    if n == 1:
        return 1
    f, x = 1, q % n
    while x != 1:
        x = x * q % n
        f += 1
    return f


def splitting_data(n: int, q: int) -> SplittingData:
    """Ramification index, residue degree and number of primes above q in Z[w_n]."""
    a, m = 0, n
    while m % q == 0:
        m //= q
        a += 1
    e = euler_phi(q**a) if a else 1
    f = mult_order(q, m)
    r = euler_phi(m) // f
    return SplittingData(n=n, q=q, e=e, f=f, r=r)


# --- determinants over Z[w] -------------------------------------------------


def _cofactor_det(m: list[list[CycElt]], n: int) -> CycElt:
    if len(m) == 1:
        return m[0][0]
    if len(m) == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = CycElt.zero(n)
    for j, a in enumerate(m[0]):
        if a.is_zero():
            continue
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        term = a * _cofactor_det(minor, n)
        total = total - term if j % 2 else total + term
    return total


def det(matrix: Sequence[Sequence[CycElt]]) -> CycElt:
    """Exact determinant of a square matrix over Z[w_n].

    Cofactor expansion up to 4x4; fraction-free Bareiss elimination above,
    with the Bareiss divisions done exactly in Z[w].
    """
    m = [list(r) for r in matrix]
    size = len(m)
    if size == 0:
        raise ValueError("empty matrix")
    if any(len(r) != size for r in m):
        raise ValueError("matrix is not square")
    n = m[0][0].order
    if size <= 4:
        return _cofactor_det(m, n)
    sign = 1
    prev = CycElt.one(n)
    for k in range(size - 1):
        if m[k][k].is_zero():
            swap = next((i for i in range(k + 1, size) if not m[i][k].is_zero()), None)
            if swap is None:
                return CycElt.zero(n)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        piv = m[k][k]
        conj = _conjugate_data(prev) if k else None
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                v = piv * m[i][j] - m[i][k] * m[k][j]
                m[i][j] = _divide(v, *conj) if conj else v
        prev = piv
    d = m[size - 1][size - 1]
    return -d if sign < 0 else d
