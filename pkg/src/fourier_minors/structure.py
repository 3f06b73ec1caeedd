"""Block determinants with nested column prefixes, and the CRT reordering of F_mn into F_m (x) F_n."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import cyclotomic as cyc
from .cyclotomic import CycElt
from .minors import MinorSpec, classify, fourier_minor


class ZeroPivotError(ValueError):
    """A leading scalar minor needed by the block elimination vanishes."""


def det(matrix: Sequence[Sequence]) -> object:
    """Exact determinant of an integer or Z[w] matrix; the 0x0 determinant is 1."""
    m = [list(r) for r in matrix]
    if not m:
        return 1
    if isinstance(m[0][0], CycElt):
        return cyc.det(m)
    n = len(m)
    rows = [[Fraction(x) for x in r] for r in m]
    d = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if rows[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            d = -d
        d *= rows[c][c]
        for r in range(c + 1, n):
            f = rows[r][c] / rows[c][c]
            if f:
                for j in range(c, n):
                    rows[r][j] -= f * rows[c][j]
    assert d.denominator == 1
    return int(d)


@dataclass
class BlockSpec:
    """Scalars a_ij, weakly decreasing widths M_i, and base blocks B_i1 of shape M_i x M_1.

    Block (i, j) of the assembled matrix is a_ij times the first M_j
    columns of B_i1.
    """

    a: list[list]
    widths: list[int]
    base: list[list[list]]

    def __post_init__(self):
        n = len(self.widths)
        if len(self.a) != n or any(len(r) != n for r in self.a):
            raise ValueError("scalar matrix must be n x n for n blocks")
        if any(w < 0 for w in self.widths) or any(
            x < y for x, y in zip(self.widths, self.widths[1:])
        ):
            raise ValueError("widths must be nonnegative and weakly decreasing")
        if len(self.base) != n:
            raise ValueError("need one base block per block row")
        M1 = self.widths[0] if n else 0
        for i, blk in enumerate(self.base):
            if len(blk) != self.widths[i] or any(len(r) != M1 for r in blk):
                raise ValueError(f"base block {i} must be {self.widths[i]} x {M1}")

    @property
    def n(self) -> int:
        return len(self.widths)

    def block(self, i: int, j: int) -> list[list]:
        return [row[: self.widths[j]] for row in self.base[i]]

    def assemble(self) -> list[list]:
        out = []
        for i in range(self.n):
            for r in range(self.widths[i]):
                row = []
                for j in range(self.n):
                    aij = self.a[i][j]
                    row += [aij * x for x in self.base[i][r][: self.widths[j]]]
                out.append(row)
        return out


def block_determinant(spec: BlockSpec):
    """prod_k det(A_k)^(M_k - M_{k+1}) * prod_i det(B_ii), A_k the leading k x k scalar minor.

    The elimination behind the formula divides by each leading minor
    det(A_k) for k below the number of nonempty blocks; a vanishing one is
    reported with :class:`ZeroPivotError`.
    """
    n = spec.n
    M = list(spec.widths) + [0]
    live = sum(1 for w in spec.widths if w > 0)
    leading = [det([row[:k] for row in spec.a[:k]]) for k in range(1, n + 1)]
    for k in range(1, live):
        if _is_zero(leading[k - 1]):
            raise ZeroPivotError(f"leading {k}x{k} scalar minor vanishes")
    value = 1
    for k in range(1, n + 1):
        value = value * _power(leading[k - 1], M[k - 1] - M[k])
    for i in range(n):
        value = value * det(spec.block(i, i))
    return value


def _is_zero(x) -> bool:
    return x.is_zero() if isinstance(x, CycElt) else x == 0


def _power(x, e: int):
    if e == 0:
        return 1
    return x**e


# --- CRT permutations -------------------------------------------------------


@dataclass(frozen=True)
class CrtMaps:
    """rho(a*n + b) = psi(a, b), the x with x = a mod m and x = b mod n; tau(j) = (m+n)*j mod mn."""

    m: int
    n: int
    rho: tuple[int, ...]
    tau: tuple[int, ...]

    @property
    def rho_inv(self) -> tuple[int, ...]:
        inv = [0] * len(self.rho)
        for k, v in enumerate(self.rho):
            inv[v] = k
        return tuple(inv)


def crt_maps(m: int, n: int) -> CrtMaps:
    if m < 2 or n < 2 or math.gcd(m, n) != 1:
        raise ValueError(f"need coprime m, n >= 2, got ({m}, {n})")
    N = m * n
    assert math.gcd(m + n, N) == 1
    rho = [0] * N
    for x in range(N):
        rho[(x % m) * n + x % n] = x
    tau = tuple((m + n) * j % N for j in range(N))
    return CrtMaps(m, n, tuple(rho), tau)


def verify_kron_equivalence(m: int, n: int) -> bool:
    """Entrywise check in Z[w_mn] that F_mn with rows tau.rho and columns rho is the block
    matrix whose (a, b) block is z^(ab) F_n, where z = w^n and F_n is built from w^m.
    """
    maps = crt_maps(m, n)
    N = m * n
    zeta = CycElt.root_power(N, n)
    eta = CycElt.root_power(N, m)
    zp = [zeta**k for k in range(m)]
    ep = [eta**k for k in range(n)]
    for k in range(N):
        a, i = divmod(k, n)
        row = maps.tau[maps.rho[k]]
        for l in range(N):
            b, j = divmod(l, n)
            lhs = CycElt.root_power(N, row * maps.rho[l])
            if lhs != zp[a * b % m] * ep[i * j % n]:
                return False
    return True


@dataclass(frozen=True)
class KronSpec:
    """Row/column positions K, L in the Kronecker product F_m (x) F_n (position a*n + i)."""

    m: int
    n: int
    rows: tuple[int, ...]
    cols: tuple[int, ...]

    def fourier_spec(self) -> MinorSpec:
        """The minor of F_mn that equals this Kronecker minor up to sign."""
        maps = crt_maps(self.m, self.n)
        return MinorSpec(
            self.m * self.n,
            [maps.tau[maps.rho[k]] for k in self.rows],
            [maps.rho[l] for l in self.cols],
        )

    def pullback(self) -> MinorSpec:
        maps = crt_maps(self.m, self.n)
        return MinorSpec(self.m * self.n, [maps.rho[k] for k in self.rows], [maps.rho[l] for l in self.cols])

    def classify(self):
        return classify(self.pullback())


def kron_minor(ks: KronSpec) -> CycElt:
    """Determinant of the (K, L) submatrix of F_m (x) F_n, in Z[w_mn]."""
    N = ks.m * ks.n
    entries = []
    for k in ks.rows:
        a, i = divmod(k, ks.n)
        entries.append(
            [CycElt.root_power(N, ks.n * a * b + ks.m * i * j)
             for b, j in (divmod(l, ks.n) for l in ks.cols)]
        )
    return cyc.det(entries)


def kron_transfer(spec: MinorSpec, m: int, n: int) -> KronSpec:
    """Kronecker coordinates rho^-1(A), rho^-1(B) of a minor of F_mn.

    The resulting minor equals sigma_{m+n}(D_{A,B}) up to sign.
    """
    if m * n != spec.order:
        raise ValueError(f"{m}*{n} != {spec.order}")
    maps = crt_maps(m, n)
    inv = maps.rho_inv
    return KronSpec(m, n, tuple(sorted(inv[x] for x in spec.rows)), tuple(sorted(inv[x] for x in spec.cols)))


def transfer_check(spec: MinorSpec, m: int, n: int) -> bool:
    """kron_minor(kron_transfer(spec)) == +-sigma_{m+n}(D_{A,B})."""
    ks = kron_transfer(spec, m, n)
    lhs = kron_minor(ks)
    rhs = cyc.galois_apply(m + n, fourier_minor(spec))
    return lhs == rhs or lhs == -rhs
