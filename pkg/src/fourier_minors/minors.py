"""Minors of Fourier matrices F_N = (w^(ij)) over Z[w_N] and in finite characteristic."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

from . import cyclotomic as cyc
from . import modular
from .cyclotomic import CycElt, divisors, euler_phi, prime_divisors, units
from .factor import DEFAULT_BUDGET, Factorization, factorize
from .finite_field import FFElt, FiniteFieldCtx, ff_det


class InvalidSpecError(ValueError):
    pass


@dataclass(frozen=True)
class MinorSpec:
    """Row set A and column set B of a square submatrix of F_N.

    Index sets are normalized to strictly increasing tuples; duplicates or
    out-of-range indices raise :class:`InvalidSpecError`.
    """

    order: int
    rows: tuple[int, ...]
    cols: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.order, int) or self.order < 1:
            raise InvalidSpecError(f"order must be a positive integer, got {self.order!r}")
        rows, cols = tuple(sorted(self.rows)), tuple(sorted(self.cols))
        for name, s in (("rows", rows), ("cols", cols)):
            if len(set(s)) != len(s):
                raise InvalidSpecError(f"duplicate indices in {name}: {list(s)}")
            if s and (s[0] < 0 or s[-1] >= self.order):
                raise InvalidSpecError(f"{name} must lie in [0, {self.order})")
        if len(rows) != len(cols):
            raise InvalidSpecError("row and column sets differ in size")
        if not rows:
            raise InvalidSpecError("empty minor")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)

    @classmethod
    def principal(cls, order: int, indices: Iterable[int]) -> "MinorSpec":
        idx = tuple(indices)
        return cls(order, idx, idx)

    @property
    def size(self) -> int:
        return len(self.rows)

    @property
    def is_principal(self) -> bool:
        return self.rows == self.cols

    def exponents(self) -> list[list[int]]:
        N = self.order
        return [[a * b % N for b in self.cols] for a in self.rows]

    def as_dict(self) -> dict:
        return {"n": self.order, "rows": list(self.rows), "cols": list(self.cols)}


def fourier_minor(spec: MinorSpec) -> CycElt:
    """Exact D_{A,B} = det(w^(ab)) in Z[w_N], rows and columns in increasing order."""
    N = spec.order
    powers = [CycElt.root_power(N, k) for k in range(N)]
    return cyc.det([[powers[e] for e in row] for row in spec.exponents()])


# --- multi-modular evaluation --------------------------------------------


def hadamard_norm_bound_sq(m: int, N: int) -> int:
    """Square of the bound m^(m*phi(N)/2) on |N(D_{A,B})| for an m x m minor."""
    return m ** (m * euler_phi(N))


def _image(spec: MinorSpec, ell: int, root: int) -> int:
    pw = [pow(root, k, ell) for k in range(spec.order)]
    return modular.det_mod([[pw[e] for e in row] for row in spec.exponents()], ell)


def norm_modular(spec: MinorSpec) -> int:
    """N(D_{A,B}) from determinant images at every primitive root mod primes l = 1 (mod N).

    The primes are accumulated until their product exceeds twice the
    Hadamard bound, after which CRT recovers the norm exactly.
    """
    N, m = spec.order, spec.size
    bound_sq = hadamard_norm_bound_sq(m, N)
    residues, moduli, prod = [], [], 1
    for ell in modular.primes_one_mod(N):
        r = 1
        for root in modular.primitive_roots(N, ell):
            r = r * _image(spec, ell, root) % ell
        residues.append(r)
        moduli.append(ell)
        prod *= ell
        if prod * prod > 4 * bound_sq:
            break
    return modular.crt_symmetric(residues, moduli)


def norm_resultant(spec: MinorSpec) -> int:
    """N(D_{A,B}) via the symbolic determinant and a subresultant resultant."""
    return cyc.norm(fourier_minor(spec))


def is_zero_modular(spec: MinorSpec) -> bool:
    """Zero test for D_{A,B}.

    A nonzero image at any root modulo any prime proves D != 0, so the
    common case costs a single modular determinant; otherwise the full
    norm is reconstructed and compared with zero.
    """
    N = spec.order
    ell = next(modular.primes_one_mod(N))
    if _image(spec, ell, modular.root_of_unity(N, ell)):
        return False
    return norm_modular(spec) == 0


@dataclass
class NormReport:
    spec: MinorSpec
    norm: int
    factorization: Factorization | None
    backend: str = "modular"

    @property
    def nonzero(self) -> bool:
        return self.norm != 0

    def format(self) -> str:
        if self.norm == 0:
            return "0"
        sign = "-" if self.norm < 0 else ""
        return f"{self.norm} = {sign}{self.factorization.format()}"


def minor_norm(
    spec: MinorSpec, backend: str = "modular", factor_budget: int = DEFAULT_BUDGET
) -> NormReport:
    if backend == "modular":
        value = norm_modular(spec)
    elif backend == "resultant":
        value = norm_resultant(spec)
    else:
        raise ValueError(f"unknown norm backend {backend!r}")
    fac = factorize(value, factor_budget) if value else None
    return NormReport(spec=spec, norm=value, factorization=fac, backend=backend)


# --- classification -----------------------------------------------------------


def residue_counts(indices: Iterable[int], d: int) -> list[int]:
    counts = [0] * d
    for x in indices:
        counts[x % d] += 1
    return counts


@dataclass
class MinorClassification:
    principal: bool
    d_principal: dict[int, bool] = field(default_factory=dict)
    d_galois: dict[int, int | None] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "principal": self.principal,
            "d_principal": {str(d): v for d, v in self.d_principal.items()},
            "d_galois": {str(d): v for d, v in self.d_galois.items()},
        }


def classify(spec: MinorSpec) -> MinorClassification:
    """Principal / d-principal / d-Galois principal flags for every divisor d of N.

    For the Galois flag the smallest multiplier s in (Z/d)^* with
    |A_{d,i}| = |B_{d,si}| for all i is reported, or None.
    """
    out = MinorClassification(principal=spec.is_principal)
    for d in divisors(spec.order):
        ka = residue_counts(spec.rows, d)
        lb = residue_counts(spec.cols, d)
        out.d_principal[d] = ka == lb
        mult = None
        for s in units(d) if d > 1 else [1]:
            if all(ka[i] == lb[s * i % d] for i in range(d)):
                mult = s
                break
        out.d_galois[d] = mult
    return out


# --- finite characteristic --------------------------------------------------


def ff_minor(spec: MinorSpec, ctx: FiniteFieldCtx, twist: int = 1) -> FFElt:
    """det(z^(k*a*b)) over F_{q^f} where z is the context's root and k = ``twist``."""
    if ctx.n != spec.order:
        raise ValueError(f"field built for n={ctx.n}, spec has order {spec.order}")
    if math.gcd(twist, spec.order) != 1:
        raise ValueError(f"twist {twist} is not a unit mod {spec.order}")
    z = ctx.zeta**twist
    pw = [ctx.one]
    for _ in range(spec.order - 1):
        pw.append(pw[-1] * z)
    return ff_det([[pw[e] for e in row] for row in spec.exponents()])


@dataclass
class VanishingPrimes:
    away: set[int]
    ramified: set[int]
    complete: bool


def vanishing_char_primes(spec: MinorSpec, factor_budget: int = DEFAULT_BUDGET) -> VanishingPrimes:
    """Primes in which some Galois conjugate of the minor vanishes.

    ``away`` holds the primes q not dividing N, ``ramified`` the prime
    divisors of N that divide the norm.  ``complete`` is False when a
    composite cofactor of the norm could not be split within the budget.
    """
    rep = minor_norm(spec, factor_budget=factor_budget)
    if rep.norm == 0:
        raise ValueError("minor vanishes in characteristic 0")
    ps = rep.factorization.prime_set()
    ram = set(prime_divisors(spec.order))
    return VanishingPrimes(
        away=ps - ram, ramified=ps & ram, complete=rep.factorization.complete
    )
