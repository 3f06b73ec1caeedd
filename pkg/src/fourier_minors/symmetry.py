"""Affine orbits of index sets, complement reduction and arithmetic-progression certificates.

The affine group of Z_N is {x -> a*x + b : a a unit, b arbitrary}.  Acting
simultaneously on rows and columns it maps principal (and d-principal)
minors to unit multiples of Galois conjugates, so zero status and norms
are constant on orbits.  For arbitrary pairs the group acts on A and B
independently, which preserves norms only.

Canonical forms are lexicographically least sorted tuples.  For N < 3 no
affine reduction is done at all.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator, Sequence

from .cyclotomic import prime_divisors, units
from .minors import MinorSpec, residue_counts

FAMILIES = ("principal", "d-principal", "nprime-principal", "all")

Affine = tuple[int, int]


@dataclass(frozen=True)
class OrbitKey:
    order: int
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    size: int

    def spec(self) -> MinorSpec:
        return MinorSpec(self.order, self.rows, self.cols)

    def as_dict(self) -> dict:
        return {"rows": list(self.rows), "cols": list(self.cols), "size": self.size}


def group(N: int) -> list[Affine]:
    """Affine maps used for pruning; just the identity when N < 3."""
    if N < 3:
        return [(1, 0)]
    return [(a, b) for a in units(N) for b in range(N)]


def apply(N: int, psi: Affine, A: Sequence[int]) -> tuple[int, ...]:
    a, b = psi
    return tuple(sorted((a * x + b) % N for x in A))


def affine_canonical(N: int, A: Sequence[int]) -> OrbitKey:
    """Least image of A over all N*phi(N) affine maps, with the orbit size."""
    if N < 3:
        raise ValueError("affine reduction needs N >= 3")
    A = tuple(sorted(set(A)))
    if not A:
        raise ValueError("empty index set")
    images = {apply(N, psi, A) for psi in group(N)}
    c = min(images)
    return OrbitKey(N, c, c, len(images))


def pair_canonical(N: int, A: Sequence[int], B: Sequence[int]) -> OrbitKey:
    """Canonical pair under independent affine maps on rows and columns."""
    ka, kb = affine_canonical(N, A), affine_canonical(N, B)
    return OrbitKey(N, ka.rows, kb.rows, ka.size * kb.size)


def _principal_orbits(N: int, m: int) -> Iterator[tuple[tuple[int, ...], int, list[Affine]]]:
    """Canonical m-sets in increasing order, with orbit size and stabilizer.

    Sets containing 0 are scanned in lexicographic order, so the first
    member met of each orbit is its least element; the remaining members
    containing 0 are then marked as seen.  Masks put element i at bit
    N-1-i.
    """
    if N < 3:
        for c in combinations(range(N), m):
            yield c, 1, [(1, 0)]
        return
    us = units(N)
    bit = [1 << (N - 1 - i) for i in range(N)]
    seen: set[int] = set()
    for rest in combinations(range(1, N), m - 1):
        mask = bit[0]
        for i in rest:
            mask += bit[i]
        if mask in seen:
            seen.discard(mask)
            continue
        S = (0,) + rest
        stab: list[Affine] = []
        for a in us:
            aS = [a * x % N for x in S]
            for y in aS:
                t = 0
                for x in aS:
                    t += bit[(x - y) % N]
                if t == mask:
                    stab.append((a, -y % N))
                else:
                    seen.add(t)
        yield S, N * len(us) // len(stab), stab


def _sets_with_counts(N: int, d: int, counts: Sequence[int]) -> list[tuple[int, ...]]:
    classes = [range(i, N, d) for i in range(d)]
    choices = [list(combinations(classes[i], counts[i])) for i in range(d)]
    return sorted(tuple(sorted(sum(parts, ()))) for parts in product(*choices))


def _check_family(N: int, family: str, d: int | None) -> int | None:
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if family in ("d-principal", "nprime-principal"):
        if d is None or d < 1 or N % d:
            raise ValueError(f"family {family} needs a divisor d of {N}")
        if family == "nprime-principal" and (N // d) not in prime_divisors(N):
            raise ValueError(f"{N}/{d} is not prime")
    return d


def enumerate_orbits(N: int, m: int, family: str = "principal", d: int | None = None) -> Iterator[OrbitKey]:
    """Yield every orbit of size-m members of ``family`` once, by increasing key.

    principal: sets A (rows = cols) under the simultaneous affine action.
    d-principal / nprime-principal: pairs with equal residue counts mod d,
    under the simultaneous action.  all: arbitrary pairs under independent
    actions on rows and columns.
    """
    d = _check_family(N, family, d)
    if not 1 <= m <= N // 2:
        raise ValueError(f"size must satisfy 1 <= m <= {N // 2}")
    G = N * len(units(N)) if N >= 3 else 1
    if family == "principal":
        for S, size, _ in _principal_orbits(N, m):
            yield OrbitKey(N, S, S, size)
    elif family == "all":
        reps = [(S, size) for S, size, _ in _principal_orbits(N, m)]
        for A, sa in reps:
            for B, sb in reps:
                yield OrbitKey(N, A, B, sa * sb)
    else:
        for A, _, stab in _principal_orbits(N, m):
            for B in _sets_with_counts(N, d, residue_counts(A, d)):
                fixed = 0
                for psi in stab:
                    img = apply(N, psi, B)
                    if img < B:
                        break
                    fixed += img == B
                else:
                    yield OrbitKey(N, A, B, G // fixed)


def family_size(N: int, m: int, family: str = "principal", d: int | None = None) -> int:
    """Number of size-m members of the family (what orbit sizes must add up to)."""
    d = _check_family(N, family, d)
    if family == "principal":
        return math.comb(N, m)
    if family == "all":
        return math.comb(N, m) ** 2
    per = N // d
    total = 0
    for counts in product(range(min(per, m) + 1), repeat=d):
        if sum(counts) == m:
            w = 1
            for c in counts:
                w *= math.comb(per, c) ** 2
            total += w
    return total


def estimate_orbits(N: int, max_size: int, family: str = "principal", d: int | None = None) -> int:
    G = N * len(units(N)) if N >= 3 else 1
    if family == "all":
        return sum(-(-math.comb(N, m) // G) ** 2 for m in range(1, max_size + 1))
    return sum(-(-family_size(N, m, family, d) // G) for m in range(1, max_size + 1))


# --- complements -----------------------------------------------------------


def complement_reduce(spec: MinorSpec) -> MinorSpec:
    """Swap to the complementary minor when |A| > N/2; zero status is unchanged."""
    N = spec.order
    if spec.size <= N // 2:
        return spec
    rows = tuple(i for i in range(N) if i not in set(spec.rows))
    cols = tuple(i for i in range(N) if i not in set(spec.cols))
    return MinorSpec(N, rows, cols)


# --- arithmetic progressions -------------------------------------------------


@dataclass(frozen=True)
class APCertificate:
    """A is {start + j*step} mod N and step*(b - b') != 0 mod N for distinct b, b' in the other set.

    ``side`` says which index set is the progression ("rows" or "cols").
    """

    order: int
    side: str
    start: int
    step: int
    progression: tuple[int, ...]
    other: tuple[int, ...]

    def witness(self) -> list[int]:
        N = self.order
        return [self.step * (b - c) % N for b, c in combinations(self.other, 2)]

    def check(self) -> bool:
        N, m = self.order, len(self.progression)
        ap = sorted((self.start + j * self.step) % N for j in range(m))
        return ap == sorted(self.progression) and len(set(ap)) == m and all(self.witness())

    def as_dict(self) -> dict:
        return {"side": self.side, "start": self.start, "step": self.step}


def progression_start(N: int, A: Sequence[int], step: int) -> int | None:
    """A start a with A = {a, a+step, ...} mod N, or None."""
    target = set(A)
    m = len(target)
    for a in sorted(target):
        if {(a + j * step) % N for j in range(m)} == target:
            return a
    return None


def _ap(N: int, A: tuple[int, ...], B: tuple[int, ...], side: str) -> APCertificate | None:
    m = len(A)
    steps = [1] if m == 1 else range(1, N)
    for step in steps:
        if any(step * (b - c) % N == 0 for b, c in combinations(B, 2)):
            continue
        a = progression_start(N, A, step)
        if a is not None:
            return APCertificate(N, side, a, step, A, B)
    return None


def ap_certificate(spec: MinorSpec) -> APCertificate | None:
    """Certificate that D_{A,B} is nonzero in characteristic 0 and every q not dividing N.

    Tries A as the progression first, then B (F_N is symmetric); the
    smallest valid step is reported.
    """
    return _ap(spec.order, spec.rows, spec.cols, "rows") or _ap(
        spec.order, spec.cols, spec.rows, "cols"
    )
