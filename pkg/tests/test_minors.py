import math
import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fourier_minors import cyclotomic as cyc
from fourier_minors.cyclotomic import CycElt
from fourier_minors.finite_field import FiniteFieldCtx, _factor_mod, build_field, ff_det
from fourier_minors.minors import (
    InvalidSpecError,
    MinorSpec,
    classify,
    ff_minor,
    fourier_minor,
    hadamard_norm_bound_sq,
    is_zero_modular,
    minor_norm,
    norm_modular,
    norm_resultant,
    vanishing_char_primes,
)


def w(n, k=1):
    return CycElt.root_power(n, k)


@st.composite
def specs(draw, max_order=16, principal=False):
    N = draw(st.integers(2, max_order))
    m = draw(st.integers(1, N))
    rows = draw(st.lists(st.integers(0, N - 1), min_size=m, max_size=m, unique=True))
    cols = rows if principal else draw(st.lists(st.integers(0, N - 1), min_size=m, max_size=m, unique=True))
    return MinorSpec(N, rows, cols)


def random_specs(count, seed, max_order=16, max_size=None):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        N = rng.randint(2, max_order)
        m = rng.randint(1, min(N, max_size or N))
        out.append(MinorSpec(N, rng.sample(range(N), m), rng.sample(range(N), m)))
    return out


# --- spec validation ---------------------------------------------------------


def test_spec_normalizes_and_validates():
    s = MinorSpec(7, [3, 0, 1], (5, 1, 0))
    assert s.rows == (0, 1, 3) and s.cols == (0, 1, 5)
    for bad in ([0, 0], [0, 7], [-1, 2]):
        with pytest.raises(InvalidSpecError):
            MinorSpec(7, bad, [0, 1])
    with pytest.raises(InvalidSpecError):
        MinorSpec(7, [0, 1], [0])
    with pytest.raises(InvalidSpecError):
        MinorSpec(7, [], [])


# --- golden values -------------------------------------------------------------


def test_minor_value_n7():
    d = fourier_minor(MinorSpec.principal(7, [0, 1, 3]))
    assert d == w(7, 3) * (3 - w(7, 3) - w(7, 5) - w(7, 6))
    assert d == cyc.reduce([0, -1, -1, 3, 0, 0, -1], 7)


def test_minor_value_n6():
    assert fourier_minor(MinorSpec.principal(6, [0, 1, 3])) == -2 * (1 + w(6))


def test_singleton_minor_is_one():
    for N in range(1, 12):
        assert fourier_minor(MinorSpec.principal(N, [0])) == CycElt.one(N)


def test_golden_norms():
    r7 = minor_norm(MinorSpec.principal(7, [0, 1, 3]))
    assert r7.norm == 2744 and r7.factorization.primes == [(2, 3), (7, 3)]
    assert r7.format() == "2744 = 2^3·7^3"
    assert minor_norm(MinorSpec.principal(6, [0, 1, 3])).norm == 12


def test_size_one_norms_are_units():
    for N in range(2, 20):
        for a in range(N):
            for b in range(N):
                assert abs(norm_modular(MinorSpec(N, [a], [b]))) == 1


def test_unknown_backend():
    with pytest.raises(ValueError):
        minor_norm(MinorSpec.principal(5, [0]), backend="float")


# --- classification ----------------------------------------------------------------


def test_classify_principal():
    c = classify(MinorSpec.principal(12, [0, 5, 7]))
    assert c.principal
    assert all(c.d_principal.values())
    assert all(v == 1 for v in c.d_galois.values())


def test_classify_three_principal():
    c = classify(MinorSpec(6, [0, 1], [3, 4]))
    assert not c.principal and c.d_principal[3] and c.d_principal[2]
    assert not c.d_principal[6]


def test_classify_galois_multiplier():
    c = classify(MinorSpec(5, [1, 2], [2, 4]))
    assert not c.d_principal[5]
    assert c.d_galois[5] == 2


@settings(max_examples=200, deadline=None)
@given(specs(max_order=30))
def test_classification_invariants(spec):
    c = classify(spec)
    for d in cyc.divisors(spec.order):
        if c.principal:
            assert c.d_principal[d]
        if c.d_principal[d]:
            assert c.d_galois[d] == 1
        s = c.d_galois[d]
        if s is not None:
            ka = [sum(1 for x in spec.rows if x % d == i) for i in range(d)]
            lb = [sum(1 for x in spec.cols if x % d == i) for i in range(d)]
            assert all(ka[i] == lb[s * i % d] for i in range(d))


# --- finite characteristic -----------------------------------------------------


def test_ff_minor_all_ones_block():
    for q in (3, 5, 7):
        ctx = build_field(4, q)
        assert ff_minor(MinorSpec.principal(4, [0, 2]), ctx).is_zero()


def test_ff_minor_n7_both_cubic_factors():
    spec = MinorSpec.principal(7, [0, 1, 3])
    factors = _factor_mod(cyc.cyclotomic_poly(7), 2)
    assert len(factors) == 2
    vanish = []
    for g in factors:
        ctx = FiniteFieldCtx(q=2, n=7, f=3, modulus=g)
        vanish.append(any(ff_minor(spec, ctx, k).is_zero() for k in cyc.units(7)))
    assert all(vanish)
    assert any(ff_minor(spec, build_field(7, 2), k).is_zero() for k in cyc.units(7))


def test_ff_minor_size_one_nonzero():
    ctx = build_field(9, 2)
    for a in range(9):
        assert not ff_minor(MinorSpec(9, [a], [(a * 5) % 9]), ctx).is_zero()


def test_ff_minor_validation():
    with pytest.raises(ValueError):
        ff_minor(MinorSpec.principal(7, [0]), build_field(5, 2))
    with pytest.raises(ValueError):
        ff_minor(MinorSpec.principal(6, [0]), build_field(6, 5), twist=2)


@pytest.mark.parametrize("N,q", [(5, 2), (7, 2), (7, 3), (9, 2), (10, 3), (11, 23), (12, 5), (13, 3)])
def test_twisted_ff_vanishing_matches_norm_divisibility(N, q):
    ctx = build_field(N, q)
    for spec in random_specs(40, N * q, max_order=N, max_size=N // 2 + 1):
        if spec.order != N:
            spec = MinorSpec(N, spec.rows, spec.cols) if max(spec.rows + spec.cols) < N else None
        if spec is None:
            continue
        n = norm_modular(spec)
        twisted_zero = any(ff_minor(spec, ctx, k).is_zero() for k in cyc.units(N))
        assert twisted_zero == (n % q == 0), spec


def test_twisted_vanishing_on_known_witness():
    spec = MinorSpec.principal(7, [0, 1, 3])
    ctx = build_field(7, 2)
    assert sum(ff_minor(spec, ctx, k).is_zero() for k in cyc.units(7)) >= 1


def test_vanishing_char_primes():
    v = vanishing_char_primes(MinorSpec.principal(7, [0, 1, 3]))
    assert v.away == {2} and v.ramified == {7} and v.complete
    v = vanishing_char_primes(MinorSpec.principal(6, [0, 1, 3]))
    assert v.away == set() and v.ramified <= {2, 3}
    v = vanishing_char_primes(MinorSpec(11, [4], [9]))
    assert v.away == set() and v.ramified == set()
    with pytest.raises(ValueError):
        vanishing_char_primes(MinorSpec.principal(4, [0, 2]))


# --- identities ----------------------------------------------------------------------


@settings(max_examples=100, deadline=None)
@given(specs(max_order=14), st.integers(0, 50))
def test_translation_law(spec, t):
    N = spec.order
    shifted = MinorSpec(N, [(a + t) % N for a in spec.rows], spec.cols)
    # sorting the translated rows permutes them; compare up to that sign
    perm = sorted(range(spec.size), key=lambda i: (spec.rows[i] + t) % N)
    sign = _perm_sign(perm)
    expected = w(N, t * sum(spec.cols)) * fourier_minor(spec)
    assert fourier_minor(shifted) == (expected if sign > 0 else -expected)


def _perm_sign(perm):
    sign, seen = 1, set()
    for i in range(len(perm)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@settings(max_examples=100, deadline=None)
@given(specs(max_order=14), st.integers(1, 60))
def test_galois_law(spec, k):
    N = spec.order
    if math.gcd(k, N) != 1:
        k = 1
    d = fourier_minor(spec)
    rows_perm = sorted(range(spec.size), key=lambda i: k * spec.rows[i] % N)
    cols_perm = sorted(range(spec.size), key=lambda i: k * spec.cols[i] % N)
    kA = fourier_minor(MinorSpec(N, [k * a % N for a in spec.rows], spec.cols))
    kB = fourier_minor(MinorSpec(N, spec.rows, [k * b % N for b in spec.cols]))
    g = cyc.galois_apply(k, d)
    assert kA == (g if _perm_sign(rows_perm) > 0 else -g)
    assert kB == (g if _perm_sign(cols_perm) > 0 else -g)


@settings(max_examples=100, deadline=None)
@given(specs(max_order=14), st.integers(1, 60), st.integers(0, 60), st.booleans())
def test_affine_norm_invariance(spec, a, b, on_rows):
    N = spec.order
    if N < 3:
        return
    if math.gcd(a, N) != 1:
        a = 1
    if on_rows:
        moved = MinorSpec(N, [(a * x + b) % N for x in spec.rows], spec.cols)
    else:
        moved = MinorSpec(N, spec.rows, [(a * x + b) % N for x in spec.cols])
    assert abs(norm_modular(moved)) == abs(norm_modular(spec))


def test_complementarity_n4():
    z = MinorSpec.principal(4, [0, 2])
    c = MinorSpec.principal(4, [1, 3])
    assert fourier_minor(z).is_zero() and fourier_minor(c).is_zero()


def test_complementarity_exhaustive_small():
    for N in (4, 6, 8, 9):
        for m in range(1, N):
            for K in combinations(range(N), m):
                for L in combinations(range(N), m):
                    Kc = [x for x in range(N) if x not in K]
                    Lc = [x for x in range(N) if x not in L]
                    a = is_zero_modular(MinorSpec(N, K, L))
                    b = is_zero_modular(MinorSpec(N, Kc, Lc))
                    assert a == b
            if N > 6:
                break


def test_unitarity_norm_identity():
    for N in range(2, 12):
        full = MinorSpec.principal(N, range(N))
        n = norm_resultant(full)
        assert n * n == N ** (N * cyc.euler_phi(N))


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_chebotarev_oracle(p):
    from fourier_minors import symmetry

    for m in range(1, p // 2 + 1):
        reps = [S for S, _, _ in symmetry._principal_orbits(p, m)]
        for A in reps:
            for B in reps:
                assert not is_zero_modular(MinorSpec(p, A, B))


def test_hadamard_bound_and_backend_agreement():
    for spec in random_specs(150, 11, max_order=14, max_size=6):
        n = norm_modular(spec)
        assert n == norm_resultant(spec)
        assert n * n <= hadamard_norm_bound_sq(spec.size, spec.order)
