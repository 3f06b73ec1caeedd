import random

import pytest
import sympy
from sympy import GF, Poly, Symbol

from fourier_minors.cyclotomic import cyclotomic_poly, mult_order, prime_divisors
from fourier_minors.finite_field import (
    FFElt,
    build_field,
    ff_add,
    ff_det,
    ff_inv,
    ff_is_zero,
    ff_mul,
    ff_pow,
)

X = Symbol("X")

PAIRS = [(n, q) for n in range(1, 40) for q in (2, 3, 5, 7, 11, 13, 31) if n % q]


def test_mult_order_examples():
    assert mult_order(2, 7) == 3
    assert mult_order(3, 7) == 6
    assert mult_order(5, 1) == 1
    with pytest.raises(ValueError):
        mult_order(3, 6)


def test_build_field_7_2():
    ctx = build_field(7, 2)
    assert ctx.f == 3
    assert ctx.modulus in {(1, 1, 0, 1), (1, 0, 1, 1)}


def test_build_field_6_7():
    ctx = build_field(6, 7)
    assert ctx.f == 1
    z = ctx.zeta.coeffs[0]
    assert z in (3, 5)
    assert (z * z - z + 1) % 7 == 0


def test_build_field_5_11():
    ctx = build_field(5, 11)
    assert ctx.f == 1 and ctx.zeta.coeffs[0] in {3, 4, 5, 9}


def test_build_field_rejects_bad_characteristic():
    with pytest.raises(ValueError):
        build_field(6, 3)
    with pytest.raises(ValueError):
        build_field(5, 4)


@pytest.mark.parametrize("n,q", PAIRS)
def test_context_invariants(n, q):
    ctx = build_field(n, q)
    assert ctx.f == mult_order(q, n)
    g = Poly(list(reversed(ctx.modulus)), X, domain=GF(q))
    phi = Poly(list(reversed(cyclotomic_poly(n))), X, domain=GF(q))
    assert g.is_irreducible and g.degree() == ctx.f
    assert phi.rem(g).is_zero
    z = ctx.zeta
    assert ff_pow(z, n) == ctx.one
    for p in prime_divisors(n):
        assert ff_pow(z, n // p) != ctx.one


@pytest.mark.parametrize("n,q", [(7, 2), (13, 3), (21, 5), (11, 2), (9, 2)])
def test_frobenius_has_order_f(n, q):
    ctx = build_field(n, q)
    rng = random.Random(n + q)
    for _ in range(10):
        a = ctx.elt([rng.randrange(q) for _ in range(ctx.f)])
        b = a
        for _ in range(ctx.f):
            b = ff_pow(b, q)
        assert b == a


@pytest.mark.parametrize("n,q", [(7, 2), (6, 7), (13, 3), (15, 2), (5, 11)])
def test_field_axioms(n, q):
    ctx = build_field(n, q)
    rng = random.Random(7 * n + q)
    for _ in range(20):
        a = ctx.elt([rng.randrange(q) for _ in range(ctx.f)])
        b = ctx.elt([rng.randrange(q) for _ in range(ctx.f)])
        assert ff_add(a, b) == ff_add(b, a)
        assert ff_mul(a, b) == ff_mul(b, a)
        if not ff_is_zero(a):
            assert ff_mul(a, ff_inv(a)) == ctx.one
    with pytest.raises(ZeroDivisionError):
        ff_inv(ctx.zero)


def test_elements_keep_length_and_range():
    ctx = build_field(7, 2)
    e = ctx.elt([5, -1, 3, 1, 1])
    assert len(e.coeffs) == ctx.f and all(0 <= c < 2 for c in e.coeffs)


def test_ff_det_basics():
    ctx = build_field(13, 3)
    one, zero = ctx.one, ctx.zero
    ident = [[one if i == j else zero for j in range(4)] for i in range(4)]
    assert ff_det(ident) == one
    a = ctx.elt([1, 2, 0])
    assert ff_det([[a]]) == a


@pytest.mark.parametrize("n,q", [(7, 2), (13, 3), (12, 5), (11, 23)])
def test_ff_det_vandermonde(n, q):
    ctx = build_field(n, q)
    z = ctx.zeta
    exps = list(range(0, n, 2))[:5]
    xs = [ff_pow(z, e) for e in exps]
    m = [[ff_pow(x, j) for j in range(len(xs))] for x in xs]
    expected = ctx.one
    for i in range(len(xs)):
        for j in range(i + 1, len(xs)):
            expected = ff_mul(expected, xs[j] - xs[i])
    assert ff_det(m) == expected
    assert not ff_is_zero(ff_det(m))


def test_mixing_contexts_fails():
    a = build_field(7, 2).one
    b = build_field(7, 3).one
    with pytest.raises(ValueError):
        ff_add(a, b)
    assert isinstance(a, FFElt)
