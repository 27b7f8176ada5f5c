import pickle

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from permtri.field import (
    FieldCtx,
    FieldError,
    arith,
    build_context,
    context_for_q,
    find_primitive_modulus,
    is_primitive,
    prime_power,
)

SMALL_Q = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]


def naive_polymul(x, y, ctx):
    """Schoolbook product of two encodings, reduced by the modulus, no tables."""
    p, m = ctx.p, 2 * ctx.n
    xs = [(x // p**i) % p for i in range(m)]
    ys = [(y // p**i) % p for i in range(m)]
    prod = [0] * (2 * m - 1)
    for i, a in enumerate(xs):
        for j, b in enumerate(ys):
            prod[i + j] = (prod[i + j] + a * b) % p
    mod = ctx.modulus
    for k in range(len(prod) - 1, m - 1, -1):
        c = prod[k]
        for j in range(m + 1):
            prod[k - m + j] = (prod[k - m + j] - c * mod[j]) % p
    return sum(c * p**i for i, c in enumerate(prod[:m]))


def test_prime_power():
    assert prime_power(9) == (3, 2)
    assert prime_power(2) == (2, 1)
    assert prime_power(1024) == (2, 10)
    for bad in (1, 6, 12, 100):
        with pytest.raises(FieldError):
            prime_power(bad)


def test_moduli_are_smallest_primitive():
    assert list(context_for_q(3).modulus) == [2, 1, 1]
    assert list(context_for_q(5).modulus) == [2, 1, 1]
    assert list(context_for_q(4).modulus) == [1, 1, 0, 0, 1]
    # t^2 + 1 over F_3 is irreducible but t has order 4
    assert not is_primitive([1, 0, 1], 3)
    assert find_primitive_modulus(3, 2) == [2, 1, 1]


def test_f9_examples():
    ctx = context_for_q(3)
    assert ctx.add(1, 2) == 0
    assert ctx.mul(3, 3) == 7          # t*t = 2t + 1 mod t^2 + t + 2
    assert ctx.frobenius(3) == 8       # t^3 = 2t + 2
    assert ctx.inv(1) == 1
    assert ctx.pow(0, 0) == 1


def test_constructor_errors():
    with pytest.raises(FieldError):
        FieldCtx(4, 1)
    with pytest.raises(FieldError):
        FieldCtx(2, 0)
    with pytest.raises(FieldError):
        FieldCtx(2, 12)                # 2^24 > table budget


def test_large_context_builds():
    ctx = build_context(2, 10)
    assert ctx.q2 == 1 << 20
    assert ctx.mul(ctx.gen, ctx.inv(ctx.gen)) == 1


def test_zero_power_and_inverse():
    ctx = context_for_q(5)
    with pytest.raises(ZeroDivisionError):
        ctx.inv(0)
    with pytest.raises(ZeroDivisionError):
        ctx.pow(0, -1)
    assert ctx.pow(0, 5) == 0


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_mul_matches_schoolbook(q):
    ctx = context_for_q(q)
    for x in range(ctx.q2):
        for y in range(ctx.q2):
            assert ctx.mul(x, y) == naive_polymul(x, y, ctx)


@pytest.mark.parametrize("q", SMALL_Q)
def test_subfield(q):
    ctx = context_for_q(q)
    sub = ctx.subfield_elements()
    assert len(sub) == q
    assert sub == [x for x in range(ctx.q2) if ctx.pow(x, q) == x]
    # F_q contains the prime field and is closed under + and *
    assert all(ctx.from_int(k) in sub for k in range(ctx.p))
    s = set(sub)
    for x in sub[:6]:
        for y in sub[:6]:
            assert ctx.add(x, y) in s and ctx.mul(x, y) in s


@pytest.mark.parametrize("q", SMALL_Q)
def test_norm_and_trace_land_in_subfield(q):
    ctx = context_for_q(q)
    for x in range(ctx.q2):
        assert ctx.is_in_subfield(ctx.norm(x))
        assert ctx.is_in_subfield(ctx.trace(x))
        assert ctx.frobenius(ctx.frobenius(x)) == x


@pytest.mark.parametrize("q", [2, 4, 8, 16])
def test_abs_trace(q):
    ctx = context_for_q(q)
    sub = ctx.subfield_elements()
    zeros = [e for e in sub if ctx.abs_trace(e) == 0]
    assert len(zeros) == q // 2
    # x^2 + x + e has a root in F_q iff the trace vanishes
    for e in sub:
        has_root = any(ctx.add(ctx.mul(x, x), ctx.add(x, e)) == 0 for x in sub)
        assert has_root == (ctx.abs_trace(e) == 0)
    with pytest.raises(FieldError):
        context_for_q(3).abs_trace(1)


@pytest.mark.parametrize("q", [3, 5, 7, 9])
def test_quadratic_character(q):
    ctx = context_for_q(q)
    sub = ctx.subfield_elements()
    squares = {ctx.mul(x, x) for x in sub if x}
    for c in sub[1:]:
        assert ctx.is_square_fq(c) == (c in squares)
    assert not ctx.is_nonzero_square_fq(0)
    with pytest.raises(FieldError):
        ctx.is_square_fq(0)


@pytest.mark.parametrize("q", [3, 4, 5, 9])
def test_vector_ops_match_scalar(q):
    ctx = context_for_q(q)
    x = np.arange(ctx.q2)
    y = (x * 7 + 3) % ctx.q2
    assert ctx.vadd(x, y).tolist() == [ctx.add(a, b) for a, b in zip(x.tolist(), y.tolist())]
    assert ctx.vmul(x, y).tolist() == [ctx.mul(a, b) for a, b in zip(x.tolist(), y.tolist())]
    assert ctx.vneg(x).tolist() == [ctx.neg(a) for a in x.tolist()]
    assert ctx.vpow(x, q + 1).tolist() == [ctx.pow(a, q + 1) for a in x.tolist()]
    nz = x[1:]
    assert ctx.vinv(nz).tolist() == [ctx.inv(a) for a in nz.tolist()]
    assert ctx.vsum(x) == ctx.sum(x.tolist())


def test_context_pickles_and_is_cached():
    ctx = context_for_q(7)
    assert pickle.loads(pickle.dumps(ctx)) is ctx
    assert ctx.describe() == {"p": 7, "n": 1, "q": 7, "modulus": list(ctx.modulus)}


def test_arith_dispatch():
    ctx = context_for_q(5)
    assert arith(ctx, "add", 3, 4) == ctx.add(3, 4)
    assert arith(ctx, "pow", 7, -2) == ctx.pow(7, -2)
    assert arith(ctx, "inv", 7) == ctx.inv(7)
    with pytest.raises(FieldError):
        arith(ctx, "mul", 3, 25)
    with pytest.raises(FieldError):
        arith(ctx, "sqrt", 3)


# -- field axioms ----------------------------------------------------------

fields = st.sampled_from([2, 3, 4, 5, 8, 9, 25, 27]).map(context_for_q)


@st.composite
def field_and_elements(draw, k=3):
    ctx = draw(fields)
    elems = [draw(st.integers(0, ctx.q2 - 1)) for _ in range(k)]
    return ctx, elems


@settings(max_examples=300, deadline=None)
@given(field_and_elements())
def test_ring_axioms(data):
    ctx, (x, y, z) = data
    assert ctx.add(x, y) == ctx.add(y, x)
    assert ctx.mul(x, y) == ctx.mul(y, x)
    assert ctx.add(ctx.add(x, y), z) == ctx.add(x, ctx.add(y, z))
    assert ctx.mul(ctx.mul(x, y), z) == ctx.mul(x, ctx.mul(y, z))
    assert ctx.mul(x, ctx.add(y, z)) == ctx.add(ctx.mul(x, y), ctx.mul(x, z))
    assert ctx.add(x, ctx.neg(x)) == 0
    assert ctx.sub(ctx.add(x, y), y) == x


@settings(max_examples=300, deadline=None)
@given(field_and_elements(k=2))
def test_inverses_and_frobenius(data):
    ctx, (x, y) = data
    if x:
        assert ctx.mul(x, ctx.inv(x)) == 1
        assert ctx.div(ctx.mul(x, y), x) == y
        assert ctx.pow(x, ctx.order) == 1
    # x -> x^q is additive and multiplicative
    assert ctx.frobenius(ctx.add(x, y)) == ctx.add(ctx.frobenius(x), ctx.frobenius(y))
    assert ctx.frobenius(ctx.mul(x, y)) == ctx.mul(ctx.frobenius(x), ctx.frobenius(y))
