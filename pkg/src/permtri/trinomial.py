"""The trinomials f = a*x + b*x^q + x^(2q-1) over F_{q^2}.

Brute-force evaluation gives the permutation oracle and direct power sums;
the binomial expansion of f(x)^s for s = alpha + beta*q, alpha + beta = q - 1,
and the closed forms for s = 1 + (q-2)q and s = 2 + (q-3)q are checked
against them.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .field import FieldCtx, FieldError

HERMITE_MAX_FIELD = 64


@dataclass(frozen=True)
class Trinomial:
    ctx: FieldCtx
    a: int
    b: int

    def __repr__(self):
        return f"Trinomial(q={self.ctx.q}, a={self.a}, b={self.b})"

    def __call__(self, x: int) -> int:
        return evaluate(self, x)


def evaluate(f: Trinomial, x: int) -> int:
    ctx = f.ctx
    q = ctx.q
    t = ctx.add(ctx.mul(f.a, x), ctx.mul(f.b, ctx.pow(x, q)))
    return ctx.add(t, ctx.pow(x, 2 * q - 1))


def all_values(f: Trinomial) -> np.ndarray:
    """f(x) for every x in encoding order."""
    ctx = f.ctx
    x = np.arange(ctx.q2, dtype=np.int64)
    ax = ctx.vmul(f.a, x)
    bxq = ctx.vmul(f.b, ctx.vpow(x, ctx.q))
    return ctx.vadd(ctx.vadd(ax, bxq), ctx.vpow(x, 2 * ctx.q - 1))


def is_permutation(f: Trinomial) -> bool:
    seen = np.zeros(f.ctx.q2, dtype=bool)
    seen[all_values(f)] = True
    return bool(seen.all())


def power_sum(f: Trinomial, s: int) -> int:
    """Sum of f(x)^s over F_{q^2}, with 0^0 = 1."""
    if s < 0:
        raise ValueError("s must be nonnegative")
    ctx = f.ctx
    return ctx.vsum(ctx.vpow(all_values(f), s))


def power_sum_expansion(f: Trinomial, alpha: int) -> int:
    """Sum of f(x)^s for s = alpha + (q-1-alpha)q, via the binomial expansion.

    With beta = q-1-alpha,

        sum f(x)^s = - sum C(alpha,i) C(i,k) C(beta,j) C(j,l)
                         * a^(s-i-qj) * b^(i-k+q(j-l))

    over i+k-j-l-alpha-1 in {0, -(q+1)}.  Both exponents are nonnegative, so
    with 0^0 = 1 this covers a = 0 and b = 0 as well.
    """
    ctx = f.ctx
    q, p = ctx.q, ctx.p
    if not 0 <= alpha <= q - 1:
        raise ValueError(f"alpha must lie in [0, {q - 1}]")
    beta = q - 1 - alpha
    s = alpha + beta * q
    a, b = f.a, f.b
    acc = 0
    for i in range(alpha + 1):
        ci = comb(alpha, i)
        for k in range(i + 1):
            cik = ci * comb(i, k)
            for j in range(beta + 1):
                cikj = cik * comb(beta, j)
                for target in (0, -(q + 1)):
                    l = i + k - j - alpha - 1 - target
                    if not 0 <= l <= j:
                        continue
                    coeff = cikj * comb(j, l) % p
                    if coeff == 0:
                        continue
                    term = ctx.mul(ctx.pow(a, s - i - q * j), ctx.pow(b, i - k + q * (j - l)))
                    acc = ctx.add(acc, ctx.mul(coeff, term))
    return ctx.neg(acc)


def lemma32_admissible(f: Trinomial) -> bool:
    """ab != 0 and x^2 + x + a/b^2 has two distinct roots in F_q."""
    ctx = f.ctx
    if f.a == 0 or f.b == 0:
        return False
    e = ctx.div(f.a, ctx.mul(f.b, f.b))
    if not ctx.is_in_subfield(e):
        return False
    if ctx.p == 2:
        return ctx.abs_trace(e) == 0
    return ctx.is_nonzero_square_fq(ctx.sub(1, ctx.mul(ctx.from_int(4), e)))


def lemma32_rhs(f: Trinomial, which: str, corrected: bool = False) -> int:
    """Closed form for the power sum at s = 1+(q-2)q ("eq323") or s = 2+(q-3)q ("eq324").

    The "eq323" form is evaluated exactly as published,

        2 (b^(1-q) - a)(b^2 - a^2 b^(q-1) - 3a) / (a^2 (b^2 - 4a)),

    which drops a factor b^(4(1-q)): it only matches the power sum when
    b^(4(q-1)) = 1 (e.g. a or b in F_q) or the numerator vanishes.
    ``corrected=True`` restores the factor.  The "eq324" form is exact as
    published and ignores ``corrected``.
    """
    ctx = f.ctx
    q = ctx.q
    if which not in ("eq323", "eq324"):
        raise ValueError(f"unknown closed form {which!r}")
    if not lemma32_admissible(f):
        raise FieldError(f"{f!r} does not satisfy the closed-form hypothesis")
    if which == "eq324" and q <= 2:
        raise FieldError("the s = 2+(q-3)q closed form needs q > 2")
    a, b = f.a, f.b
    c = ctx.from_int
    mul, add, sub, pw = ctx.mul, ctx.add, ctx.sub, ctx.pow
    bb = mul(b, b)
    a_minus = sub(pw(b, 1 - q), a)                       # b^(1-q) - a
    rel = sub(sub(bb, mul(mul(a, a), pw(b, q - 1))), mul(c(3), a))  # b^2 - a^2 b^(q-1) - 3a
    d = sub(bb, mul(c(4), a))                            # b^2 - 4a
    if which == "eq323":
        num = mul(c(2), mul(a_minus, rel))
        if corrected:
            num = mul(num, pw(b, 4 * (1 - q)))
        return ctx.div(num, mul(mul(a, a), d))
    cubic = sub(mul(c(9), a), mul(c(2), bb))
    cubic = add(cubic, mul(pw(a, 3), pw(b, 2 * q - 2)))
    cubic = sub(cubic, mul(c(6), mul(mul(a, a), pw(b, q - 1))))
    cubic = add(cubic, mul(a, pw(b, q + 1)))
    num = mul(mul(c(3), pw(b, 8 - 7 * q)), mul(a_minus, mul(rel, cubic)))
    return ctx.div(num, mul(pw(a, 4), mul(d, d)))


def lemma32_exponent(q: int, which: str) -> int:
    return 1 + (q - 2) * q if which == "eq323" else 2 + (q - 3) * q


def hermite_test(f: Trinomial) -> bool:
    """Hermite's criterion: exactly one root and vanishing power sums for 1 <= s <= q^2-2."""
    ctx = f.ctx
    if ctx.q2 > HERMITE_MAX_FIELD:
        raise FieldError(f"hermite_test is limited to q^2 <= {HERMITE_MAX_FIELD}")
    vals = all_values(f)
    if np.count_nonzero(vals == 0) != 1:
        return False
    return all(ctx.vsum(ctx.vpow(vals, s)) == 0 for s in range(1, ctx.q2 - 1))


# -- sweeps -------------------------------------------------------------------

EXHAUSTIVE_EXPANSION_MAX_Q = 5


def expansion_check(ctx: FieldCtx, samples: int = 1000, seed: int = 0) -> dict:
    """power_sum_expansion vs power_sum over (a, b, alpha) with ab != 0.

    Exhaustive for q <= 5, otherwise ``samples`` draws from a seeded generator.
    """
    q = ctx.q
    if q <= EXHAUSTIVE_EXPANSION_MAX_Q:
        cases = [(a, b, al) for a in range(1, ctx.q2) for b in range(1, ctx.q2) for al in range(q)]
        mode = "exhaustive"
    else:
        rng = np.random.default_rng(seed)
        ab = rng.integers(1, ctx.q2, size=(samples, 2))
        al = rng.integers(0, q, size=samples)
        cases = [(int(a), int(b), int(k)) for (a, b), k in zip(ab, al)]
        mode = "sample"
    failures = []
    for a, b, alpha in cases:
        f = Trinomial(ctx, a, b)
        lhs = power_sum_expansion(f, alpha)
        rhs = power_sum(f, alpha + (q - 1 - alpha) * q)
        if lhs != rhs:
            failures.append({"a": a, "b": b, "alpha": alpha, "expansion": lhs, "direct": rhs})
    return {"mode": mode, "checked": len(cases), "failures": failures}


def closed_form_check(ctx: FieldCtx) -> dict:
    """Both closed forms against direct power sums at every admissible (a, b)."""
    q = ctx.q
    forms = [("eq323", False), ("eq323_corrected", True)]
    if q > 2:
        forms.append(("eq324", False))
    out = {name: {"checked": 0, "failures": []} for name, _ in forms}
    for a in range(1, ctx.q2):
        for b in range(1, ctx.q2):
            f = Trinomial(ctx, a, b)
            if not lemma32_admissible(f):
                continue
            for name, corrected in forms:
                which = name[:5]
                direct = power_sum(f, lemma32_exponent(q, which))
                closed = lemma32_rhs(f, which, corrected=corrected)
                out[name]["checked"] += 1
                if direct != closed:
                    out[name]["failures"].append({"a": a, "b": b, "direct": direct, "closed_form": closed})
    return out


def hermite_crosscheck(ctx: FieldCtx) -> dict:
    """hermite_test against is_permutation for every (a, b)."""
    failures = []
    pp = 0
    for a in range(ctx.q2):
        for b in range(ctx.q2):
            f = Trinomial(ctx, a, b)
            h, o = hermite_test(f), is_permutation(f)
            pp += o
            if h != o:
                failures.append({"a": a, "b": b, "hermite": h, "oracle": o})
    return {"checked": ctx.q2 * ctx.q2, "pp_count": pp, "failures": failures}
