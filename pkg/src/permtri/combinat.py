"""Binomial coefficients mod p and the binomial-sum identities over F_q.

The sums studied here are

    S(u, v; z) = sum_{0 <= l <= (q-u)/2} C(l+v, v) * C(-l, l+u) * z^l

for u in {0, 1}, v in {0, 1, 2}.  Closed forms are checked pointwise at every
admissible z in F_q, never symbolically.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from .field import FieldCtx, FieldError


def lucas(t: int, k: int, p: int) -> int:
    """C(t, k) mod p for t, k >= 0, digit by digit."""
    r = 1
    while t or k:
        td, kd = t % p, k % p
        if kd > td:
            return 0
        r = r * comb(td, kd) % p
        t //= p
        k //= p
    return r


def gen_binom(t: int, k: int, p: int) -> int:
    """Generalised C(t, k) = t(t-1)...(t-k+1)/k! reduced mod p; t may be negative."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if t < 0:
        # C(t, k) = (-1)^k C(-t+k-1, k)
        r = lucas(-t + k - 1, k, p)
        return (-r) % p if k % 2 else r
    return lucas(t, k, p)


def binom_sum(ctx: FieldCtx, u: int, v: int, z: int) -> int:
    if u not in (0, 1) or v not in (0, 1, 2):
        raise ValueError(f"unsupported (u, v) = ({u}, {v})")
    if not ctx.is_in_subfield(z):
        raise FieldError(f"{z} is not in F_{ctx.q}")
    p = ctx.p
    acc = 0
    zl = 1
    for l in range((ctx.q - u) // 2 + 1):
        coeff = comb(l + v, v) * gen_binom(-l, l + u, p) % p
        if coeff:
            acc = ctx.add(acc, ctx.mul(coeff, zl))
        zl = ctx.mul(zl, z)
    return acc


class IdentityId(str, enum.Enum):
    I327 = "I327"
    I328 = "I328"
    I329 = "I329"
    I330 = "I330"
    I331 = "I331"
    I332 = "I332"
    L31 = "L31"
    L41 = "L41"


# tag -> (u, v) of the summed side
_SUM_SHAPE = {
    IdentityId.I327: (0, 0),
    IdentityId.I328: (0, 1),
    IdentityId.I329: (0, 2),
    IdentityId.I330: (1, 0),
    IdentityId.I331: (1, 1),
    IdentityId.I332: (1, 2),
    IdentityId.L31: (0, 0),
    IdentityId.L41: (0, 0),
}


class PreconditionError(FieldError):
    """The identity's hypothesis fails at this point."""


@dataclass(frozen=True)
class IdentityCheck:
    id: IdentityId
    z: int
    lhs: int
    rhs: int

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def splits_distinct(ctx: FieldCtx, z: int) -> bool:
    """Whether x^2 + x - z has two distinct roots in F_q (z in F_q)."""
    if ctx.p == 2:
        return ctx.abs_trace(z) == 0
    disc = ctx.add(1, ctx.mul(4 % ctx.p, z))
    return ctx.is_nonzero_square_fq(disc)


def quadratic_roots(ctx: FieldCtx, z: int) -> list[int]:
    """Roots of x^2 + x - z in F_{q^2}, by exhaustive search."""
    table = _square_plus_self(ctx)
    return [x for x in range(ctx.q2) if table[x] == z]


@lru_cache(maxsize=16)
def _square_plus_self(ctx):
    x = np.arange(ctx.q2)
    return ctx.vadd(ctx.vmul(x, x), x).tolist()


def admissible(ctx: FieldCtx, ident: IdentityId, z: int) -> bool:
    """Whether z meets the hypothesis attached to ``ident``."""
    ident = IdentityId(ident)
    if not ctx.is_in_subfield(z):
        return False
    four_z_plus_one = ctx.add(1, ctx.mul(4 % ctx.p, z))
    if ident is IdentityId.L31:
        return ctx.p != 2
    if ident is IdentityId.L41:
        return ctx.p == 2 or four_z_plus_one != 0
    if ident in (IdentityId.I329, IdentityId.I332) and ctx.q <= 2:
        return False
    if ident is IdentityId.I330 and z == 0:
        return False
    return splits_distinct(ctx, z)


def _closed_form(ctx: FieldCtx, ident: IdentityId, z: int) -> int:
    c = ctx.from_int
    add, mul, div = ctx.add, ctx.mul, ctx.div
    w = add(1, mul(c(4), z))  # 1 + 4z
    if ident in (IdentityId.I327, IdentityId.I330):
        return 1
    if ident is IdentityId.I328:
        return div(add(1, mul(c(3), z)), w)
    if ident is IdentityId.I329:
        num = add(add(1, mul(c(6), z)), mul(c(11), mul(z, z)))
        return div(num, mul(w, w))
    if ident is IdentityId.I331:
        return div(mul(c(2), z), w)
    if ident is IdentityId.I332:
        num = mul(mul(c(3), z), add(1, mul(c(2), z)))
        return div(num, mul(w, w))
    if ident is IdentityId.L31:
        return div(add(1, ctx.pow(w, (ctx.q - 1) // 2)), c(2))
    if ident is IdentityId.L41:
        roots = quadratic_roots(ctx, z)
        r1, r2 = roots
        e = ctx.q + 1
        num = ctx.sub(ctx.pow(r1, e), ctx.pow(r2, e))
        return ctx.neg(div(num, ctx.sub(r1, r2)))
    raise ValueError(ident)  # pragma: no cover


def check_identity(ctx: FieldCtx, ident: IdentityId | str, z: int) -> IdentityCheck:
    """Evaluate both sides of an identity at z; raise PreconditionError if z is inadmissible."""
    ident = IdentityId(ident)
    if not admissible(ctx, ident, z):
        raise PreconditionError(f"{ident.value} is not applicable at z={z} for q={ctx.q}")
    u, v = _SUM_SHAPE[ident]
    return IdentityCheck(ident, z, binom_sum(ctx, u, v, z), _closed_form(ctx, ident, z))


def identity_suite(ctx: FieldCtx) -> dict:
    """Check every identity at every admissible z in F_q.

    Inadmissible points are counted, not silently dropped; for I330 the value
    of the sum at z = 0 is recorded separately.
    """
    out = {}
    zs = ctx.subfield_elements()
    for ident in IdentityId:
        checked = skipped = 0
        failures = []
        for z in zs:
            if not admissible(ctx, ident, z):
                skipped += 1
                continue
            res = check_identity(ctx, ident, z)
            checked += 1
            if not res.holds:
                failures.append({"z": z, "lhs": res.lhs, "rhs": res.rhs})
        entry = {"checked": checked, "skipped": skipped, "failures": failures}
        if ident is IdentityId.I330:
            entry["sum_at_zero"] = binom_sum(ctx, 1, 0, 0)
        out[ident.value] = entry
    return out
