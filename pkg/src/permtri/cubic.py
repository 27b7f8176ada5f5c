"""The cubic g(x) whose F_q-roots parametrise preimages of f outside F_q.

For b not in F_q write b^2 = c + d*b, e = a/b^2 and w = u + v*b with
c, d, e, u, v in F_q.  A preimage z = x + y*b (y != 0) of w gives a root
x/y of the cubic g built here, so f is injective once g has at most one
root in F_q.  The discriminant of g factors through a quadratic form
Theta(u, v) when c = 3/e - 1/e^2.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .classify import classify
from .field import FieldCtx, FieldError
from .parallel import ordered_map
from .trinomial import Trinomial, all_values

VARS = "cdeuv"

# g = G3 x^3 + G2 x^2 + G1 x + G0
G3 = "-u - d*e*u + v + c*e*v"
G2 = "3*u - d*u - c*e*u - 2*d^2*e*u - c*v + 3*d*v + 2*c*d*e*v"
G1 = "c*u + 3*d*u - d^3*e*u + 3*c*v - c*d*v + 3*d^2*v - c^2*e*v + c*d^2*e*v"
G0 = "c*u + d^2*u + c^2*e*u + c*d^2*e*u + c^2*v + 2*c*d*v + d^3*v - c^2*d*e*v"

# Theta as printed, with the stray v in the uv coefficient removed.
THETA_PRINTED = (
    "-2*e^2*u^2 + 9*e^3*u^2 - 3*d*e^3*u^2 + 9*d*e^4*u^2 + d^3*e^5*u^2"
    " - 4*e*u*v + 24*e^2*u*v - 2*d*e^2*u*v - 36*e^3*u*v + 9*d*e^3*u*v"
    " + 2*d^2*e^3*u*v - 6*d^2*e^4*u*v"
    " - 2*v^2 + 15*e*v^2 + d*e*v^2 - 27*e^2*v^2 - 6*d*e^2*v^2 + 9*d*e^3*v^2"
)

# a1^2 - 4 a2 a0 of g' is (1 + de)/e^4 times this multiple of the printed form.
THETA_SCALE = 4


@lru_cache(maxsize=None)
def parse_poly(text: str) -> tuple:
    """Parse "3*c*d^2 - e" into ((coeff, (exp_c, exp_d, exp_e, exp_u, exp_v)), ...)."""
    terms = []
    for sign, body in re.findall(r"([+-]?)\s*([^+-]+)", text.replace(" ", "")):
        coeff = -1 if sign == "-" else 1
        exps = [0] * len(VARS)
        for factor in body.split("*"):
            if factor.isdigit():
                coeff *= int(factor)
                continue
            name, _, power = factor.partition("^")
            exps[VARS.index(name)] += int(power or 1)
        terms.append((coeff, tuple(exps)))
    return tuple(terms)


def eval_poly(ctx: FieldCtx, text: str, values) -> np.ndarray:
    """Evaluate an integer polynomial in (c, d, e, u, v); values may be arrays."""
    terms = parse_poly(text)
    vals = [np.asarray(x, dtype=np.int64) for x in values]
    top = max(max(t[1]) for t in terms)
    powers = [[ctx.vpow(x, k) for k in range(top + 1)] for x in vals]
    acc = np.zeros(np.broadcast(*vals).shape, dtype=np.int64)
    for coeff, exps in terms:
        k = ctx.from_int(coeff)
        if k == 0:
            continue
        term = np.asarray(k, dtype=np.int64)
        for var, e in enumerate(exps):
            if e:
                term = ctx.vmul(term, powers[var][e])
        acc = ctx.vadd(acc, term)
    return acc


@dataclass(frozen=True)
class CubicParams:
    ctx: FieldCtx
    c: int
    d: int
    e: int
    u: int
    v: int

    @property
    def values(self):
        return (self.c, self.d, self.e, self.u, self.v)

    @property
    def epsilon(self) -> int:
        return int(eval_poly(self.ctx, G3, self.values))


@dataclass(frozen=True)
class Cubic:
    ctx: FieldCtx
    g3: int
    g2: int
    g1: int
    g0: int

    @property
    def coeffs(self):
        return (self.g3, self.g2, self.g1, self.g0)

    def __call__(self, x: int) -> int:
        ctx = self.ctx
        acc = 0
        for g in self.coeffs:
            acc = ctx.add(ctx.mul(acc, x), g)
        return acc


def coords_from_instance(ctx: FieldCtx, a: int, b: int, w: int) -> CubicParams:
    """Coordinates of (a, b, w) in the basis {1, b} of F_{q^2} over F_q."""
    if ctx.is_in_subfield(b):
        raise FieldError(f"b={b} lies in F_{ctx.q}; {{1, b}} is not a basis")
    e = ctx.div(a, ctx.mul(b, b))
    if not ctx.is_in_subfield(e):
        raise FieldError(f"a/b^2 = {e} is not in F_{ctx.q}")
    bq = ctx.frobenius(b)
    d = ctx.add(b, bq)                        # b^2 = c + d b
    c = ctx.neg(ctx.mul(b, bq))
    v = ctx.div(ctx.sub(w, ctx.frobenius(w)), ctx.sub(b, bq))
    u = ctx.sub(w, ctx.mul(v, b))
    return CubicParams(ctx, c, d, e, u, v)


def g_coeffs(ctx: FieldCtx, values):
    """(g3, g2, g1, g0) for (c, d, e, u, v); arrays broadcast."""
    return tuple(eval_poly(ctx, t, values) for t in (G3, G2, G1, G0))


def build_g(params: CubicParams) -> Cubic:
    coeffs = [int(x) for x in g_coeffs(params.ctx, params.values)]
    if coeffs[0] == 0:
        raise FieldError("leading coefficient vanishes: w lies in (a+b+1)F_q")
    return Cubic(params.ctx, *coeffs)


def vdisc(ctx: FieldCtx, g3, g2, g1, g0):
    """18 g3g2g1g0 - 4 g2^3 g0 + g2^2 g1^2 - 4 g3 g1^3 - 27 g3^2 g0^2, elementwise."""
    k = ctx.from_int
    m = ctx.vmul
    t1 = m(k(18), m(m(g3, g2), m(g1, g0)))
    t2 = m(k(-4), m(ctx.vpow(g2, 3), g0))
    t3 = m(ctx.vpow(g2, 2), ctx.vpow(g1, 2))
    t4 = m(k(-4), m(g3, ctx.vpow(g1, 3)))
    t5 = m(k(-27), m(ctx.vpow(g3, 2), ctx.vpow(g0, 2)))
    return ctx.vadd(ctx.vadd(ctx.vadd(t1, t2), ctx.vadd(t3, t4)), t5)


def disc_cubic(g: Cubic) -> int:
    """Discriminant of a cubic with the universal integer formula (any characteristic)."""
    if g.g3 == 0:
        raise FieldError("disc_cubic needs a cubic of degree exactly 3")
    return int(vdisc(g.ctx, *g.coeffs))


def count_roots_fq(ctx: FieldCtx, g: Cubic) -> int:
    """Distinct roots of g in F_q (q for the zero polynomial)."""
    x = np.array(ctx.subfield_elements(), dtype=np.int64)
    acc = np.zeros_like(x)
    for coeff in g.coeffs:
        acc = ctx.vadd(ctx.vmul(acc, x), coeff)
    return int(np.count_nonzero(acc == 0))


# -- Theta and the two discriminant identities ------------------------------

def theta_side_c(ctx: FieldCtx, e: int) -> int:
    """c = 3/e - 1/e^2."""
    ie = ctx.inv(e)
    return ctx.sub(ctx.mul(ctx.from_int(3), ie), ctx.mul(ie, ie))


def _require_theta_side(params: CubicParams):
    ctx = params.ctx
    if ctx.p == 2:
        raise FieldError("the Theta factorisation is stated for odd q")
    if params.e == 0:
        raise FieldError("e must be nonzero")
    if params.c != theta_side_c(ctx, params.e):
        raise FieldError("c must equal 3/e - 1/e^2")


def theta(params: CubicParams, printed: bool = False) -> int:
    """Theta(u, v), normalised so that a1^2 - 4 a2 a0 = (1 + de) Theta / e^4.

    ``printed=True`` gives the published normalisation, a quarter of this one.
    """
    _require_theta_side(params)
    t = int(eval_poly(params.ctx, THETA_PRINTED, params.values))
    return t if printed else params.ctx.mul(params.ctx.from_int(THETA_SCALE), t)


def _identity_arrays(ctx, c, d, e, u, v):
    """Both sides of the two identities, for both Theta normalisations."""
    vals = (c, d, e, u, v)
    g3, g2, g1, g0 = g_coeffs(ctx, vals)
    k, m = ctx.from_int, ctx.vmul
    theta_p = eval_poly(ctx, THETA_PRINTED, vals)
    inv_e = ctx.vinv(e)
    inv_e4 = ctx.vpow(inv_e, 4)
    # discriminant of the monic g / g3
    inv_eps4 = ctx.vinv(ctx.vpow(g3, 4))
    disc_monic = m(vdisc(ctx, g3, g2, g1, g0), inv_eps4)
    pre319 = m(ctx.vadd(m(k(4), c), m(d, d)), ctx.vadd(1, m(k(-4), e)))
    pre319 = m(pre319, m(m(inv_e4, inv_e4), inv_eps4))
    # g' = a2 x^2 + a1 x + a0
    a2, a1, a0 = m(k(3), g3), m(k(2), g2), g1
    lhs320 = ctx.vadd(m(a1, a1), m(k(-4), m(a2, a0)))
    pre320 = m(ctx.vadd(1, m(d, e)), inv_e4)
    out = {"disc_monic": disc_monic, "a1^2-4a2a0": lhs320}
    for label, th in (("", m(k(THETA_SCALE), theta_p)), ("_printed_theta", theta_p)):
        out["eq319" + label] = disc_monic == m(pre319, m(th, th))
        out["eq320" + label] = lhs320 == m(pre320, th)
    return out


def check_disc_identities(params: CubicParams) -> dict:
    """Evaluate the discriminant factorisation and the derivative identity at one point.

    The discriminant side is read for the monic cubic g/eps, i.e. the
    universal discriminant divided by eps^4, against
    (4c + d^2)(1 - 4e) Theta^2 / (eps^4 e^8).
    """
    _require_theta_side(params)
    ctx = params.ctx
    eps = params.epsilon
    if eps == 0:
        raise FieldError("epsilon must be nonzero")
    r = _identity_arrays(ctx, *params.values)
    th = theta(params)
    four = ctx.from_int(4)
    pre = ctx.mul(ctx.add(ctx.mul(four, params.c), ctx.mul(params.d, params.d)),
                  ctx.sub(1, ctx.mul(four, params.e)))
    pre = ctx.div(ctx.mul(pre, ctx.pow(params.e, -8)), ctx.pow(eps, 4))
    return {
        "eq319_holds": bool(r["eq319"]),
        "eq320_holds": bool(r["eq320"]),
        "eq319_holds_printed_theta": bool(r["eq319_printed_theta"]),
        "eq320_holds_printed_theta": bool(r["eq320_printed_theta"]),
        "theta": th,
        "eq319_lhs": int(r["disc_monic"]),
        "eq319_rhs": ctx.mul(pre, ctx.mul(th, th)),
        "eq320_lhs": int(r["a1^2-4a2a0"]),
        "eq320_rhs": ctx.mul(ctx.mul(ctx.add(1, ctx.mul(params.d, params.e)), ctx.pow(params.e, -4)), th),
    }


def _sweep_plane(p: int, n: int, d: int):
    """Identity failures over every (e, u, v) for one value of d."""
    from .field import build_context
    ctx = build_context(p, n)
    fq = np.array(ctx.subfield_elements(), dtype=np.int64)
    u, v = np.meshgrid(fq, fq, indexing="ij")
    u, v = u.ravel(), v.ravel()
    counts = {"tuples": 0, "eq319": 0, "eq320": 0, "eq319_printed_theta": 0, "eq320_printed_theta": 0}
    examples = []
    for e in fq[1:].tolist():
        c = theta_side_c(ctx, e)
        eps = eval_poly(ctx, G3, (c, d, e, u, v))
        keep = eps != 0
        uu, vv = u[keep], v[keep]
        r = _identity_arrays(ctx, c, d, e, uu, vv)
        counts["tuples"] += int(keep.sum())
        for key in ("eq319", "eq320", "eq319_printed_theta", "eq320_printed_theta"):
            bad = ~r[key]
            counts[key] += int(bad.sum())
            if key in ("eq319", "eq320") and bad.any() and len(examples) < 3:
                i = int(np.flatnonzero(bad)[0])
                examples.append({"identity": key, "c": c, "d": d, "e": e,
                                 "u": int(uu[i]), "v": int(vv[i])})
    return counts, examples


def sweep_disc_identities(ctx: FieldCtx, workers: int = 1) -> dict:
    """Check both identities at every (d, e, u, v) in F_q^4 with e != 0, eps != 0.

    Failures are counted for the derived Theta and for the printed one.
    """
    if ctx.p == 2:
        raise FieldError("the discriminant identities are checked for odd q only")
    tasks = [(ctx.p, ctx.n, d) for d in ctx.subfield_elements()]
    totals = {"tuples": 0, "eq319": 0, "eq320": 0, "eq319_printed_theta": 0, "eq320_printed_theta": 0}
    examples = []
    for counts, ex in ordered_map(_sweep_plane, tasks, workers):
        for key in totals:
            totals[key] += counts[key]
        examples.extend(ex)
    return {
        "tuples": totals["tuples"],
        "failures": {k: totals[k] for k in ("eq319", "eq320")},
        "failures_printed_theta": {
            "eq319": totals["eq319_printed_theta"],
            "eq320": totals["eq320_printed_theta"],
        },
        "counterexamples": examples[:5],
    }


# -- root uniqueness ----------------------------------------------------------

def uniqueness_property(ctx: FieldCtx, a: int, b: int) -> dict:
    """Check, for every w, that f(z) = w has at most one solution by the cubic argument.

    w in (a+b+1)F_q must have the single preimage w/(a+b+1); any other w must
    give eps != 0 and a cubic with at most one root in F_q.
    """
    tag = classify(ctx, a, b).case_tag
    if tag not in ("A.iv", "B.iii"):
        raise FieldError(f"(a, b) = ({a}, {b}) is not a nondegenerate-case PP pair (got {tag})")
    if ctx.is_in_subfield(b):
        raise FieldError("b must lie outside F_q")
    s = ctx.add(ctx.add(a, b), 1)
    vals = all_values(Trinomial(ctx, a, b))
    bad = []
    for w in range(ctx.q2):
        t = ctx.div(w, s)
        if ctx.is_in_subfield(t):
            pre = np.flatnonzero(vals == w).tolist()
            if pre != [t]:
                bad.append({"w": w, "reason": "preimage", "preimages": pre})
            continue
        params = coords_from_instance(ctx, a, b, w)
        if params.epsilon == 0:
            bad.append({"w": w, "reason": "epsilon"})
            continue
        roots = count_roots_fq(ctx, build_g(params))
        if roots > 1:
            bad.append({"w": w, "reason": "roots", "roots": roots})
    return {"ok": not bad, "checked": ctx.q2, "counterexamples": bad}


def nondegenerate_instances(ctx: FieldCtx) -> list[tuple[int, int]]:
    """All (a, b) with b outside F_q built from (e, d) as in the sufficiency argument.

    e ranges over F_q^* with x^2 + x + e split with distinct roots, c is
    3/e - 1/e^2 (odd q) or 1/e + 1/e^2 (even q), d makes x^2 - dx - c
    irreducible, b is either root and a = e b^2.  Pairs that land in the
    a = b^(1-q) case are dropped.
    """
    fq = ctx.subfield_elements()
    x = np.arange(ctx.q2, dtype=np.int64)
    x2 = ctx.vmul(x, x)
    out = []
    for e in fq[1:]:
        if ctx.p == 2:
            if ctx.abs_trace(e) != 0:
                continue
            ie = ctx.inv(e)
            c = ctx.add(ie, ctx.mul(ie, ie))
        else:
            if not ctx.is_nonzero_square_fq(ctx.sub(1, ctx.mul(ctx.from_int(4), e))):
                continue
            c = theta_side_c(ctx, e)
        for d in fq:
            quad = ctx.vadd(ctx.vadd(x2, ctx.vneg(ctx.vmul(d, x))), ctx.neg(c))
            roots = np.flatnonzero(quad == 0).tolist()
            if any(ctx.is_in_subfield(r) for r in roots):
                continue
            for b in roots:
                a = ctx.mul(e, ctx.mul(b, b))
                if classify(ctx, a, b).case_tag in ("A.iv", "B.iii"):
                    out.append((a, b))
    return sorted(out)
