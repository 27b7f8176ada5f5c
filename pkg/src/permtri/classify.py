"""Closed-form PP predicates for f = ax + bx^q + x^(2q-1) and the exhaustive cross-check.

``theorem_a`` (odd q) and ``theorem_b`` (even q) decide the permutation
property from (a, b) alone.  ``exhaustive_verify`` compares them with the
brute-force oracle over every pair in F_{q^2} x F_{q^2}.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from .field import FieldCtx, FieldError, build_context
from .parallel import ordered_map
from .trinomial import Trinomial, is_permutation

log = logging.getLogger(__name__)

CASE_TAGS = ("A.i", "A.ii", "A.iii", "A.iv", "B.i", "B.ii", "B.iii")

# q^6 work for the exhaustive sweep; q = 32 is the largest default target.
MAX_VERIFY_Q = 32


class BudgetError(FieldError):
    """Requested sweep exceeds the runtime budget."""


@dataclass(frozen=True)
class Verdict:
    is_pp: bool
    case_tag: str | None = None

    def to_dict(self):
        return {"is_pp": self.is_pp, "case": self.case_tag}


NOT_PP = Verdict(False)


def theorem_a(ctx: FieldCtx, a: int, b: int, require_membership: bool = True) -> Verdict:
    """PP verdict for odd q.

    ``require_membership`` adds a/b^2 in F_q to case (iv) explicitly; with it
    off, "1 - 4a/b^2 is a square of F_q^*" is tested only as a nonzero
    element whose ((q-1)/2)-th power is 1.
    """
    if ctx.p == 2:
        raise FieldError("theorem_a needs odd q")
    q = ctx.q
    if a == 0 and b == 0:
        return Verdict(True, "A.i") if q % 6 in (1, 3) else NOT_PP
    if b == 0:
        t = ctx.pow(ctx.neg(a), (q + 1) // 2)
        if t == ctx.minus_one or t == ctx.from_int(3):
            return Verdict(True, "A.ii")
        return NOT_PP
    if a == 0:
        return NOT_PP
    e = ctx.div(a, ctx.mul(b, b))
    one_minus_4e = ctx.sub(1, ctx.mul(ctx.from_int(4), e))
    if require_membership:
        square = ctx.is_nonzero_square_fq(one_minus_4e)
    else:
        square = one_minus_4e != 0 and ctx.pow(one_minus_4e, (q - 1) // 2) == 1
    if a == ctx.pow(b, 1 - q):
        return Verdict(True, "A.iii") if square else NOT_PP
    if not square:
        return NOT_PP
    # b^2 - a^2 b^(q-1) - 3a
    rel = ctx.sub(ctx.mul(b, b), ctx.mul(ctx.mul(a, a), ctx.pow(b, q - 1)))
    rel = ctx.sub(rel, ctx.mul(ctx.from_int(3), a))
    return Verdict(True, "A.iv") if rel == 0 else NOT_PP


def theorem_b(ctx: FieldCtx, a: int, b: int) -> Verdict:
    """PP verdict for even q."""
    if ctx.p != 2:
        raise FieldError("theorem_b needs even q")
    q = ctx.q
    if a == 0 and b == 0:
        return Verdict(True, "B.i") if ctx.n % 2 == 0 else NOT_PP
    if a == 0 or b == 0:
        return NOT_PP
    if a == ctx.pow(b, 1 - q):
        return Verdict(True, "B.ii") if ctx.abs_trace(ctx.pow(b, -1 - q)) == 0 else NOT_PP
    e = ctx.div(a, ctx.mul(b, b))
    if not ctx.is_in_subfield(e) or ctx.abs_trace(e) != 0:
        return NOT_PP
    # b^2 + a^2 b^(q-1) + a
    rel = ctx.add(ctx.add(ctx.mul(b, b), ctx.mul(ctx.mul(a, a), ctx.pow(b, q - 1))), a)
    return Verdict(True, "B.iii") if rel == 0 else NOT_PP


def classify(ctx: FieldCtx, a: int, b: int) -> Verdict:
    return theorem_b(ctx, a, b) if ctx.p == 2 else theorem_a(ctx, a, b)


# -- brute force over whole rows ------------------------------------------

def oracle_row(ctx: FieldCtx, a: int) -> np.ndarray:
    """is_permutation(a, b) for every b, as a boolean array indexed by b's encoding."""
    x = np.arange(ctx.q2, dtype=np.int64)
    base = ctx.vadd(ctx.vmul(a, x), ctx.vpow(x, 2 * ctx.q - 1))
    xq = ctx.vpow(x, ctx.q)
    vals = ctx.vadd(ctx.vmul(x[:, None], xq[None, :]), base[None, :])
    vals.sort(axis=1)
    return ~(np.diff(vals, axis=1) == 0).any(axis=1)


def _verify_rows(p: int, n: int, rows: list[int]):
    ctx = build_context(p, n)
    out = []
    for a in rows:
        oracle = oracle_row(ctx, a)
        pp, mismatches, reading_diffs = [], [], []
        for b in range(ctx.q2):
            v = classify(ctx, a, b)
            truth = bool(oracle[b])
            if v.is_pp != truth:
                mismatches.append({"a": a, "b": b, "predicate": v.to_dict(), "oracle_is_pp": truth})
            if v.is_pp:
                pp.append((a, b, v.case_tag))
            if ctx.p != 2:
                alt = theorem_a(ctx, a, b, require_membership=False)
                if alt != v:
                    reading_diffs.append({"a": a, "b": b})
        out.append((pp, mismatches, reading_diffs))
    return out


@dataclass
class Report:
    p: int
    n: int
    modulus: list[int]
    mode: str = "exhaustive"
    total_pairs: int = 0
    pp_count: int = 0
    pp_cases: dict = field(default_factory=dict)
    mismatches: list = field(default_factory=list)
    reading_differences: list | None = None
    pp_pairs: list = field(default_factory=list)
    elapsed_ms: float | None = None

    @property
    def q(self):
        return self.p**self.n

    @property
    def ok(self):
        return not self.mismatches

    def to_dict(self, timing: bool = False):
        d = {
            "schema": 1,
            "command": "verify",
            "mode": self.mode,
            "q": self.q,
            "p": self.p,
            "n": self.n,
            "modulus": self.modulus,
            "total_pairs": self.total_pairs,
            "pp_count": self.pp_count,
            "pp_cases": self.pp_cases,
            "mismatches": self.mismatches,
        }
        if self.reading_differences is not None:
            d["membership_reading_differences"] = self.reading_differences
        d["elapsed_ms"] = round(self.elapsed_ms, 3) if timing and self.elapsed_ms is not None else None
        return d


def _histogram(ctx, pairs):
    tags = [t for t in CASE_TAGS if t[0] == ("B" if ctx.p == 2 else "A")]
    hist = dict.fromkeys(tags, 0)
    for _, _, tag in pairs:
        hist[tag] += 1
    return hist


def exhaustive_verify(ctx: FieldCtx, workers: int = 1, max_q: int = MAX_VERIFY_Q) -> Report:
    """Compare the closed-form predicate with brute force on all q^4 pairs."""
    if ctx.q > max_q:
        raise BudgetError(
            f"exhaustive verification of q={ctx.q} exceeds the budget (q <= {max_q}); "
            "use sampling mode (--samples N) instead"
        )
    start = time.perf_counter()
    rows = list(range(ctx.q2))
    block = max(1, len(rows) // (4 * max(workers, 1)))
    tasks = [(ctx.p, ctx.n, rows[i:i + block]) for i in range(0, len(rows), block)]
    results = [r for chunk in ordered_map(_verify_rows, tasks, workers) for r in chunk]

    report = Report(ctx.p, ctx.n, list(ctx.modulus), total_pairs=ctx.q2 * ctx.q2)
    if ctx.p != 2:
        report.reading_differences = []
    for pp, mismatches, diffs in results:
        report.pp_pairs.extend(pp)
        report.mismatches.extend(mismatches)
        if report.reading_differences is not None:
            report.reading_differences.extend(diffs)
    report.pp_count = len(report.pp_pairs)
    report.pp_cases = _histogram(ctx, report.pp_pairs)
    report.elapsed_ms = (time.perf_counter() - start) * 1000
    log.info("q=%d: %d pairs, %d PP, %d mismatches, %.0f ms", ctx.q, report.total_pairs,
             report.pp_count, len(report.mismatches), report.elapsed_ms)
    return report


def sample_verify(ctx: FieldCtx, samples: int, seed: int = 0) -> Report:
    """Predicate vs oracle on ``samples`` pseudo-random pairs (fixed seed)."""
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    pairs = rng.integers(0, ctx.q2, size=(samples, 2))
    report = Report(ctx.p, ctx.n, list(ctx.modulus), mode="sample", total_pairs=samples)
    for a, b in pairs.tolist():
        v = classify(ctx, a, b)
        truth = is_permutation(Trinomial(ctx, a, b))
        if v.is_pp != truth:
            report.mismatches.append({"a": a, "b": b, "predicate": v.to_dict(), "oracle_is_pp": truth})
        if truth:
            report.pp_pairs.append((a, b, v.case_tag))
    report.pp_count = len(report.pp_pairs)
    report.pp_cases = _histogram(ctx, [t for t in report.pp_pairs if t[2]])
    report.elapsed_ms = (time.perf_counter() - start) * 1000
    return report
