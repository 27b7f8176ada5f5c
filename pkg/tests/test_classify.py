import pytest

from permtri.classify import (
    CASE_TAGS,
    BudgetError,
    Verdict,
    classify,
    exhaustive_verify,
    oracle_row,
    sample_verify,
    theorem_a,
    theorem_b,
)
from permtri.field import FieldError, context_for_q
from permtri.trinomial import Trinomial, is_permutation


def roots_of(ctx, coeffs):
    """Roots in F_{q^2} of x^2 + c1 x + c0 for coeffs = (c1, c0)."""
    c1, c0 = coeffs
    return [x for x in range(ctx.q2) if ctx.add(ctx.add(ctx.mul(x, x), ctx.mul(c1, x)), c0) == 0]


def test_theorem_a_examples():
    assert theorem_a(context_for_q(7), 0, 0) == Verdict(True, "A.i")
    ctx = context_for_q(5)
    assert theorem_a(ctx, 1, 0) == Verdict(True, "A.ii")
    assert is_permutation(Trinomial(ctx, 1, 0))
    # a = b^(1-q) but 1 - 4a/b^2 = 0
    assert ctx.pow(2, 1 - 5) == 1
    assert theorem_a(ctx, 1, 2) == Verdict(False)


def test_theorem_a_case_iv_example():
    ctx = context_for_q(7)
    m2 = ctx.from_int(-2)
    for b in roots_of(ctx, (m2, m2)):     # b^2 - 2b - 2 = 0
        a = ctx.mul(b, b)
        assert theorem_a(ctx, a, b) == Verdict(True, "A.iv")
        assert is_permutation(Trinomial(ctx, a, b))


def test_theorem_b_examples():
    assert theorem_b(context_for_q(4), 0, 0) == Verdict(True, "B.i")
    assert theorem_b(context_for_q(2), 0, 0) == Verdict(False)
    assert theorem_b(context_for_q(4), 1, 1) == Verdict(True, "B.ii")


def test_parity_errors():
    with pytest.raises(FieldError):
        theorem_a(context_for_q(4), 1, 1)
    with pytest.raises(FieldError):
        theorem_b(context_for_q(5), 1, 1)


def test_a_zero_b_nonzero_is_never_pp():
    for q in (3, 4, 5, 8):
        ctx = context_for_q(q)
        assert not any(classify(ctx, 0, b).is_pp for b in range(1, ctx.q2))


@pytest.mark.parametrize("q", [2, 3, 4])
def test_exhaustive_examples(q):
    r = exhaustive_verify(context_for_q(q))
    assert r.total_pairs == q**4
    assert r.mismatches == []
    if q == 2:
        assert r.pp_count == 0


@pytest.mark.parametrize("q", [5, 7, 8, 9])
def test_exhaustive_zero_mismatches(q):
    r = exhaustive_verify(context_for_q(q))
    assert r.ok and r.mismatches == []
    assert r.pp_count == sum(r.pp_cases.values())
    if q % 2:
        assert r.reading_differences == []


@pytest.mark.parametrize("q", [3, 4, 5, 7])
def test_oracle_row_matches_scalar_oracle(q):
    ctx = context_for_q(q)
    for a in range(0, ctx.q2, max(1, ctx.q2 // 7)):
        row = oracle_row(ctx, a)
        assert row.tolist() == [is_permutation(Trinomial(ctx, a, b)) for b in range(ctx.q2)]


@pytest.mark.parametrize("q", [3, 4, 5, 7, 8])
def test_case_tag_soundness(q):
    ctx = context_for_q(q)
    for a in range(ctx.q2):
        for b in range(ctx.q2):
            v = classify(ctx, a, b)
            assert v.is_pp == (v.case_tag is not None)
            assert v.case_tag is None or v.case_tag in CASE_TAGS
            if v.case_tag in ("A.iii", "B.ii"):
                assert a == ctx.pow(b, 1 - q)
            if v.case_tag in ("A.iv", "B.iii"):
                assert a and b and a != ctx.pow(b, 1 - q)
                assert ctx.is_in_subfield(ctx.div(a, ctx.mul(b, b)))


@pytest.mark.parametrize("q", [3, 4, 5, 7, 8])
def test_frobenius_equivariance(q):
    ctx = context_for_q(q)
    fr = ctx.frobenius
    for a in range(ctx.q2):
        for b in range(ctx.q2):
            assert classify(ctx, a, b).is_pp == classify(ctx, fr(a), fr(b)).is_pp


def test_membership_readings_agree():
    for q in (3, 5, 7, 9, 11):
        ctx = context_for_q(q)
        for a in range(ctx.q2):
            for b in range(ctx.q2):
                assert theorem_a(ctx, a, b) == theorem_a(ctx, a, b, require_membership=False)


def test_worker_count_does_not_change_report():
    ctx = context_for_q(7)
    one = exhaustive_verify(ctx, workers=1)
    many = exhaustive_verify(ctx, workers=3)
    assert one.to_dict() == many.to_dict()
    assert one.pp_pairs == many.pp_pairs


def test_report_timing_is_opt_in():
    r = exhaustive_verify(context_for_q(3))
    assert r.to_dict()["elapsed_ms"] is None
    assert r.to_dict(timing=True)["elapsed_ms"] >= 0


def test_budget_refusal():
    with pytest.raises(BudgetError, match="sampling"):
        exhaustive_verify(context_for_q(49))


def test_sample_verify():
    r = sample_verify(context_for_q(49), samples=40, seed=1)
    assert r.mode == "sample" and r.total_pairs == 40
    assert r.mismatches == []
    again = sample_verify(context_for_q(49), samples=40, seed=1)
    assert again.to_dict() == r.to_dict()
