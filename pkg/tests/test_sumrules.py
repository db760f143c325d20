import pytest
from mpmath import mp, mpf

from besselmoments import (
    MomentSpec,
    SumRuleSpec,
    SumRuleSpecError,
    alpha_beta_exact,
    alpha_beta_numeric,
    binomial_alternating_sum,
    crandall,
    crandall_numeric,
    ladder,
    ladder_product_check,
    sum_rule_terms,
    verify_sum_rule,
)


def test_ladder_expansions():
    z1 = ladder("zeta", 1)
    assert [(t.coeff, t.iota_pow, t.kappa_pow) for t in z1.terms] == [(1, 1, 1)]
    e1 = ladder("eta", 1)
    assert [(t.coeff, t.iota_pow, t.kappa_pow) for t in e1.terms] == [(-1, 0, 2)]
    e3 = ladder("eta", 3)
    assert [(t.coeff, t.iota_pow, t.kappa_pow) for t in e3.terms] == [
        (-3, 2, 4),
        (1, 0, 6),
    ]
    z2 = ladder("zeta", 2)
    assert [(t.coeff, t.iota_pow, t.kappa_pow) for t in z2.terms] == [
        (1, 2, 2),
        (-1, 0, 4),
    ]
    for poly in (z1, e1, e3, z2):
        for t in poly.terms:
            assert t.iota_pow + t.kappa_pow == 2 * poly.ell


def test_ladder_validation():
    with pytest.raises(ValueError):
        ladder("zeta", 0)
    with pytest.raises(ValueError):
        ladder("theta", 1)


def test_ladder_product_recursions():
    assert ladder_product_check(1, 1)
    assert ladder_product_check(2, 3)
    for ell in range(1, 12):
        for m in range(1, 13 - ell):
            assert ladder_product_check(ell, m)


def test_sum_rule_terms_examples():
    z21 = sum_rule_terms(SumRuleSpec("Z", 2, 1))
    assert z21 == [
        (1, MomentSpec(2, 2, 0, 2)),
        (-1, MomentSpec(0, 4, 0, 0)),
    ]
    z31 = sum_rule_terms(SumRuleSpec("Z", 3, 1))
    assert z31 == [
        (1, MomentSpec(3, 3, 1, 3)),
        (-3, MomentSpec(1, 5, 1, 1)),
    ]
    y41 = sum_rule_terms(SumRuleSpec("Y", 4, 1))
    assert y41 == [
        (-4, MomentSpec(3, 5, 1, 3)),
        (4, MomentSpec(1, 7, 1, 1)),
    ]


def test_spec_validation():
    with pytest.raises(SumRuleSpecError):
        SumRuleSpec("Z", 1, 1)
    with pytest.raises(SumRuleSpecError):
        SumRuleSpec("Z", 4, 0)
    with pytest.raises(SumRuleSpecError):
        SumRuleSpec("Y", 2, 1)  # trivial odd-parity case is rejected
    with pytest.raises(SumRuleSpecError):
        SumRuleSpec("X", 4, 1)
    assert SumRuleSpec("Z", 2, 1).weight == 4
    assert SumRuleSpec("Y", 3, 1).label() == "Y_{6,1}"


def test_binomial_alternating_sum_identity():
    """sum_m (-1)^m C(n,2m) equals Re(1+i)^n = 2^(n/2) cos(n pi/4)."""
    for n in range(1, 21):
        coeff_sum = sum(c for c, _ in sum_rule_terms(SumRuleSpec("Z", n, 1))) if n >= 2 else 1
        assert binomial_alternating_sum(n) == sum(
            (-1) ** m * __import__("math").comb(n, 2 * m) for m in range(n // 2 + 1)
        )
        if n >= 2:
            assert coeff_sum == binomial_alternating_sum(n)
    with mp.workdps(30):
        for n in range(1, 21):
            closed = 2 ** (mpf(n) / 2) * mp.cos(n * mp.pi / 4)
            assert abs(binomial_alternating_sum(n) - closed) < mpf(10) ** -20


def test_verify_sum_rule_fast(ctx30):
    rep = verify_sum_rule(SumRuleSpec("Z", 2, 1), ctx30)
    assert rep.passed
    assert abs(rep.value.value) <= rep.value.err
    assert len(rep.terms) == 2
    fused = verify_sum_rule(SumRuleSpec("Z", 2, 1), ctx30, fused=True)
    assert fused.passed


def test_crandall_numeric_fast(ctx30):
    v = crandall_numeric(2, ctx30)
    assert abs(v.value - crandall(2)) <= v.err


def test_alpha_beta_numeric_matches_exact(ctx30):
    """Quadrature reproduces the exact alpha/beta families for M <= 4, n <= 3."""
    for M in range(1, 5):
        for n in range(1, 4):
            v = alpha_beta_numeric(M, n, ctx30)
            ex = alpha_beta_exact(M, n)
            with ctx30.workdps():
                exv = mpf(ex.numerator) / ex.denominator
            assert abs(v.value - exv) <= v.err
