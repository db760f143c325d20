from fractions import Fraction

import pytest
from mpmath import mp, mpf

from besselmoments import (
    alpha,
    alpha_m,
    beta_m,
    broadhurst_roberts,
    crandall,
    crandall_explicit,
    domb,
    hyp_3f2,
    ikkk_moment_rational,
    k0sq_moment_rational,
    rogers_check,
)
from besselmoments.sequences import _domb_series


def test_domb_values():
    # direct summation is the definition; first values by hand
    assert [domb(n) for n in range(6)] == [1, 4, 28, 256, 2716, 31504]
    with pytest.raises(ValueError):
        domb(-1)


def test_alpha_values_and_integrality():
    assert [alpha(l) for l in range(1, 6)] == [1, 1, 7, 144, 6111]
    # the 4-power divisibility is the nontrivial content; push it far
    for l in range(1, 201):
        assert isinstance(alpha(l), int)


def test_alpha_m_low_orders():
    for n in range(1, 11):
        assert alpha_m(1, n) == alpha(n)
    assert alpha_m(2, 1) == 1          # alpha_1^2
    assert alpha_m(2, 2) == 2          # 2 alpha_1 alpha_2
    assert alpha_m(2, 3) == 2 * alpha(3) + alpha(2) ** 2


def test_alpha_m_convolution_consistency():
    """alpha^(m1+m2) coefficients are the convolution of the two powers."""
    for m1, m2, n in [(1, 1, 6), (1, 2, 5), (2, 2, 6), (1, 3, 7)]:
        direct = alpha_m(m1 + m2, n)
        conv = sum(
            alpha_m(m1, i + 1) * alpha_m(m2, n - i) for i in range(n)
        )
        assert direct == conv


def test_crandall_values_and_cross_oracle():
    assert [crandall(n) for n in range(1, 6)] == [0, 1, 2, 15, 302]
    assert crandall_explicit(1) == 1
    assert crandall_explicit(2) == 2
    for n in range(1, 21):
        ce = crandall_explicit(n)
        assert ce.denominator == 1, "explicit formula must be an integer"
        assert ce == crandall(n + 1)


def test_k0sq_moment_rationals():
    assert k0sq_moment_rational(0) == Fraction(1, 4)
    assert k0sq_moment_rational(1) == Fraction(1, 32)
    assert k0sq_moment_rational(2) == Fraction(27, 512)


def test_ikkk_moment_rationals():
    assert ikkk_moment_rational(1) == Fraction(1, 16)
    assert ikkk_moment_rational(2) == Fraction(1, 64)
    # exact link to the alpha family
    for l in range(1, 13):
        assert 4 ** (l + 1) * ikkk_moment_rational(l) == alpha(l)


def test_domb_series_matches_alpha():
    series = _domb_series(30)
    for l, coeff in enumerate(series):
        assert coeff == alpha(l + 1)


def test_beta_values_and_denominators():
    assert beta_m(1, 1) == 1
    assert beta_m(1, 2) == Fraction(1, 2)
    for m in range(1, 11):
        for n in range(1, 11):
            b = beta_m(m, n)
            assert b > 0
            assert (2 ** (2 * (n - 1))) % b.denominator == 0


def test_broadhurst_roberts_reduction():
    # even orders collapse onto the alpha convolution family
    for n in range(1, 9):
        assert broadhurst_roberts(2, n) == alpha_m(1, n) == alpha(n)
        assert broadhurst_roberts(4, n) == alpha_m(2, n)
    # crandall numbers appear at M = 4
    assert broadhurst_roberts(4, 1) == crandall(2)
    # positivity and integrality across the advertised window
    for M in range(1, 7):
        for n in range(1, 9):
            v = broadhurst_roberts(M, n)
            assert isinstance(v, int) and v > 0


def test_hyp_3f2_basics(ctx50):
    v = hyp_3f2(0, ctx50)
    assert v.value == 1
    v = hyp_3f2(Fraction(1, 2), ctx50)
    assert v.err < mpf(10) ** -40
    with mp.workdps(70):
        ref = mp.hyper([mpf(1) / 3, mpf(1) / 2, mpf(2) / 3], [1, 1], mpf(1) / 2)
        assert abs(v.value - ref) < mpf(10) ** -55
    with pytest.raises(ValueError):
        hyp_3f2(1, ctx50)


def test_hyp_3f2_non_convergence(ctx50):
    from besselmoments import PrecisionError

    with pytest.raises(PrecisionError):
        hyp_3f2(Fraction(99, 100), ctx50, max_terms=50)


def test_hyp_3f2_term_ratio_limit(ctx50):
    """Successive Pochhammer ratios approach x from below."""
    with ctx50.workdps():
        x = mpf(1) / 3
        ratios = []
        for n in (10, 100, 1000):
            r = ((3 * n + 1) * (3 * n + 2) * (2 * n + 1)) / (18 * (n + 1) ** 3)
            ratios.append(x * r)
        assert all(r < x for r in ratios)
        assert abs(ratios[-1] / x - 1) < 0.01


@pytest.mark.parametrize("u,terms", [(Fraction(1, 16), 120), (Fraction(1, 10), 150), (Fraction(-1, 10), 150)])
def test_rogers_identity(ctx50, u, terms):
    diff = rogers_check(u, terms, ctx50)
    assert diff.value < mpf(10) ** -30
    assert diff.value <= diff.err


def test_rogers_trivial_point(ctx50):
    """u = 0: both sides are exactly 1."""
    diff = rogers_check(Fraction(0), 50, ctx50)
    assert diff.value == 0


def test_rogers_validation(ctx50):
    with pytest.raises(ValueError):
        rogers_check(Fraction(1, 16), 5, ctx50)
    with pytest.raises(ValueError):
        rogers_check(Fraction(1, 3), 100, ctx50)
