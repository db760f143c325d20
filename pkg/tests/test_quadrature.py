from fractions import Fraction

import pytest
from mpmath import mp, mpf

from besselmoments import (
    DivergentMomentError,
    MomentSpec,
    PrecisionContext,
    integrand,
    k0,
    moment,
    tanh_sinh,
    weighted_moment_sum,
)
from besselmoments.quadrature import _tail_cutoff


def test_momentspec_validation():
    MomentSpec(0, 2, 0).check_convergent()
    MomentSpec(2, 2, 0).check_convergent()  # a == b, c <= a-2: algebraic tail
    MomentSpec(5, 5, 3).check_convergent()
    with pytest.raises(DivergentMomentError):
        MomentSpec(3, 2, 0).check_convergent()
    with pytest.raises(DivergentMomentError):
        MomentSpec(2, 2, 1).check_convergent()
    with pytest.raises(DivergentMomentError):
        MomentSpec(1, 1, 0).check_convergent()
    with pytest.raises(DivergentMomentError):
        MomentSpec(-1, 2, 0)


def test_divergent_moment_rejected(ctx30):
    with pytest.raises(DivergentMomentError):
        moment(MomentSpec(3, 2, 0), ctx30)


def test_tanh_sinh_known_integrals(ctx50):
    with mp.workdps(70):
        v = tanh_sinh(lambda t: mp.exp(-t), 0, mp.inf, ctx50)
        assert abs(v.value - 1) <= v.err
        v = tanh_sinh(lambda t: mp.log(1 / t), 0, 1, ctx50)
        assert abs(v.value - 1) <= v.err
        v = tanh_sinh(lambda t: k0(t, ctx50).value ** 2, 0, mp.inf, ctx50)
        assert abs(v.value - mp.pi ** 2 / 4) <= v.err


def test_non_convergence_reports_best_value(ctx50):
    """Hitting the level cap raises, carrying the best value and error."""
    from besselmoments import QuadratureError

    with mp.workdps(70):
        with pytest.raises(QuadratureError) as info:
            tanh_sinh(lambda t: mp.exp(-t), 0, 1, ctx50, max_level=2)
        assert info.value.value is not None
        assert abs(info.value.value - (1 - mp.exp(-1))) < mpf("1e-3")


def test_refinement_monotonicity(ctx50):
    """Reported level-to-level differences shrink past level 4."""
    hist = []
    with mp.workdps(70):
        tanh_sinh(lambda t: mp.exp(-t) / (1 + t), 0, 5, ctx50, history=hist)
    diffs = [d for (level, s, d) in hist if level > 4 and d > 0]
    assert all(b < a for a, b in zip(diffs, diffs[1:]))


def test_integrand_examples(ctx50):
    with ctx50.workdps():
        v = integrand(MomentSpec(0, 2, 0), 1, ctx50)
        k = k0(1, ctx50)
        assert abs(v.value - k.value ** 2) <= v.err + 3 * k.err
        # t -> 0: I0 K0 t^0 behaves like -ln t
        t = mpf(10) ** -10
        v = integrand(MomentSpec(1, 1, 0), t, ctx50)
        assert abs(v.value / mp.log(10 ** 10) - 1) < 0.01
        # recomposition at t = 3
        from besselmoments import i0

        v = integrand(MomentSpec(2, 2, 0), 3, ctx50)
        w = (i0(3, ctx50) * k0(3, ctx50)).pow_int(2)
        assert abs(v.value - w.value) <= v.err + w.err


@pytest.mark.parametrize(
    "spec,num,den",
    [
        ((0, 2, 0), 1, 4),
        ((0, 2, 2), 1, 32),
        ((1, 3, 1), 1, 16),
        ((1, 3, 3), 1, 64),
    ],
)
def test_moment_closed_forms(ctx50, spec, num, den):
    res = moment(MomentSpec(*spec), ctx50)
    with mp.workdps(70):
        exact = mp.pi ** 2 * num / den
        assert abs(res.value.value - exact) / exact < mpf(10) ** -45
        assert abs(res.value.value - exact) <= res.value.err


def test_moment_split_invariance(ctx30):
    """Different domain splits agree within the summed error bounds."""
    for spec in (MomentSpec(0, 2, 0), MomentSpec(2, 2, 0), MomentSpec(1, 3, 1)):
        r1 = moment(spec, ctx30, split=1.0)
        r2 = moment(spec, ctx30, split=2.0)
        assert abs(r1.value.value - r2.value.value) <= r1.value.err + r2.value.err


def test_moment_pi_weight(ctx30):
    plain = moment(MomentSpec(2, 2, 0), ctx30)
    weighted = moment(MomentSpec(2, 2, 0, pi_power=2), ctx30)
    with mp.workdps(45):
        assert abs(weighted.value.value - mp.pi ** 2 * plain.value.value) <= (
            mp.pi ** 2 * plain.value.err + weighted.value.err
        )


def test_moment_deterministic_and_cached(ctx30):
    r1 = moment(MomentSpec(1, 3, 1), ctx30)
    r2 = moment(MomentSpec(1, 3, 1), ctx30)
    assert r2 is r1  # context cache hit
    fresh = PrecisionContext(30)
    r3 = moment(MomentSpec(1, 3, 1), fresh)
    assert mp.nstr(r3.value.value, 30) == mp.nstr(r1.value.value, 30)


def test_tail_bound_exceeds_direct_quadrature(ctx30):
    """The analytic tail envelope must dominate the actual mass on (T, 2T]."""
    for spec in (MomentSpec(0, 2, 0), MomentSpec(1, 3, 1), MomentSpec(2, 2, 0)):
        with ctx30.workdps():
            t_cut, bound = _tail_cutoff(spec, ctx30)
            seg = tanh_sinh(
                lambda t: integrand(spec, t, ctx30).value,
                mpf(t_cut),
                mpf(2 * t_cut),
                ctx30,
            )
            assert bound > abs(seg.value)


def test_weighted_moment_sum_empty_and_cancellation(ctx30):
    v = weighted_moment_sum([], ctx30)
    assert v.value == 0 and v.err == 0
    terms = [
        (1, MomentSpec(2, 2, 0, pi_power=2)),
        (-1, MomentSpec(0, 4, 0)),
    ]
    v = weighted_moment_sum(terms, ctx30)
    assert abs(v.value) <= v.err
    vf = weighted_moment_sum(terms, ctx30, fused=True)
    assert abs(vf.value) <= vf.err
    # the weight-6 combination pi^3 IKM(3,3;1) - 3 pi IKM(1,5;1) also cancels
    v6 = weighted_moment_sum(
        [(1, MomentSpec(3, 3, 1, 3)), (-3, MomentSpec(1, 5, 1, 1))], ctx30
    )
    assert abs(v6.value) <= v6.err


def test_weighted_moment_sum_fraction_coeffs(ctx30):
    third = weighted_moment_sum([(Fraction(1, 3), MomentSpec(0, 2, 0))], ctx30)
    whole = moment(MomentSpec(0, 2, 0), ctx30)
    with mp.workdps(45):
        assert abs(3 * third.value - whole.value.value) < mpf(10) ** -25


def test_precision_scales_upward():
    """An 80-digit context actually delivers ~80 digits."""
    ctx = PrecisionContext(80)
    res = moment(MomentSpec(0, 2, 0), ctx)
    with mp.workdps(100):
        exact = mp.pi ** 2 / 4
        assert abs(res.value.value - exact) / exact < mpf(10) ** -80


def test_concurrent_moments_share_caches():
    """Concurrent evaluation against one context is safe and consistent."""
    from concurrent.futures import ThreadPoolExecutor

    ctx = PrecisionContext(30)
    specs = [MomentSpec(0, 2, 0), MomentSpec(1, 3, 1), MomentSpec(0, 2, 2),
             MomentSpec(2, 2, 0), MomentSpec(1, 3, 3), MomentSpec(0, 4, 0)]
    with ThreadPoolExecutor(max_workers=4) as pool:
        results = list(pool.map(lambda s: moment(s, ctx), specs))
    fresh = PrecisionContext(30)
    for spec, res in zip(specs, results):
        again = moment(spec, fresh)
        assert mp.nstr(res.value.value, 30) == mp.nstr(again.value.value, 30)
