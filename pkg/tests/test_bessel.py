import pytest
from mpmath import mp, mpf

from besselmoments import (
    DomainError,
    PrecisionContext,
    bessel_point,
    i0,
    i0_series,
    k0,
    k0_integral,
    k0_series,
)

# frozen oracle values (independent routes, see docstrings below)
I0_AT_2 = "2.27958530233606726743720444081153335328584110278545905407084"
K0_AT_1 = "0.42102443824070833333562737921260903613621974822666047229897"


def test_i0_at_zero_exact(ctx50):
    v = i0(0, ctx50)
    assert v.value == 1 and v.err == 0


def test_i0_series_value(ctx50):
    """Oracle: exact rational partial sums of sum (t^2/4)^k/(k!)^2 at t=2
    (all terms positive, tail below the first omitted term)."""
    v = i0(2, ctx50)
    with mp.workdps(70):
        ref = mpf(I0_AT_2)
        assert abs(v.value - ref) <= mpf(10) ** -50
        assert v.err <= mpf(10) ** -50 * v.value


def test_i0_large_argument_asymptotic_shape(ctx50):
    """Leading asymptotics e^t/sqrt(2 pi t): 1% sanity check at t=100."""
    v = i0(100, ctx50)
    with mp.workdps(70):
        lead = mp.exp(100) / mp.sqrt(2 * mp.pi * 100)
        assert abs(v.value / lead - 1) < 0.01


def test_k0_value_dual_route(ctx50):
    """Frozen digits come from the integral-representation route; the series
    route must land on them within its reported bound."""
    with mp.workdps(70):
        ref = mpf(K0_AT_1)
        for route in (k0, k0_series, k0_integral):
            v = route(1, ctx50)
            assert abs(v.value - ref) <= max(v.err, mpf(10) ** -55)


@pytest.mark.parametrize("t", ["0.1", "1", "5", "20"])
def test_k0_routes_agree(ctx50, t):
    """Series vs integral representation within combined error bounds."""
    with ctx50.workdps():
        tv = mpf(t)
    a = k0_series(tv, ctx50)
    b = k0_integral(tv, ctx50)
    assert abs(a.value - b.value) <= a.err + b.err


def test_k0_large_t_asymptotic_shape(ctx50):
    """k0(t) e^t sqrt(t) -> sqrt(pi/2), checked at t=200 to 1%."""
    v = k0(200, ctx50)
    with mp.workdps(70):
        scaled = v.value * mp.exp(200) * mp.sqrt(200)
        assert abs(scaled / mp.sqrt(mp.pi / 2) - 1) < 0.01


def test_k0_small_t_log_behavior(ctx50):
    """k0(t) ~ -ln(t/2) - gamma as t -> 0, within 1e-20 at t = 1e-30."""
    with ctx50.workdps():
        t = mpf(10) ** -30
    v = k0(t, ctx50)
    with mp.workdps(70):
        approx = -mp.log(t / 2) - mp.euler
        assert abs(v.value - approx) < mpf(10) ** -20


def test_domain_errors(ctx50):
    with pytest.raises(DomainError):
        k0(0, ctx50)
    with pytest.raises(DomainError):
        k0(-1, ctx50)
    with pytest.raises(DomainError):
        i0(-1, ctx50)


@pytest.mark.parametrize("t1,t2", [("0.1", "0.5"), ("1", "2"), ("3", "7"), ("10", "40")])
def test_monotonicity(ctx50, t1, t2):
    with ctx50.workdps():
        a, b = mpf(t1), mpf(t2)
    assert i0(a, ctx50).value < i0(b, ctx50).value
    assert k0(a, ctx50).value > k0(b, ctx50).value


def test_bessel_point_invariants_and_cache(ctx50):
    p = bessel_point(mpf(3), ctx50)
    assert p.i0.value >= 1
    assert p.k0.value > 0
    q = bessel_point(mpf(3), ctx50)
    assert q.i0 is p.i0 and q.k0 is p.k0


def test_asymptotic_matches_series_at_threshold():
    """The large-t expansion and the (boosted) series must agree where the
    dispatch switches over."""
    ctx = PrecisionContext(40)
    t = int(ctx.asymptotic_threshold()) + 2
    direct = i0(t, ctx)
    series = i0_series(t, ctx)
    assert abs(direct.value - series.value) <= direct.err + series.err
    kd = k0(t, ctx)
    ks = k0_series(t, ctx)
    assert abs(kd.value - ks.value) <= kd.err + ks.err


def test_guard_digit_doubling_stable():
    """Doubling guard digits never changes the first target_digits digits."""
    base = PrecisionContext(40, guard_digits=15)
    wide = PrecisionContext(40, guard_digits=30)
    for t in (1, 2, 7, 30):
        with mp.workdps(90):
            for fn in (i0, k0):
                a = fn(t, base).value
                b = fn(t, wide).value
                assert mp.nstr(a, 40) == mp.nstr(b, 40)
