"""Arbitrary-precision modified Bessel functions I0 and K0.

Evaluation strategy by regime (all error estimates are relative to the
returned value and verified against the context's target before returning):

* I0: ascending series sum((t^2/4)^k / (k!)^2) everywhere below the
  asymptotic threshold; all terms positive, geometric tail bound.
* K0, t <= 2: logarithmic series -(ln(t/2)+gamma) I0(t) + sum H_k (t^2/4)^k/(k!)^2,
  run at a boosted precision that absorbs the e^(2t) cancellation.
* K0, 2 < t < threshold: trapezoidal double-exponential quadrature of the
  integral representation K0(t) = int_0^inf exp(-t cosh u) du (the integrand
  is even and already decays double-exponentially, so the plain trapezoid
  rule converges geometrically in 1/h).
* t >= threshold ~ 1.15 * working_digits: truncated large-t expansions,
  where the minimal term ~ e^(-2t) certifiably undershoots the working
  precision.  The quadrature tail maps visit abscissas up to ~1e30, far
  beyond any series' reach.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf

from .precision import BoundedReal, DomainError, PrecisionContext, PrecisionError

_LN10 = math.log(10)


def to_mpf(x) -> mpf:
    """Convert ints, floats, strings, Fractions to mpf at current precision."""
    if isinstance(x, Fraction):
        return mpf(x.numerator) / mpf(x.denominator)
    return mpf(x)


@dataclass(frozen=True)
class BesselPoint:
    """I0 and K0 evaluated at one abscissa."""

    t: mpf
    i0: BoundedReal
    k0: BoundedReal


def _certify(val: BoundedReal, ctx: PrecisionContext, what: str) -> BoundedReal:
    if val.err > ctx.eps_target() * abs(val.value):
        raise PrecisionError(
            f"{what}: cannot certify {ctx.target_digits} digits "
            f"(err={mp.nstr(val.err, 3)}, value={mp.nstr(val.value, 3)})"
        )
    return val


def i0_series(t, ctx: PrecisionContext) -> BoundedReal:
    """Ascending series for I0; valid for any t >= 0 but cost grows with t."""
    with ctx.workdps():
        t = to_mpf(t)
        x = t * t / 4
        s = term = mpf(1)
        eps_stop = mpf(10) ** (-(ctx.working_digits + 3))
        max_terms = int(2 * float(t)) + 20 * ctx.working_digits + 50
        k = 0
        while True:
            k += 1
            if k > max_terms:
                raise PrecisionError(f"i0_series: no convergence at t={float(t)}")
            term = term * x / (k * k)
            s += term
            ratio = x / ((k + 1) * (k + 1))
            if ratio < 0.5 and term <= s * eps_stop:
                break
        # ratio <= 1/2 makes the tail a sub-geometric series bounded by term
        err = term + s * mpf(10) ** (2 - ctx.working_digits)
        return BoundedReal(s, err)


def _i0_asymptotic(t, ctx: PrecisionContext) -> BoundedReal:
    """Large-t expansion e^t/sqrt(2 pi t) * sum ((2k-1)!!)^2/(k! (8t)^k).

    Only valid beyond the context threshold, where the minimal term and the
    neglected recessive e^(-t) branch are both below the working precision.
    """
    with ctx.workdps():
        t = to_mpf(t)
        s = term = mpf(1)
        eps_stop = mpf(10) ** (-(ctx.working_digits + 3))
        k = 0
        while True:
            nxt = term * (2 * k + 1) ** 2 / (8 * (k + 1) * t)
            if nxt >= term:
                break
            k += 1
            term = nxt
            s += term
            if term < eps_stop:
                break
        rel = 3 * term + 3 * mp.exp(-2 * t) + mpf(10) ** (2 - ctx.working_digits)
        value = mp.exp(t) / mp.sqrt(2 * ctx.pi * t) * s
        return BoundedReal(value, abs(value) * rel)


def _k0_asymptotic(t, ctx: PrecisionContext) -> BoundedReal:
    """Large-t expansion sqrt(pi/2t) e^{-t} * alternating series; the
    remainder is bounded by the first omitted term."""
    with ctx.workdps():
        t = to_mpf(t)
        s = mpf(1)
        term = mpf(1)
        eps_stop = mpf(10) ** (-(ctx.working_digits + 3))
        k = 0
        while True:
            nxt = term * (2 * k + 1) ** 2 / (8 * (k + 1) * t)
            if nxt >= term:
                term = nxt
                break
            k += 1
            term = nxt
            s += term if k % 2 == 0 else -term
            if term < eps_stop:
                break
        rel = 2 * term + mpf(10) ** (2 - ctx.working_digits)
        value = mp.sqrt(ctx.pi / (2 * t)) * mp.exp(-t) * s
        return BoundedReal(value, abs(value) * rel)


def k0_series(t, ctx: PrecisionContext) -> BoundedReal:
    """Logarithmic series for K0 at boosted internal precision.

    The partial sums are of size ~e^t I0 while K0 ~ e^{-t}, so 2t/ln10
    digits cancel; the boost covers that loss.  Practical for t up to the
    asymptotic threshold (used as the series side of the dual-route check).
    """
    t_f = float(to_mpf(t))
    if t_f <= 0:
        raise DomainError("k0 requires t > 0")
    boost = int(2 * t_f / _LN10) + 10
    wp = ctx.working_digits + boost
    with mp.workdps(wp):
        t = to_mpf(t)
        x = t * t / 4
        i0term = mpf(1)
        i0sum = mpf(1)
        hsum = mpf(0)
        harmonic = mpf(0)
        eps_stop = mpf(10) ** (-(wp + 3))
        max_terms = int(2 * t_f) + 20 * wp + 50
        k = 0
        while True:
            k += 1
            if k > max_terms:
                raise PrecisionError(f"k0_series: no convergence at t={t_f}")
            i0term = i0term * x / (k * k)
            harmonic += mpf(1) / k
            i0sum += i0term
            hsum += i0term * harmonic
            ratio = x / ((k + 1) * (k + 1))
            if ratio < mpf(1) / 3 and i0term * (harmonic + 1) <= hsum * eps_stop:
                break
        lead = -(mp.log(t / 2) + +mp.euler)
        value = lead * i0sum + hsum
        scale = abs(lead) * i0sum + hsum
        tail = i0term * (abs(lead) + harmonic + 1) * 2
        err = tail + scale * (k + 10) * mpf(10) ** (-wp)
    with ctx.workdps():
        out = BoundedReal(+value, +err + abs(value) * mpf(10) ** (2 - ctx.working_digits))
    return _certify(out, ctx, "k0_series")


def _cosh_grid(ctx: PrecisionContext, level: int, j: int) -> mpf:
    """cosh(j / 2^level), cached per context with j reduced to odd form."""
    while j and j % 2 == 0:
        j //= 2
        level -= 1
    key = (level, j)
    val = ctx.cosh_cache.get(key)
    if val is None:
        val = mp.cosh(mpf(j) * mpf(2) ** (-level)) if j else mpf(1)
        ctx.cosh_cache[key] = val
    return val


def k0_integral(t, ctx: PrecisionContext, max_level: int = 12) -> BoundedReal:
    """K0 via trapezoidal refinement of int_0^inf exp(-t cosh u) du."""
    t_f = float(to_mpf(t))
    if t_f <= 0:
        raise DomainError("k0 requires t > 0")
    with ctx.workdps():
        t = to_mpf(t)
        decay = (ctx.working_digits + 6) * _LN10
        # relative truncation: exp(-t cosh u_max) must undershoot K0(t) ~ e^-t
        cosh_max = 1 + decay / t_f
        u_max = math.acosh(cosh_max) + 0.1
        eps = ctx.eps_quad()

        def row_sum(level: int, odd_only: bool) -> mpf:
            steps = 1 << level
            total = mpf(0)
            j_max = int(u_max * steps)
            rng = range(1, j_max + 1, 2) if odd_only else range(1, j_max + 1)
            for j in rng:
                total += mp.exp(-t * _cosh_grid(ctx, level, j))
            return total

        level = 1
        raw = mp.exp(-t) / 2 + row_sum(level, odd_only=False)
        s_prev = raw / (1 << level)
        while True:
            level += 1
            if level > max_level:
                raise PrecisionError(f"k0_integral: no convergence at t={t_f}")
            raw += row_sum(level, odd_only=True)
            s = raw / (1 << level)
            diff = abs(s - s_prev)
            if diff <= eps * s:
                break
            s_prev = s
        trunc = mp.exp(-t * mp.cosh(u_max)) / (t * mp.sinh(u_max))
        err = diff + trunc + s * mpf(10) ** (3 - ctx.working_digits)
        return BoundedReal(s, err)


def i0(t, ctx: PrecisionContext) -> BoundedReal:
    """I0(t) for t >= 0 with certified relative error."""
    t_f = float(to_mpf(t))
    if t_f < 0:
        raise DomainError("i0 requires t >= 0")
    if t_f == 0:
        return BoundedReal(mpf(1), mpf(0))
    if t_f < ctx.asymptotic_threshold():
        out = i0_series(t, ctx)
    else:
        out = _i0_asymptotic(t, ctx)
    return _certify(out, ctx, "i0")


def k0(t, ctx: PrecisionContext) -> BoundedReal:
    """K0(t) for t > 0 with certified relative error.

    Dispatch: logarithmic series on (0, 2], integral representation on
    (2, threshold), certified asymptotics beyond.
    """
    t_f = float(to_mpf(t))
    if t_f <= 0:
        raise DomainError("k0 requires t > 0 (log divergence at 0)")
    if t_f <= 2:
        return k0_series(t, ctx)
    if t_f < ctx.asymptotic_threshold():
        return _certify(k0_integral(t, ctx), ctx, "k0_integral")
    return _certify(_k0_asymptotic(t, ctx), ctx, "k0_asymptotic")


def i0_cached(t: mpf, ctx: PrecisionContext) -> BoundedReal:
    val = ctx.i0_cache.get(t)
    if val is None:
        val = i0(t, ctx)
        ctx.i0_cache[t] = val
    return val


def k0_cached(t: mpf, ctx: PrecisionContext) -> BoundedReal:
    val = ctx.k0_cache.get(t)
    if val is None:
        val = k0(t, ctx)
        ctx.k0_cache[t] = val
    return val


def bessel_point(t, ctx: PrecisionContext) -> BesselPoint:
    """Both Bessel values at t, cached per context."""
    with ctx.workdps():
        t = to_mpf(t)
        return BesselPoint(t, i0_cached(t, ctx), k0_cached(t, ctx))
