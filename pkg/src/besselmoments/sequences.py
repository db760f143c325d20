"""Exact integer and rational sequences tied to the moment closed forms.

Everything here is exact arithmetic on Python ints and Fractions: Domb
numbers, the alpha family and its convolution powers (whose second power
gives the Crandall numbers), the parallel beta family, the rational factors
of the K0^2 and I0 K0^3 moment closed forms, and the compact positive
integer combining both families.  The hypergeometric check at the end is
the only floating-point member and exists to validate the Domb generating
function identity numerically.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import List

from mpmath import mpf

from .precision import BoundedReal, PrecisionContext, PrecisionError


class DivisibilityError(ArithmeticError):
    """An exact divisibility the theory guarantees failed to hold.

    Raised instead of silently truncating: a failure here means a bug in
    the implementation, never in the mathematics.
    """


@lru_cache(maxsize=None)
def _fact(n: int) -> int:
    return factorial(n)


@lru_cache(maxsize=None)
def _binom(n: int, k: int) -> int:
    return comb(n, k)


def domb(n: int) -> int:
    """n-th Domb number: sum_k C(n,k)^2 C(2(n-k), n-k) C(2k, k)."""
    if n < 0:
        raise ValueError("domb requires n >= 0")
    return sum(
        _binom(n, k) ** 2 * _binom(2 * (n - k), n - k) * _binom(2 * k, k)
        for k in range(n + 1)
    )


def alpha(ell: int) -> int:
    """alpha_ell = ((ell-1)!)^2 D_(ell-1) / 4^(ell-1), always an integer."""
    if ell < 1:
        raise ValueError("alpha requires ell >= 1")
    num = _fact(ell - 1) ** 2 * domb(ell - 1)
    quo, rem = divmod(num, 4 ** (ell - 1))
    if rem:
        raise DivisibilityError(
            f"4^{ell - 1} does not divide ((ell-1)!)^2 * D_(ell-1) at ell={ell}"
        )
    return quo


def _poly_pow_coeff(base: List[int], m: int, n: int) -> int:
    """Coefficient of x^(n-1) in (sum base[i] x^i)^m, truncated convolution."""
    deg = n - 1
    poly = [1] + [0] * deg
    for _ in range(m):
        out = [0] * (deg + 1)
        for i, pi in enumerate(poly):
            if pi:
                for j in range(min(len(base), deg - i + 1)):
                    out[i + j] += pi * base[j]
        poly = out
    return poly[deg]


def alpha_m(m: int, n: int) -> int:
    """Coefficient of x^(n-1) in (sum_{l>=1} alpha_l x^(l-1))^m."""
    if m < 1 or n < 1:
        raise ValueError("alpha_m requires m, n >= 1")
    base = [alpha(l) for l in range(1, n + 1)]
    return _poly_pow_coeff(base, m, n)


def crandall(n: int) -> int:
    """Crandall number A(n): A(1) = 0, A(n+1) = alpha_n^[2]."""
    if n < 1:
        raise ValueError("crandall requires n >= 1")
    if n == 1:
        return 0
    return alpha_m(2, n - 1)


def crandall_explicit(n: int) -> Fraction:
    """A(n+1) by the explicit factorial triple sum, kept rational so that a
    bug would surface as a non-integer rather than a silently wrong int."""
    if n < 1:
        raise ValueError("crandall_explicit requires n >= 1")

    def block(i: int, j: int) -> int:
        d = i - j
        return _fact(2 * d) ** 3 // _fact(d) ** 4 if d >= 0 else 0

    total = 0
    for m in range(1, n + 1):
        fm = block(n, m)
        for ell in range(1, m + 1):
            fl = fm * block(m, ell)
            for k in range(1, ell + 1):
                total += fl * block(ell, k) * (_fact(2 * k - 2) ** 3 // _fact(k - 1) ** 4)
    return Fraction(total, 2 ** (4 * (n - 1)))


def k0sq_moment_rational(n: int) -> Fraction:
    """r with int_0^inf K0(t)^2 t^(2n) dt = r * pi^2."""
    if n < 0:
        raise ValueError("k0sq_moment_rational requires n >= 0")
    return Fraction(_fact(2 * n) ** 3, 4 ** (3 * n + 1) * _fact(n) ** 4)


def ikkk_moment_rational(ell: int) -> Fraction:
    """r with int_0^inf I0(t) K0(t)^3 t^(2 ell - 1) dt = r * pi^2."""
    if ell < 1:
        raise ValueError("ikkk_moment_rational requires ell >= 1")
    total = sum(
        (_fact(2 * (ell - k)) ** 3 // _fact(ell - k) ** 4)
        * (_fact(2 * k - 2) ** 3 // _fact(k - 1) ** 4)
        for k in range(1, ell + 1)
    )
    return Fraction(total, 4 ** (3 * ell - 1))


def _domb_series(n: int) -> List[Fraction]:
    """Coefficients (l!)^2 D_l / 4^l for l = 0..n (these equal alpha_(l+1))."""
    return [Fraction(_fact(l) ** 2 * domb(l), 4 ** l) for l in range(n + 1)]


def _k0sq_series(n: int) -> List[Fraction]:
    """Coefficients ((2k)!)^3 / (2^(4k) (k!)^4) for k = 0..n."""
    return [Fraction(_fact(2 * k) ** 3, 2 ** (4 * k) * _fact(k) ** 4) for k in range(n + 1)]


def beta_m(m: int, n: int) -> Fraction:
    """Coefficient of x^(n-1) in (Domb series)^(m-1) * (K0^2 moment series).

    Always a positive rational whose denominator divides 2^(2(n-1)).
    """
    if m < 1 or n < 1:
        raise ValueError("beta_m requires m, n >= 1")
    deg = n - 1
    poly = [Fraction(1)] + [Fraction(0)] * deg
    dseries = _domb_series(deg)
    for _ in range(m - 1):
        out = [Fraction(0)] * (deg + 1)
        for i, pi in enumerate(poly):
            if pi == 0:
                continue
            for j in range(0, deg - i + 1):
                out[i + j] += pi * dseries[j]
        poly = out
    kseries = _k0sq_series(deg)
    coeff = sum(poly[i] * kseries[deg - i] for i in range(deg + 1))
    if coeff <= 0:
        raise DivisibilityError(f"beta_m({m},{n}) came out non-positive")
    if (2 ** (2 * (n - 1))) % coeff.denominator:
        raise DivisibilityError(
            f"beta_m({m},{n}) denominator {coeff.denominator} is not a divisor "
            f"of 2^{2 * (n - 1)}"
        )
    return coeff


def broadhurst_roberts(M: int, n: int) -> int:
    """The positive integer produced by the compact two-family formula.

    Reduction derived by matching prefactors of the binomial expansion of
    ((iota + i kappa)^M - (iota - i kappa)^M) / i against the alpha and beta
    integral combinations:

      M = 2m   -> alpha_n^[m]
      M = 2m-1 -> 2^(4(n-1)) * beta_n^[m]

    Raises if the rescaled beta value is not a positive integer.
    """
    if M < 1 or n < 1:
        raise ValueError("broadhurst_roberts requires M, n >= 1")
    if M % 2 == 0:
        value = alpha_m(M // 2, n)
    else:
        scaled = Fraction(2 ** (4 * (n - 1))) * beta_m((M + 1) // 2, n)
        if scaled.denominator != 1:
            raise DivisibilityError(
                f"broadhurst_roberts({M},{n}): 2^(4(n-1)) * beta is not integral"
            )
        value = scaled.numerator
    if value <= 0:
        raise DivisibilityError(f"broadhurst_roberts({M},{n}) non-positive")
    return value


def hyp_3f2(x, ctx: PrecisionContext, max_terms: int = 100000) -> BoundedReal:
    """3F2(1/3, 1/2, 2/3; 1, 1; x) for |x| < 1 by direct summation.

    The term ratio tends to x from below, so the tail after truncation is
    geometrically bounded by |t| |x| / (1 - |x|).
    """
    with ctx.workdps():
        x = mpf(x.numerator) / x.denominator if isinstance(x, Fraction) else mpf(x)
        if abs(x) >= 1:
            raise ValueError("hyp_3f2 requires |x| < 1")
        eps_stop = mpf(10) ** (-(ctx.working_digits + 3))
        s = term = mpf(1)
        n = 0
        while abs(term) > eps_stop * abs(s):
            if n > max_terms:
                raise PrecisionError(
                    f"hyp_3f2: |x|={float(abs(x))} too close to 1 for {max_terms} terms"
                )
            # (n+1/3)(n+1/2)(n+2/3)/(n+1)^3 = (3n+1)(3n+2)(2n+1)/(18 (n+1)^3)
            ratio = x * ((3 * n + 1) * (3 * n + 2) * (2 * n + 1)) / (18 * (n + 1) ** 3)
            term = term * ratio
            s += term
            n += 1
        tail = abs(term) * abs(x) / (1 - abs(x))
        err = tail + abs(s) * (n + 5) * mpf(10) ** (-ctx.working_digits)
        return BoundedReal(s, err)


def rogers_check(u: Fraction, trunc: int, ctx: PrecisionContext) -> BoundedReal:
    """|LHS - RHS| of the hypergeometric/Domb generating identity.

    LHS: 3F2 at 27 u^2 / (4 (1-u)^3), floating at working precision.
    RHS: (1-u) * sum_{n<=trunc} D_n (u/4)^n, exact rational, with the tail
    bounded by the geometric envelope D_n <= 16^n.
    """
    if not isinstance(u, Fraction):
        u = Fraction(u)
    if trunc < 10:
        raise ValueError("rogers_check needs truncation order >= 10")
    if abs(u) >= Fraction(1, 4):
        raise ValueError("rogers_check requires |u| < 1/4 for the tail bound")
    x = 27 * u * u / (4 * (1 - u) ** 3)
    lhs = hyp_3f2(x, ctx)
    rhs_exact = (1 - u) * sum(
        Fraction(domb(n), 4 ** n) * u ** n for n in range(trunc + 1)
    )
    with ctx.workdps():
        rhs = mpf(rhs_exact.numerator) / rhs_exact.denominator
        q = mpf(4 * abs(u).numerator) / abs(u).denominator
        rhs_tail = (1 + abs(mpf(u.numerator)) / u.denominator) * q ** (trunc + 1) / (1 - q)
        diff = abs(lhs.value - rhs)
        err = lhs.err + rhs_tail + (abs(rhs) + diff) * mpf(10) ** (-ctx.working_digits + 1)
        return BoundedReal(diff, err)
