"""Principal-value Hilbert transforms of the Bessel kernel functions.

The six integrands are built from iota(x) = pi I0(x), kappa(x) = K0(|x|)
and the one-sided exponentially weighted variants iota+-, kappa+-.  The
transform used throughout is

    (H f)(x) = PV int f(xi) / (pi (x - xi)) dxi .

Evaluation at x > 0 decomposes the axis into

* a symmetric core (x-delta, x+delta), delta = min(|x|/2, 1), computed as
  int_0^delta (f(x-s) - f(x+s)) / (pi s) ds  -- the subtraction removes the
  pole, and the double-exponential weights crush the floating cancellation
  that appears for s below the working precision;
* finite segments toward 0 (where kappa has its log singularity, handled as
  a tanh-sinh endpoint) and outward;
* log-mapped segments xi = X e^v covering the slowly decaying stretch out
  to Xi = max(1e6, 1e4 x^2) for the O(xi^(-1/2)) and O(xi^(-1)) tails;
* analytic tails beyond Xi, integrating the large-xi expansions term by
  term with the stable downward recursion for I_m = int_Xi^inf s^-m/(s-x) ds.

x < 0 reduces to x > 0 through (H f)(x) = -(H f~)(-x), f~(xi) = f(-xi),
which permutes the six kernels among themselves.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Tuple

from mpmath import mp, mpf

from .bessel import i0_cached, k0_cached, to_mpf
from .precision import BoundedReal, DomainError, PrecisionContext, machine_eps
from .quadrature import _ts_finite  # shared DE machinery

_LN10 = math.log(10)

PV_FUNCTION_IDS = (
    "kappa_sq",
    "iota_kappa_sgn",
    "kappa_plus",
    "kappa_minus",
    "iota_plus",
    "iota_minus",
)


class SingularPointError(DomainError):
    """Evaluation point too close to the kappa log singularity at 0."""


@dataclass(frozen=True)
class PVQuery:
    function_id: str
    x: object  # int, float, str, Fraction or mpf; nonzero

    def __post_init__(self):
        if self.function_id not in PV_FUNCTION_IDS:
            raise DomainError(
                f"unknown function_id {self.function_id!r}; "
                f"expected one of {PV_FUNCTION_IDS}"
            )


# tail kinds: ("exp",) exponential e^(-2 xi); ("half", alternating) for
# sqrt(pi/2 xi) times the I0/K0 expansion; ("iok", sign) for the odd-power
# iota*kappa product expansion; ("zero",) outside the support.
_TAILS: Dict[str, Tuple[Tuple, Tuple]] = {
    # (left tail for f(-s), s -> +inf), (right tail for f(xi), xi -> +inf)
    "kappa_sq": (("exp",), ("exp",)),
    "iota_kappa_sgn": (("iok", -1), ("iok", +1)),
    "kappa_plus": (("half", True), ("exp",)),
    "kappa_minus": (("exp",), ("half", True)),
    "iota_plus": (("zero",), ("half", False)),
    "iota_minus": (("half", False), ("zero",)),
}

# reflection f~(xi) = f(-xi): id -> (sign, reflected id)
_REFLECT: Dict[str, Tuple[int, str]] = {
    "kappa_sq": (1, "kappa_sq"),
    "iota_kappa_sgn": (-1, "iota_kappa_sgn"),
    "kappa_plus": (1, "kappa_minus"),
    "kappa_minus": (1, "kappa_plus"),
    "iota_plus": (1, "iota_minus"),
    "iota_minus": (1, "iota_plus"),
}


def _iota(xi: mpf, ctx: PrecisionContext) -> BoundedReal:
    return i0_cached(abs(xi), ctx).scale(ctx.pi)


def _kappa(xi: mpf, ctx: PrecisionContext) -> BoundedReal:
    return k0_cached(abs(xi), ctx)


def pv_function(function_id: str, ctx: PrecisionContext) -> Callable[[mpf], BoundedReal]:
    """Pointwise evaluator for one of the six kernels (0 outside support)."""

    zero = BoundedReal(mpf(0), mpf(0))

    if function_id == "kappa_sq":
        return lambda xi: _kappa(xi, ctx).pow_int(2)
    if function_id == "iota_kappa_sgn":
        def f(xi):
            v = _iota(xi, ctx) * _kappa(xi, ctx)
            return v if xi > 0 else -v
        return f
    if function_id == "kappa_plus":
        return lambda xi: _kappa(xi, ctx).scale(mp.exp(-xi))
    if function_id == "kappa_minus":
        return lambda xi: _kappa(xi, ctx).scale(mp.exp(xi))
    if function_id == "iota_plus":
        return lambda xi: _iota(xi, ctx).scale(mp.exp(-xi)) if xi > 0 else zero
    if function_id == "iota_minus":
        return lambda xi: _iota(xi, ctx).scale(mp.exp(xi)) if xi < 0 else zero
    raise DomainError(f"unknown function_id {function_id!r}")


def hilbert_image(function_id: str, x, ctx: PrecisionContext) -> BoundedReal:
    """Closed-form Hilbert transform of the kernel (the expected image)."""
    with ctx.workdps():
        x = to_mpf(x)
        if x == 0:
            raise SingularPointError("images are evaluated away from 0")
        if function_id == "kappa_sq":
            v = _iota(x, ctx) * _kappa(x, ctx)
            return v if x > 0 else -v
        if function_id == "iota_kappa_sgn":
            return -_kappa(x, ctx).pow_int(2)
        if function_id == "kappa_plus":  # -> iota_plus
            return pv_function("iota_plus", ctx)(x)
        if function_id == "kappa_minus":  # -> -iota_minus
            return -pv_function("iota_minus", ctx)(x)
        if function_id == "iota_plus":  # -> -kappa_plus
            return -pv_function("kappa_plus", ctx)(x)
        if function_id == "iota_minus":  # -> kappa_minus
            return pv_function("kappa_minus", ctx)(x)
        raise DomainError(f"unknown function_id {function_id!r}")


def _half_coeffs(ctx: PrecisionContext, alternating: bool, xi_cut: mpf) -> List[mpf]:
    """sqrt(pi/2) * ((2k-1)!!)^2/(k! 8^k) (alternating: times (-1)^k),
    truncated once the term at xi_cut undershoots the working precision."""
    pref = mp.sqrt(ctx.pi / 2)
    eps = mpf(10) ** (-(ctx.working_digits + 6))
    out = []
    c = mpf(1)
    k = 0
    while True:
        out.append(pref * c * (-1 if alternating and k % 2 else 1))
        k += 1
        c = c * (2 * k - 1) ** 2 / (8 * k)
        if c * xi_cut ** (-k) < eps or k > 200:
            break
    return out


def _iok_coeffs(ctx: PrecisionContext, xi_cut: mpf) -> List[mpf]:
    """pi * a_j with I0 K0 ~ sum a_j t^(-2j-1), a_0 = 1/2,
    a_(j+1) = a_j (2j+1)^3 / (8 (j+1))."""
    eps = mpf(10) ** (-(ctx.working_digits + 6))
    out = []
    a = mpf(1) / 2
    j = 0
    while True:
        out.append(ctx.pi * a)
        a = a * (2 * j + 1) ** 3 / (8 * (j + 1))
        j += 1
        if a * xi_cut ** (-2 * j) < eps or j > 200:
            break
    return out


def _power_tail(
    coeffs: List[mpf], m0: mpf, step: int, x: mpf, xi_cut: mpf
) -> BoundedReal:
    """sum_k coeffs[k] * I_(m0 + k step) with I_m = int_Xi^inf s^-m/(s-x) ds.

    Downward recursion I_m = Xi^-m / m + x I_(m+1); the start error at the
    buffered top index is damped by (|x|/Xi)^buffer on the way down.
    """
    buffer = 40
    top = len(coeffs) * step + buffer
    inv = 1 / xi_cut
    # start approximation: I_m = sum_j x^j Xi^-(m+j)/(m+j), j = 0..3
    m_top = m0 + top
    pw = xi_cut ** (-m_top)
    val = mpf(0)
    for j in range(4):
        val += x ** j * pw / (m_top + j)
        pw *= inv
    integrals = {}
    m_idx = top
    while m_idx > 0:
        m_idx -= 1
        m = m0 + m_idx
        val = xi_cut ** (-m) / m + x * val
        if m_idx % step == 0 and m_idx // step < len(coeffs):
            integrals[m_idx // step] = val
    total = mpf(0)
    for k, c in enumerate(coeffs):
        total += c * integrals[k]
    trunc = abs(coeffs[-1] * integrals[len(coeffs) - 1]) * 3
    return BoundedReal(total, trunc)


def _segment(
    f: Callable[[mpf], BoundedReal],
    lo: mpf,
    hi: mpf,
    kernel: Callable[[mpf], mpf],
    ctx: PrecisionContext,
    eps: mpf,
    max_level: int,
) -> BoundedReal:
    """int_lo^hi f(xi) kernel(xi) dxi with log-mapped extension when the
    interval spans more than a few decades."""

    def plain(a: mpf, b: mpf) -> BoundedReal:
        def g(xi: mpf) -> BoundedReal:
            return f(xi).scale(kernel(xi))

        val, _ = _ts_finite(g, a, b, ctx, eps, max_level)
        return val

    if hi - lo <= 10:
        return plain(lo, hi)
    mid = lo + 8
    head = plain(lo, mid)

    def g_log(v: mpf) -> BoundedReal:
        xi = mid * mp.exp(v)
        return f(xi).scale(kernel(xi) * xi)

    vmax = mp.log(hi / mid)
    tail, _ = _ts_finite(g_log, mpf(0), vmax, ctx, eps, max_level)
    return head + tail


def hilbert_pv(
    q: PVQuery,
    ctx: PrecisionContext,
    max_level: int = 12,
    min_abs_x: float = 1e-3,
) -> BoundedReal:
    """PV int f(xi)/(pi (x - xi)) dxi for one of the six kernel functions."""
    with ctx.workdps():
        x = to_mpf(q.x)
        if abs(x) < min_abs_x:
            raise SingularPointError(
                f"|x| = {float(abs(x))} too close to the kappa singularity "
                f"(limit {min_abs_x})"
            )
        if x < 0:
            sign, refl = _REFLECT[q.function_id]
            flipped = hilbert_pv(
                PVQuery(refl, -x), ctx, max_level=max_level, min_abs_x=min_abs_x
            )
            return (-flipped).scale(sign)

        f = pv_function(q.function_id, ctx)
        left_tail, right_tail = _TAILS[q.function_id]
        eps = ctx.eps_quad()
        delta = min(x / 2, mpf(1))
        pi = ctx.pi
        inv_pi = 1 / pi
        eps_mach = machine_eps()
        total = BoundedReal(mpf(0), mpf(0))

        # --- symmetric core around the pole -------------------------------
        def core(s: mpf) -> BoundedReal:
            f1 = f(x - s)
            f2 = f(x + s)
            num = f1.value - f2.value
            err = f1.err + f2.err + (abs(f1.value) + abs(f2.value)) * eps_mach
            return BoundedReal(num / s, err / s)

        core_val, _ = _ts_finite(core, mpf(0), delta, ctx, eps, max_level)
        total = total + core_val.scale(inv_pi)

        # --- inner segment (0, x - delta) ----------------------------------
        if q.function_id != "iota_minus":  # otherwise f = 0 on (0, inf)
            inner = _segment(
                f, mpf(0), x - delta, lambda xi: inv_pi / (x - xi), ctx, eps, max_level
            )
            total = total + inner

        # --- outward segment (x + delta, ...) ------------------------------
        total = total + _side(
            f, right_tail, x, x + delta, lambda xi: inv_pi / (x - xi),
            True, ctx, eps, max_level,
        )

        # --- whole negative axis, mirrored to s > 0 ------------------------
        if q.function_id != "iota_plus":  # otherwise f = 0 on (-inf, 0)
            total = total + _side(
                lambda s: f(-s), left_tail, x, mpf(0),
                lambda s: inv_pi / (x + s), False, ctx, eps, max_level,
            )
        return total


def _side(
    fside: Callable[[mpf], BoundedReal],
    tail_kind: Tuple,
    x: mpf,
    start: mpf,
    kernel: Callable[[mpf], mpf],
    is_right: bool,
    ctx: PrecisionContext,
    eps: mpf,
    max_level: int,
) -> BoundedReal:
    """One half-axis contribution from `start` outward, in the mirrored
    coordinate s >= 0 where fside(s) = f(s) (right) or f(-s) (left)."""
    if tail_kind[0] == "zero":
        return BoundedReal(mpf(0), mpf(0))
    wd = ctx.working_digits
    if tail_kind[0] == "exp":
        ext = mpf((wd + 12) * _LN10 / 2 + float(abs(x)) + 10)
        val = _segment(fside, start, ext, kernel, ctx, eps, max_level)
        # decay rate 2 beyond ext; kernel magnitude <= 1/(pi(ext-|x|))
        bound = abs(fside(ext).value) / (2 * mp.pi * (ext - abs(x))) * 2
        return val.widen(bound)

    xi_cut = mpf(max(1e6, 1e4 * float(x) ** 2))
    val = _segment(fside, start, xi_cut, kernel, ctx, eps, max_level)
    if tail_kind[0] == "half":
        coeffs = _half_coeffs(ctx, tail_kind[1], xi_cut)
        m0, step = mpf(1) / 2, 1
    else:  # "iok"
        coeffs = [c * tail_kind[1] for c in _iok_coeffs(ctx, xi_cut)]
        m0, step = mpf(1), 2
    # In the s coordinate the kernel is 1/(pi(x - s)) = -1/(pi(s - x)) on the
    # right and 1/(pi(x + s)) = +1/(pi(s - (-x))) on the left, so the tail
    # reduces to -+ (1/pi) sum coeff_k I_(m_k)(+-x).
    x_eff = x if is_right else -x
    tail_sign = -1 if is_right else 1
    tail = _power_tail(coeffs, m0, step, x_eff, xi_cut)
    return val + tail.scale(tail_sign / ctx.pi)
