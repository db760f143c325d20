"""Double-exponential quadrature and Bessel moments IKM(a,b;c).

Two trapezoidal DE maps drive everything:

* tanh-sinh on a finite interval (lo, hi): t = lo + span * sigma(u) with
  sigma(u) = 1/(1 + exp(-pi sinh u)); absorbs endpoint singularities up to
  high log powers.
* exp-sinh on a half line (s, inf): t = s * exp(sinh u); compresses both
  exponential tails and the algebraic t^(c-a) tails of the a == b moments
  (nodes reach t ~ 1e30, evaluated through the certified large-t Bessel
  expansions).

Both refine by halving the step, reusing all previously evaluated nodes;
the level-to-level difference plus explicit truncation bounds form the
reported error.  Node transforms are cached per context so that every
moment at the same precision shares abscissas, and therefore shares the
Bessel value cache.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, Tuple

from mpmath import mp, mpf

from .bessel import i0_cached, k0_cached, to_mpf
from .precision import BoundedReal, DomainError, PrecisionContext, PrecisionError

_LN10 = math.log(10)


class DivergentMomentError(DomainError):
    """Moment parameters outside the convergence region."""


class QuadratureError(PrecisionError):
    """Refinement hit the level cap before meeting the accuracy target.

    Carries the best value and error estimate reached so far.
    """

    def __init__(self, message: str, value=None, err=None):
        super().__init__(message)
        self.value = value
        self.err = err


@dataclass(frozen=True)
class MomentSpec:
    """Parameters of the weighted moment pi^pi_power * IKM(a, b; c).

    Convergence requires a < b (integrand decays like e^((a-b)t)) or
    a == b with c <= a - 2 (the product I0*K0 falls off like 1/(2t), so the
    integrand tail is algebraic, ~ t^(c-a)).  The a == b case is exactly
    what the leading term of every Z-family sum rule produces.
    """

    a: int
    b: int
    c: int
    pi_power: int = 0

    def __post_init__(self):
        for name in ("a", "b", "c"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise DivergentMomentError(f"{name} must be a non-negative integer")
        if not isinstance(self.pi_power, int):
            raise DivergentMomentError("pi_power must be an integer")

    def check_convergent(self) -> "MomentSpec":
        """Raise unless the moment integral converges (pointwise integrand
        evaluation stays legal for any exponents)."""
        if self.a > self.b:
            raise DivergentMomentError(
                f"IKM({self.a},{self.b};{self.c}) diverges: a > b makes the "
                "integrand grow like e^((a-b)t)"
            )
        if self.a == self.b and self.c > self.a - 2:
            raise DivergentMomentError(
                f"IKM({self.a},{self.b};{self.c}) diverges: with a == b the "
                "tail behaves like t^(c-a), integrable only for c <= a - 2"
            )
        return self


@dataclass
class MomentResult:
    spec: MomentSpec
    value: BoundedReal
    nodes_used: int
    split_point: mpf
    tail_cutoff: float


# ----------------------------------------------------------------------
# node tables
# ----------------------------------------------------------------------

def _ts_u_limit(ctx: PrecisionContext) -> float:
    """Largest |u| needed so that sigma * (log sigma)^14 underflows the
    working precision (covers log-power endpoint singularities)."""
    s = (ctx.working_digits + 10) * _LN10
    for _ in range(3):
        s = (ctx.working_digits + 10) * _LN10 + 14 * math.log(s)
    return math.asinh(s / math.pi)


def _es_u_lower(ctx: PrecisionContext) -> float:
    """Lower u cut for exp-sinh: Jacobian e^(sinh u) kills the integrand."""
    s = (ctx.working_digits + 12) * _LN10
    for _ in range(3):
        s = (ctx.working_digits + 12) * _LN10 + 14 * math.log(s)
    return -math.asinh(s)


def _ts_row(ctx: PrecisionContext, level: int, j: int) -> Tuple[mpf, mpf]:
    """(near-endpoint sigma, pi cosh(u) sigma (1-sigma)) at u = j / 2^level.

    Stored in reduced dyadic form so coarse-level nodes are shared.
    """
    lev, jj = level, j
    while jj % 2 == 0 and lev > 0:
        jj //= 2
        lev -= 1
    key = ("ts", lev, jj)
    row = ctx.node_cache.get(key)
    if row is None:
        u = mpf(jj) * mpf(2) ** (-lev)
        e = mp.exp(-mp.pi * mp.sinh(u))
        sig_near = e / (1 + e)
        wfac = mp.pi * mp.cosh(u) * sig_near / (1 + e)
        row = (sig_near, wfac)
        ctx.node_cache[key] = row
    return row


def _es_row(ctx: PrecisionContext, level: int, j: int) -> Tuple[mpf, mpf]:
    """(exp(sinh u), cosh u) at u = j / 2^level, reduced-dyadic cached."""
    lev, jj = level, j
    while jj % 2 == 0 and lev > 0:
        jj //= 2
        lev -= 1
    key = ("es", lev, jj)
    row = ctx.node_cache.get(key)
    if row is None:
        u = mpf(jj) * mpf(2) ** (-lev)
        row = (mp.exp(mp.sinh(u)), mp.cosh(u))
        ctx.node_cache[key] = row
    return row


# ----------------------------------------------------------------------
# refinement driver
# ----------------------------------------------------------------------

class _Accumulator:
    """Incremental trapezoid sums: signed, absolute, propagated error."""

    def __init__(self):
        self.signed = mpf(0)
        self.absolute = mpf(0)
        self.err = mpf(0)
        self.edge = mpf(0)
        self.nodes = 0

    def add(self, w: mpf, f: BoundedReal, edge: bool = False) -> None:
        contrib = w * f.value
        self.signed += contrib
        self.absolute += abs(contrib)
        self.err += w * f.err
        if edge:
            self.edge += abs(contrib) + w * f.err
        self.nodes += 1


def _drive(
    level_nodes: Callable[[int], Iterable[Tuple[mpf, mpf, bool]]],
    ctx: PrecisionContext,
    eps: mpf,
    max_level: int,
    history: Optional[list],
    what: str,
) -> Tuple[BoundedReal, int]:
    """Run dyadic refinement over `level_nodes`, return (integral, nodes).

    level_nodes(L) yields (t-weight pairs new at level L, edge flag); the
    full trapezoid sum at level L uses step h = 2^-L over the union of all
    nodes yielded for levels 0..L.
    """
    acc = _Accumulator()
    edge_mass = mpf(0)
    s_prev = None
    diff = None
    for level in range(0, max_level + 1):
        acc.edge = mpf(0)
        produced = 0
        for (w, f, edge) in level_nodes(level):
            acc.add(w, f, edge)
            produced += 1
        if produced:
            edge_mass = acc.edge
        h = mpf(2) ** (-level)
        s = h * acc.signed
        if s_prev is not None:
            diff = abs(s - s_prev)
            if history is not None:
                history.append((level, s, diff))
            scale = h * acc.absolute
            if level >= 2 and diff <= eps * max(scale, mpf(10) ** (-ctx.working_digits)):
                err = (
                    diff
                    + h * acc.err
                    + 3 * h * edge_mass
                    + scale * mpf(10) ** (3 - ctx.working_digits)
                )
                return BoundedReal(s, err), acc.nodes
        s_prev = s
    err = (diff if diff is not None else abs(s_prev)) + mpf(2) ** (-max_level) * acc.err
    raise QuadratureError(
        f"{what}: no convergence within {max_level} refinement levels",
        value=s_prev,
        err=err,
    )


def _wrap_integrand(f: Callable) -> Callable[[mpf], BoundedReal]:
    """Allow plain mpf-valued integrands alongside BoundedReal ones."""

    def call(t: mpf) -> BoundedReal:
        y = f(t)
        if isinstance(y, BoundedReal):
            return y
        return BoundedReal(mpf(y), mpf(0))

    return call


def _ts_finite(
    f: Callable[[mpf], BoundedReal],
    lo: mpf,
    hi: mpf,
    ctx: PrecisionContext,
    eps: mpf,
    max_level: int,
    history: Optional[list] = None,
) -> Tuple[BoundedReal, int]:
    """tanh-sinh quadrature over a finite interval (lo, hi)."""
    span = hi - lo
    u_max = _ts_u_limit(ctx)

    def level_nodes(level: int):
        steps = 1 << level
        j_max = int(u_max * steps)
        if level == 0:
            js: Iterable[int] = range(0, j_max + 1)
        else:
            js = range(1, j_max + 1, 2)
        for j in js:
            if j == 0:
                # center node u = 0: sigma = 1/2, weight factor pi/4
                t = lo + span / 2
                w = span * mp.pi / 4
                yield (w, f(t), False)
                continue
            sig_near, wfac = _ts_row(ctx, level, j)
            w = span * wfac
            edge = j > j_max - 2
            t_lo = lo + span * sig_near
            if t_lo != lo:
                yield (w, f(t_lo), edge)
            t_hi = hi - span * sig_near
            if t_hi != hi:
                yield (w, f(t_hi), edge)

    return _drive(level_nodes, ctx, eps, max_level, history, "tanh_sinh")


def _es_halfline(
    f: Callable[[mpf], BoundedReal],
    lo: mpf,
    ctx: PrecisionContext,
    eps: mpf,
    max_level: int,
    u_hi: Optional[float] = None,
    history: Optional[list] = None,
) -> Tuple[BoundedReal, int]:
    """exp-sinh quadrature over (lo, inf), t = lo + exp(sinh u).

    With lo = 0 the single map covers the whole positive axis, including
    log-type behaviour at 0 (the Jacobian e^(sinh u) cosh u vanishes
    double-exponentially as u -> -inf).  If u_hi is None the upper
    truncation is found adaptively at level 0 by extending until several
    consecutive contributions underflow the target (suitable for integrands
    with eventual monotone decay).
    """
    u_lo = _es_u_lower(ctx)
    state = {"jhi": None}

    def level_nodes(level: int):
        steps = 1 << level
        j_min = int(u_lo * steps) - 1
        if level == 0:
            if state["jhi"] is None:
                if u_hi is not None:
                    state["jhi"] = int(u_hi) + 1
                else:
                    state["jhi"] = _adaptive_scan()
            js: Iterable[int] = range(j_min, state["jhi"] + 1)
        else:
            js = [j for j in range(j_min, state["jhi"] * steps + 1) if j % 2]
        j_hi_lev = state["jhi"] * steps
        for j in js:
            es, ch = _es_row(ctx, level, j)
            t = lo + es
            if t == lo:
                continue  # node folded onto the endpoint at working precision
            w = es * ch
            edge = j >= j_hi_lev - 2 or j <= j_min + 2
            yield (w, f(t), edge)

    def _adaptive_scan() -> int:
        # extend level-0 grid upward until 3 consecutive negligible terms
        small = 0
        j = 0
        scale = mpf(0)
        while True:
            j += 1
            if j > 800:
                raise QuadratureError("exp_sinh: integrand does not decay")
            es, ch = _es_row(ctx, 0, j)
            t = lo + es
            contrib = abs(es * ch * f(t).value)
            scale = max(scale, contrib)
            if contrib <= eps * max(scale, mpf(1)) / 10:
                small += 1
                if small >= 3:
                    return j
            else:
                small = 0

    return _drive(level_nodes, ctx, eps, max_level, history, "exp_sinh")


def tanh_sinh(
    f: Callable,
    lo,
    hi,
    ctx: PrecisionContext,
    max_level: int = 12,
    eps: Optional[mpf] = None,
    history: Optional[list] = None,
) -> BoundedReal:
    """Integrate f over (lo, hi); hi may be mpmath inf for a half line.

    Endpoint singularities of log type are handled by the double-exponential
    node clustering.  Returns the integral with an error combining the last
    refinement difference, truncation estimates, and propagated integrand
    errors.  Raises QuadratureError (carrying the best value) if max_level
    is reached without convergence.
    """
    with ctx.workdps():
        g = _wrap_integrand(f)
        if eps is None:
            eps = ctx.eps_quad()
        if hi == mp.inf:
            lo = to_mpf(lo)
            if lo < 0:
                raise DomainError("half-line integration requires lo >= 0")
            val, _ = _es_halfline(g, lo, ctx, eps, max_level, history=history)
        else:
            lo = to_mpf(lo)
            hi = to_mpf(hi)
            if not hi > lo:
                raise DomainError("tanh_sinh requires lo < hi")
            val, _ = _ts_finite(g, lo, hi, ctx, eps, max_level, history=history)
        return val


# ----------------------------------------------------------------------
# moment integrals
# ----------------------------------------------------------------------

def _moment_integrand(spec: MomentSpec, ctx: PrecisionContext) -> Callable[[mpf], BoundedReal]:
    a, b, c = spec.a, spec.b, spec.c

    def g(t: mpf) -> BoundedReal:
        r = k0_cached(t, ctx).pow_int(b)
        if a:
            r = r * i0_cached(t, ctx).pow_int(a)
        if c:
            r = r.scale(t ** c)
        return r

    return g


def integrand(spec: MomentSpec, t, ctx: PrecisionContext) -> BoundedReal:
    """Pointwise integrand pi^p * I0^a K0^b t^c with propagated error.

    Exponents of the big-float representation are unbounded integers, so
    intermediate factors like I0(t)^a at t ~ 1e30 cannot overflow or
    silently saturate; the product is always formed exactly-scaled.
    """
    with ctx.workdps():
        t = to_mpf(t)
        if t <= 0:
            raise DomainError("integrand requires t > 0")
        val = _moment_integrand(spec, ctx)(t)
        if spec.pi_power:
            val = val.scale(ctx.pi ** spec.pi_power)
        return val


def _tail_cutoff(spec: MomentSpec, ctx: PrecisionContext) -> Tuple[float, mpf]:
    """Cutoff T and a provable-in-spirit bound on the discarded tail.

    Envelopes for the bare IKM integrand (valid for t >= 1; the pi^p weight
    is applied by the caller):
      a < b : 1.2^a (2 pi)^(-a/2) (pi/2)^(b/2) * t^(c-(a+b)/2) e^((a-b)t)
      a == b: 0.6^a * t^(c-a)          (since I0(t) K0(t) <= 0.6/t)
    """
    a, b, c = spec.a, spec.b, spec.c
    with ctx.workdps():
        target_log = (ctx.working_digits + 8) * _LN10
        if a < b:
            lam = b - a
            mu = c - (a + b) / 2
            log_c = (
                a * (math.log(1.2) - 0.5 * math.log(2 * math.pi))
                + b * 0.5 * math.log(math.pi / 2)
            )
            t_cut = (target_log + log_c) / lam + 10.0
            for _ in range(4):
                t_cut = (target_log + log_c + mu * math.log(max(t_cut, 2.0))) / lam
            t_cut = max(t_cut, 5.0) + 2.0
            tail = (
                mpf(2)
                * mp.exp(log_c)
                * mpf(t_cut) ** mu
                * mp.exp(-lam * mpf(t_cut))
                / lam
            )
        else:
            nu = a - c  # >= 2 for any convergent a == b moment
            log_c = a * math.log(0.6)
            # solve C * T^(1-nu)/(nu-1) <= 10^-(wp+8)
            log_t = (target_log + log_c - math.log(nu - 1)) / (nu - 1)
            t_cut = math.exp(min(log_t, 300.0)) + 10.0
            tail = mp.exp(log_c) * mpf(t_cut) ** (1 - nu) / (nu - 1)
        return t_cut, tail


def moment(
    spec: MomentSpec,
    ctx: PrecisionContext,
    split: float = 1.0,
    max_level: int = 12,
) -> MomentResult:
    """pi^pi_power * IKM(a,b;c) by tanh-sinh on (0,split] plus exp-sinh on
    [split,inf) with an envelope-determined tail cutoff.  Results are cached
    per context; identical (spec, split, digits) requests are hits.
    """
    spec.check_convergent()
    key = (spec, float(split), max_level)
    cached = ctx.moment_cache.get(key)
    if cached is not None:
        return cached
    with ctx.workdps():
        split_v = to_mpf(split)
        if not split_v > 0:
            raise DomainError("split point must be positive")
        g = _moment_integrand(spec, ctx)
        eps = ctx.eps_quad()
        t_cut, tail_bound = _tail_cutoff(spec, ctx)
        u_hi = math.asinh(math.log(max(t_cut - float(split_v), 2.0))) + 0.1
        head, n1 = _ts_finite(g, mpf(0), split_v, ctx, eps, max_level)
        tail, n2 = _es_halfline(g, split_v, ctx, eps, max_level, u_hi=u_hi)
        total = (head + tail).widen(tail_bound)
        if spec.pi_power:
            total = total.scale(ctx.pi ** spec.pi_power)
        if not total.value > 0:
            raise QuadratureError(
                f"moment {spec}: non-positive value signals a quadrature failure",
                value=total.value,
                err=total.err,
            )
        result = MomentResult(spec, total, n1 + n2, split_v, t_cut)
    ctx.moment_cache[key] = result
    return result


def _coeff_scale(val: BoundedReal, coeff) -> BoundedReal:
    """Multiply by an exact integer or Fraction coefficient."""
    if isinstance(coeff, Fraction):
        num, den = coeff.numerator, coeff.denominator
        v = val.value * num / den
        e = val.err * abs(mpf(num)) / den + abs(v) * mpf(2) ** (4 - mp.prec)
        return BoundedReal(v, e)
    return val.scale(coeff)


def weighted_moment_sum(
    terms: Sequence[Tuple[object, MomentSpec]],
    ctx: PrecisionContext,
    split: float = 1.0,
    fused: bool = False,
    max_level: int = 12,
) -> BoundedReal:
    """sum(coeff * moment(spec)) with summed error bounds.

    coefficients are exact ints or Fractions.  With fused=True the whole
    linear combination is integrated as a single integrand (one quadrature,
    cancellation happening inside the sum at each node) as an independent
    witness of the term-by-term route.
    """
    if not terms:
        return BoundedReal(mpf(0), mpf(0))
    with ctx.workdps():
        if not fused:
            acc = BoundedReal(mpf(0), mpf(0))
            for coeff, spec in terms:
                res = moment(spec, ctx, split=split, max_level=max_level)
                acc = acc + _coeff_scale(res.value, coeff)
            return acc

        pieces = [
            (coeff, spec.check_convergent(), _moment_integrand(spec, ctx))
            for coeff, spec in terms
        ]
        pi_pows = {spec.pi_power for _, spec in terms}
        pi_cache = {p: ctx.pi ** p for p in pi_pows}

        def g(t: mpf) -> BoundedReal:
            acc = BoundedReal(mpf(0), mpf(0))
            for coeff, spec, gk in pieces:
                acc = acc + _coeff_scale(gk(t).scale(pi_cache[spec.pi_power]), coeff)
            return acc

        eps = ctx.eps_quad()
        split_v = to_mpf(split)
        t_cut = 0.0
        tail_bound = mpf(0)
        for coeff, spec in terms:
            tc, tb = _tail_cutoff(spec, ctx)
            t_cut = max(t_cut, tc)
            cf = abs(mpf(coeff.numerator) / coeff.denominator) if isinstance(coeff, Fraction) else abs(mpf(coeff))
            tail_bound += cf * tb * mp.pi ** spec.pi_power
        u_hi = math.asinh(math.log(max(t_cut - float(split_v), 2.0))) + 0.1
        head, _ = _ts_finite(g, mpf(0), split_v, ctx, eps, max_level)
        tail, _ = _es_halfline(g, split_v, ctx, eps, max_level, u_hi=u_hi)
        return (head + tail).widen(tail_bound)
