"""Ladder polynomial algebra, Z/Y sum-rule assembly, and numeric witnesses.

The two ladder families are exact integer polynomials in the symbols
X = pi*I0*sgn and K = K0 (the sign carried implicitly as sgn^(power of X)):

    zeta_l = sum_m (-1)^m C(l, 2m)   X^(l-2m)   K^(l+2m)
    eta_l  = sum_m (-1)^m C(l, 2m-1) X^(l-2m+1) K^(l+2m-1)

They satisfy the exact product recursions zeta_l zeta_m - eta_l eta_m =
zeta_(l+m) and zeta_l eta_m + eta_l zeta_m = eta_(l+m), verified here by
plain polynomial arithmetic.  Integrating zeta_n t^(n-2k) (resp. the eta
analogue) term by term yields the vanishing Z (resp. Y) combinations of
moments, which verify_sum_rule evaluates numerically against its own
propagated error bound: pass means |value| <= err, no magic tolerances.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Tuple

from mpmath import mpf

from .precision import BoundedReal, PrecisionContext
from .quadrature import MomentResult, MomentSpec, moment, weighted_moment_sum
from .sequences import alpha_m, beta_m


@dataclass(frozen=True)
class LadderTerm:
    coeff: int
    iota_pow: int
    kappa_pow: int


@dataclass(frozen=True)
class LadderPoly:
    kind: str  # "zeta" or "eta"
    ell: int
    terms: Tuple[LadderTerm, ...]


class SumRuleSpecError(ValueError):
    """(family, n, k) outside the validity range of the vanishing identity."""


@dataclass(frozen=True)
class SumRuleSpec:
    family: str  # "Z" or "Y"
    n: int
    k: int

    def __post_init__(self):
        if self.family not in ("Z", "Y"):
            raise SumRuleSpecError(f"unknown family {self.family!r}")
        if self.family == "Z":
            if not (self.n >= 2 * self.k >= 2):
                raise SumRuleSpecError(
                    f"Z requires n >= 2k >= 2, got (n,k)=({self.n},{self.k})"
                )
        else:
            # the stricter range excludes the trivially-odd integrands
            if not (self.n - 1 >= 2 * self.k >= 2):
                raise SumRuleSpecError(
                    f"Y requires n-1 >= 2k >= 2, got (n,k)=({self.n},{self.k})"
                )

    @property
    def weight(self) -> int:
        """Total number of Bessel factors, 2n."""
        return 2 * self.n

    def label(self) -> str:
        return f"{self.family}_{{{2 * self.n},{self.n - 2 * self.k}}}"


@dataclass
class SumRuleReport:
    spec: SumRuleSpec
    value: BoundedReal
    passed: bool
    terms: List[Tuple[int, MomentSpec, Optional[MomentResult]]]


def ladder(kind: str, ell: int) -> LadderPoly:
    """Exact expansion of zeta_ell or eta_ell."""
    if ell < 1:
        raise ValueError("ladder requires ell >= 1")
    terms = []
    if kind == "zeta":
        for m in range(0, ell // 2 + 1):
            terms.append(LadderTerm((-1) ** m * comb(ell, 2 * m), ell - 2 * m, ell + 2 * m))
    elif kind == "eta":
        for m in range(1, ell // 2 + 2):
            coeff = (-1) ** m * comb(ell, 2 * m - 1)
            if coeff:
                terms.append(LadderTerm(coeff, ell - 2 * m + 1, ell + 2 * m - 1))
    else:
        raise ValueError(f"unknown ladder kind {kind!r}")
    return LadderPoly(kind, ell, tuple(terms))


def _as_dict(poly: LadderPoly) -> Dict[Tuple[int, int], int]:
    return {(t.iota_pow, t.kappa_pow): t.coeff for t in poly.terms}


def _poly_mul(p: Dict[Tuple[int, int], int], q: Dict[Tuple[int, int], int]):
    out: Dict[Tuple[int, int], int] = {}
    for (i1, k1), c1 in p.items():
        for (i2, k2), c2 in q.items():
            key = (i1 + i2, k1 + k2)
            out[key] = out.get(key, 0) + c1 * c2
    return {k: v for k, v in out.items() if v}


def _poly_add(p, q, sign=1):
    out = dict(p)
    for key, c in q.items():
        out[key] = out.get(key, 0) + sign * c
    return {k: v for k, v in out.items() if v}


def ladder_product_check(ell: int, m: int) -> bool:
    """Exact check of the two ladder product recursions at (ell, m)."""
    zl, el = _as_dict(ladder("zeta", ell)), _as_dict(ladder("eta", ell))
    zm, em = _as_dict(ladder("zeta", m)), _as_dict(ladder("eta", m))
    zeta_sum = _as_dict(ladder("zeta", ell + m))
    eta_sum = _as_dict(ladder("eta", ell + m))
    lhs_zeta = _poly_add(_poly_mul(zl, zm), _poly_mul(el, em), sign=-1)
    lhs_eta = _poly_add(_poly_mul(zl, em), _poly_mul(el, zm))
    return lhs_zeta == zeta_sum and lhs_eta == eta_sum


def sum_rule_terms(spec: SumRuleSpec) -> List[Tuple[int, MomentSpec]]:
    """Integer-weighted moment list whose sum vanishes identically."""
    n, k = spec.n, spec.k
    out: List[Tuple[int, MomentSpec]] = []
    if spec.family == "Z":
        for term in ladder("zeta", n).terms:
            out.append(
                (
                    term.coeff,
                    MomentSpec(term.iota_pow, term.kappa_pow, n - 2 * k, term.iota_pow),
                )
            )
    else:
        for term in ladder("eta", n).terms:
            out.append(
                (
                    term.coeff,
                    MomentSpec(term.iota_pow, term.kappa_pow, n - 2 * k - 1, term.iota_pow),
                )
            )
    return out


def verify_sum_rule(
    spec: SumRuleSpec,
    ctx: PrecisionContext,
    fused: bool = False,
    split: float = 1.0,
    max_level: int = 12,
) -> SumRuleReport:
    """Evaluate the sum rule and report pass/fail against the error bound.

    A fail with a tight bound is loud by design: it means either a quadrature
    defect or a genuinely non-vanishing combination.
    """
    terms = sum_rule_terms(spec)
    if fused:
        value = weighted_moment_sum(terms, ctx, split=split, fused=True, max_level=max_level)
        detail: List[Tuple[int, MomentSpec, Optional[MomentResult]]] = [
            (c, s, None) for c, s in terms
        ]
    else:
        detail = []
        with ctx.workdps():
            value = BoundedReal(mpf(0), mpf(0))
            for coeff, mspec in terms:
                res = moment(mspec, ctx, split=split, max_level=max_level)
                value = value + res.value.scale(coeff)
                detail.append((coeff, mspec, res))
    passed = abs(value.value) <= value.err
    return SumRuleReport(spec, value, passed, detail)


def crandall_numeric(n: int, ctx: PrecisionContext, fused: bool = False) -> BoundedReal:
    """(2/pi)^4 2^(2n-1) [pi^2 IKM(3,5;2n-1) - IKM(1,7;2n-1)].

    Should reproduce the exact Crandall integer A(n) within its bound.
    """
    if n < 1:
        raise ValueError("crandall_numeric requires n >= 1")
    coeff = 2 ** (2 * n + 3)  # 16 * 2^(2n-1)
    terms = [
        (coeff, MomentSpec(3, 5, 2 * n - 1, pi_power=-2)),
        (-coeff, MomentSpec(1, 7, 2 * n - 1, pi_power=-4)),
    ]
    return weighted_moment_sum(terms, ctx, fused=fused)


def alpha_beta_numeric(M: int, n: int, ctx: PrecisionContext) -> BoundedReal:
    """Numerical value of the alpha/beta integral combination of order M.

    M = 2m evaluates alpha_n^[m]; M = 2m-1 evaluates beta_n^[m]; both as
    binomial-weighted moment sums derived from the ladder recursions.
    """
    if M < 1 or n < 1:
        raise ValueError("alpha_beta_numeric requires M, n >= 1")
    terms: List[Tuple[int, MomentSpec]] = []
    if M % 2 == 0:
        m = M // 2
        c = 2 * (n + m) - 3
        for ell in range(1, m + 1):
            coeff = 4 * (-1) ** (ell - 1) * comb(2 * m, 2 * ell - 1) * 2 ** c
            terms.append(
                (coeff, MomentSpec(2 * (m - ell) + 1, 2 * (m + ell) - 1, c, -2 * ell))
            )
    else:
        m = (M + 1) // 2
        c = 2 * (n + m - 2)
        for ell in range(1, m + 1):
            coeff = 4 * (-1) ** (ell - 1) * comb(2 * m - 1, 2 * ell - 1) * 2 ** c
            terms.append(
                (coeff, MomentSpec(2 * (m - ell), 2 * (m + ell - 1), c, -2 * ell))
            )
    return weighted_moment_sum(terms, ctx)


def alpha_beta_exact(M: int, n: int) -> Fraction:
    """Exact counterpart of alpha_beta_numeric."""
    if M % 2 == 0:
        return Fraction(alpha_m(M // 2, n))
    return beta_m((M + 1) // 2, n)


def binomial_alternating_sum(n: int) -> int:
    """sum_m (-1)^m C(n, 2m) = Re((1+i)^n), by exact integer recursion."""
    re, im = 1, 0
    for _ in range(n):
        re, im = re - im, re + im
    return re
