"""Arbitrary-precision Bessel moments, their vanishing sum rules, and the
exact integer sequences they generate.

The library computes IKM(a,b;c) = int_0^inf I0(t)^a K0(t)^b t^c dt to any
requested precision, numerically verifies the two binomial-weighted families
of vanishing moment combinations (Z and Y) together with the principal-value
Hilbert-transform identities behind them, and evaluates the companion exact
sequences (Domb numbers, the alpha/beta convolution families, Crandall
numbers) with cross-validation between closed forms and quadrature.
"""

__version__ = "1.0.0"

from .precision import (
    BoundedReal,
    DomainError,
    PrecisionContext,
    PrecisionError,
)
from .bessel import (
    BesselPoint,
    bessel_point,
    i0,
    i0_series,
    k0,
    k0_integral,
    k0_series,
)
from .quadrature import (
    DivergentMomentError,
    MomentResult,
    MomentSpec,
    QuadratureError,
    integrand,
    moment,
    tanh_sinh,
    weighted_moment_sum,
)
from .hilbert import (
    PV_FUNCTION_IDS,
    PVQuery,
    SingularPointError,
    hilbert_image,
    hilbert_pv,
    pv_function,
)
from .sequences import (
    DivisibilityError,
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
from .sumrules import (
    LadderPoly,
    LadderTerm,
    SumRuleReport,
    SumRuleSpec,
    SumRuleSpecError,
    alpha_beta_exact,
    alpha_beta_numeric,
    binomial_alternating_sum,
    crandall_numeric,
    ladder,
    ladder_product_check,
    sum_rule_terms,
    verify_sum_rule,
)

__all__ = [
    "BesselPoint",
    "BoundedReal",
    "DivergentMomentError",
    "DivisibilityError",
    "DomainError",
    "LadderPoly",
    "LadderTerm",
    "MomentResult",
    "MomentSpec",
    "PV_FUNCTION_IDS",
    "PVQuery",
    "PrecisionContext",
    "PrecisionError",
    "QuadratureError",
    "SingularPointError",
    "SumRuleReport",
    "SumRuleSpec",
    "SumRuleSpecError",
    "alpha",
    "alpha_beta_exact",
    "alpha_beta_numeric",
    "alpha_m",
    "bessel_point",
    "beta_m",
    "binomial_alternating_sum",
    "broadhurst_roberts",
    "crandall",
    "crandall_explicit",
    "crandall_numeric",
    "domb",
    "hilbert_image",
    "hilbert_pv",
    "hyp_3f2",
    "i0",
    "i0_series",
    "ikkk_moment_rational",
    "integrand",
    "k0",
    "k0_integral",
    "k0_series",
    "k0sq_moment_rational",
    "ladder",
    "ladder_product_check",
    "moment",
    "pv_function",
    "rogers_check",
    "sum_rule_terms",
    "tanh_sinh",
    "verify_sum_rule",
    "weighted_moment_sum",
]
