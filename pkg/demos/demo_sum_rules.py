"""Watching the Z and Y moment combinations cancel.

Each rule is a small integer-weighted sum of moments that individually sit
at O(1)..O(10^3); the weighted sum collapses to ~1e-50 at 40-digit
precision.  The fused mode integrates the whole combination as a single
integrand as an independent witness.
"""
from mpmath import mp

from besselmoments import SumRuleSpec, PrecisionContext, sum_rule_terms, verify_sum_rule

ctx = PrecisionContext(target_digits=40)

for family, n, k in [("Z", 2, 1), ("Z", 3, 1), ("Y", 3, 1), ("Z", 4, 2)]:
    spec = SumRuleSpec(family, n, k)
    print(f"{spec.label()}  (weight {spec.weight})")
    for coeff, mspec in sum_rule_terms(spec):
        print(f"   {coeff:+d} * pi^{mspec.pi_power} * IKM({mspec.a},{mspec.b};{mspec.c})")
    rep = verify_sum_rule(spec, ctx)
    with mp.workdps(50):
        for coeff, mspec, res in rep.terms:
            print(f"     term value {mp.nstr(res.value.value, 25)}")
        print(f"   sum = {mp.nstr(rep.value.value, 3)}"
              f"  (bound {mp.nstr(rep.value.err, 3)})  passed={rep.passed}")
    fused = verify_sum_rule(spec, ctx, fused=True)
    with mp.workdps(50):
        print(f"   fused witness: {mp.nstr(fused.value.value, 3)}"
              f"  (bound {mp.nstr(fused.value.err, 3)})")
    print()
