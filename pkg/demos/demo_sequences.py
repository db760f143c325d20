"""The exact integer machinery: Domb numbers, alpha/beta families,
Crandall numbers, and the quadrature that reproduces them.

Two independent exact routes give the Crandall numbers (a convolution
square of the alpha family, and a factorial triple sum); a third floating
route evaluates the defining moment combination.  All three agree.
"""
from fractions import Fraction

from mpmath import mp

from besselmoments import (
    PrecisionContext,
    alpha,
    beta_m,
    broadhurst_roberts,
    crandall,
    crandall_explicit,
    crandall_numeric,
    domb,
    rogers_check,
)

print("Domb numbers D_n:", [domb(n) for n in range(8)])
print("alpha_l = ((l-1)!)^2 D_(l-1) / 4^(l-1):", [alpha(l) for l in range(1, 8)])
print()

print("Crandall numbers three ways (n = 1..6):")
ctx = PrecisionContext(target_digits=30)
for n in range(1, 7):
    conv = crandall(n)
    tri = str(crandall_explicit(n - 1)) if n > 1 else "-"
    line = f"  A({n}) = {conv:>6}   triple-sum {tri:>6}"
    if n <= 4:
        num = crandall_numeric(n, ctx)
        with mp.workdps(40):
            line += f"   quadrature {mp.nstr(num.value, 8)} (bound {mp.nstr(num.err, 2)})"
    print(line)
print()

print("beta family (rationals with 2-power denominators):")
for n in range(1, 6):
    print(f"  beta^[2]_{n} = {beta_m(2, n)}")
print()

print("compact-form integers (even orders = alpha family, odd = scaled beta):")
for M in range(1, 5):
    print(f"  M={M}: {[broadhurst_roberts(M, n) for n in range(1, 6)]}")
print()

diff = rogers_check(Fraction(1, 16), 120, ctx)
with mp.workdps(40):
    print("hypergeometric vs Domb generating function at u=1/16:",
          mp.nstr(diff.value, 3), "(bound", mp.nstr(diff.err, 3) + ")")
