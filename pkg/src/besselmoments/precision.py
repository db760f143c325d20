"""Working-precision management and error-tracked arbitrary-precision reals.

Every floating computation in this package runs inside a PrecisionContext:
a requested number of decimal digits plus guard digits that absorb rounding.
Values that carry a method error (series truncation, quadrature refinement,
tail cutoffs) travel as BoundedReal pairs (value, err) with first-order
error propagation.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict

from mpmath import mp, mpf


class PrecisionError(ArithmeticError):
    """Requested accuracy cannot be certified at the configured precision."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of the operation."""


def machine_eps() -> mpf:
    """A few ulps at the *current* mpmath precision."""
    return mpf(2) ** (4 - mp.prec)


@dataclass
class BoundedReal:
    """Arbitrary-precision real with a non-negative absolute error estimate.

    Arithmetic propagates bounds monotonically: sums of errors for addition,
    first-order cross terms for multiplication, plus a rounding slop tied to
    the precision active when the operation runs.
    """

    value: mpf
    err: mpf = mpf(0)

    def __post_init__(self) -> None:
        self.value = mpf(self.value)
        self.err = mpf(self.err)
        if self.err < 0:
            raise ValueError("error bound must be non-negative")

    def __add__(self, other: "BoundedReal") -> "BoundedReal":
        v = self.value + other.value
        e = self.err + other.err + abs(v) * machine_eps()
        return BoundedReal(v, e)

    def __sub__(self, other: "BoundedReal") -> "BoundedReal":
        v = self.value - other.value
        e = self.err + other.err + abs(v) * machine_eps()
        return BoundedReal(v, e)

    def __neg__(self) -> "BoundedReal":
        return BoundedReal(-self.value, self.err)

    def __mul__(self, other: "BoundedReal") -> "BoundedReal":
        v = self.value * other.value
        e = (
            abs(self.value) * other.err
            + abs(other.value) * self.err
            + self.err * other.err
            + abs(v) * machine_eps()
        )
        return BoundedReal(v, e)

    def scale(self, k) -> "BoundedReal":
        """Multiply by an exactly-representable constant (int or mpf)."""
        k = mpf(k)
        v = self.value * k
        return BoundedReal(v, self.err * abs(k) + abs(v) * machine_eps())

    def pow_int(self, n: int) -> "BoundedReal":
        """Integer power by repeated multiplication (honest propagation)."""
        if n < 0:
            raise ValueError("negative powers not supported")
        out = BoundedReal(mpf(1), mpf(0))
        base = self
        m = n
        while m:
            if m & 1:
                out = out * base
            base = base * base if m > 1 else base
            m >>= 1
        return out

    def widen(self, extra) -> "BoundedReal":
        """Return a copy with `extra` added to the error bound."""
        return BoundedReal(self.value, self.err + abs(mpf(extra)))

    def contains_zero(self) -> bool:
        return abs(self.value) <= self.err


class PrecisionContext:
    """Target decimal precision plus guard digits; owns per-precision caches.

    The caches (Bessel values keyed by abscissa, quadrature node tables,
    moment results) are populated lazily and only ever hold deterministic
    values, so concurrent lookup/insert races are benign under the GIL.
    """

    def __init__(self, target_digits: int = 50, guard_digits: int = 15):
        if target_digits < 10:
            raise ValueError("target_digits must be at least 10")
        if guard_digits < 1:
            raise ValueError("guard_digits must be positive")
        self.target_digits = int(target_digits)
        self.guard_digits = int(guard_digits)
        self._constants: Dict[str, mpf] = {}
        # abscissa -> BoundedReal, keyed by exact mpf value
        self.i0_cache: Dict[Any, BoundedReal] = {}
        self.k0_cache: Dict[Any, BoundedReal] = {}
        # (map kind, endpoints, level) -> node list
        self.node_cache: Dict[Any, list] = {}
        # cosh grid for the K0 integral representation
        self.cosh_cache: Dict[Any, mpf] = {}
        # MomentSpec/split -> MomentResult
        self.moment_cache: Dict[Any, Any] = {}

    @property
    def working_digits(self) -> int:
        return self.target_digits + self.guard_digits

    def workdps(self):
        """Context manager setting mpmath to the working precision."""
        return mp.workdps(self.working_digits)

    def constant(self, name: str) -> mpf:
        """Cached fundamental constant (pi, euler, ln2, ...) at working precision."""
        val = self._constants.get(name)
        if val is None:
            with self.workdps():
                val = +getattr(mp, name)
            self._constants[name] = val
        return val

    @property
    def pi(self) -> mpf:
        return self.constant("pi")

    @property
    def euler_gamma(self) -> mpf:
        return self.constant("euler")

    def eps_target(self) -> mpf:
        """Requested relative accuracy, 10^(-target_digits)."""
        with self.workdps():
            return mpf(10) ** (-self.target_digits)

    def eps_quad(self) -> mpf:
        """Internal quadrature refinement goal, tighter than the target."""
        with self.workdps():
            return mpf(10) ** (-(self.target_digits + 8))

    def eps_working(self) -> mpf:
        with self.workdps():
            return mpf(10) ** (-self.working_digits)

    def asymptotic_threshold(self) -> float:
        """Abscissa beyond which truncated large-t Bessel expansions certify
        a relative error below the working precision (min term ~ e^(-2t))."""
        import math

        return 0.5 * (self.working_digits + 8) * math.log(10)

    def __repr__(self) -> str:
        return (
            f"PrecisionContext(target_digits={self.target_digits}, "
            f"guard_digits={self.guard_digits})"
        )
