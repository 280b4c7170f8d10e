"""q-Pochhammer symbols, the theta constant, and the certified summation engine.

The engine sums a term stream in increasing index order and stops as soon as
a *certified* bound on the discarded tail drops below ``epsilon / 2``; the
other half of the epsilon budget is left for rounding accumulation.  Each
term generator declares its decay class up front:

* ``Geometric(ratio, prefactor_sup)`` — ``|T_{m+1}/T_m| <= ratio * prefactor_sup(n)``
  for every ``m >= n`` (``prefactor_sup`` non-increasing, tending to 1), or
* ``Theta(base, step, shift, extra, prefactor_sup)`` —
  ``|T_{m+1}/T_m| <= extra * prefactor_sup(n) * base**(step*m + shift)``
  for every ``m >= n``.

Because the declared ratio majorises every later term ratio, the geometric
tail bound ``|T_n| * rho / (1 - rho)`` with ``rho = ratio_at(n)`` is a true
upper bound on the discarded remainder.  An empirical guard cross-checks the
declaration: once past a burn-in of 16 terms, a term exceeding twice the
declared ratio counts as a violation, and 64 consecutive violations abort
the summation.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from typing import Callable

from .errors import DivergenceError, DomainError
from .numerics import BigReal, RealContext

_TWO = Decimal(2)


def ipow(base: BigReal, exponent: int) -> BigReal:
    """``base ** exponent`` for integer exponents, with ``0 ** 0 == 1``."""
    if exponent == 0:
        return Decimal(1)
    return Decimal(base) ** exponent

#: Number of leading terms exempt from the decay guard.
GUARD_BURN_IN = 16
#: Consecutive decay violations after which the engine aborts.
GUARD_VIOLATION_LIMIT = 64
#: Minimum number of summand evaluations before the engine may stop.
MIN_TERMS = 2


@dataclass(frozen=True)
class SeriesValue:
    """Result of a truncated summation.

    Attributes:
        value: The accumulated sum at working precision.
        terms_used: Number of summand evaluations actually performed.
        tail_bound: Certified upper bound on the absolute truncation error
            (plus the rounding floor of the context).
        method_tag: Label of the evaluation route ("naive", "theta", ...).
    """

    value: BigReal
    terms_used: int
    tail_bound: BigReal
    method_tag: str


@dataclass(frozen=True)
class Geometric:
    """Geometric decay declaration: ratio bound tending to ``ratio``."""

    ratio: BigReal
    prefactor_sup: Callable[[int], BigReal] | None = None

    def ratio_at(self, n: int) -> BigReal:
        rho = abs(self.ratio)
        if self.prefactor_sup is not None:
            pre = self.prefactor_sup(n)
            if pre <= 0:
                return _TWO
            rho *= pre
        return rho


@dataclass(frozen=True)
class Theta:
    """Theta decay declaration: ratio bound ``extra * base**(step*n + shift)``."""

    base: BigReal
    step: int = 2
    shift: int = 1
    extra: BigReal = Decimal(1)
    prefactor_sup: Callable[[int], BigReal] | None = None

    def ratio_at(self, n: int) -> BigReal:
        rho = abs(self.extra) * ipow(abs(self.base), self.step * n + self.shift)
        if self.prefactor_sup is not None:
            pre = self.prefactor_sup(n)
            if pre <= 0:
                return _TWO
            rho *= pre
        return rho


Decay = Geometric | Theta


@dataclass(frozen=True)
class TermGenerator:
    """A summand stream with a declared decay class.

    ``term`` is called exactly once per index, in increasing order starting
    from the engine's ``start_index``; generators are therefore free to keep
    running-product state keyed to that order.
    """

    term: Callable[[int], BigReal]
    decay: Decay


def sum_series(
    gen: TermGenerator,
    start_index: int,
    ctx: RealContext,
    method_tag: str = "series",
    eps: BigReal | None = None,
) -> SeriesValue:
    """Sum ``gen`` from ``start_index`` with a certified truncation bound.

    Stops at the first index (after at least :data:`MIN_TERMS` evaluations)
    where ``|T_n| * rho / (1 - rho) < eps / 2`` with ``rho = ratio_at(n) < 1``.

    Raises:
        DivergenceError: if terms repeatedly exceed the declared decay, or
            the certification never triggers within the iteration budget.
    """
    target = (ctx.epsilon if eps is None else eps) / 2
    hard_cap = max(20_000, 600 * ctx.working_digits)
    with localcontext(ctx.dec):
        total = Decimal(0)
        terms_used = 0
        violations = 0
        previous: BigReal | None = None
        previous_rho: BigReal | None = None
        n = start_index
        while True:
            t = gen.term(n)
            total += t
            terms_used += 1
            rho = gen.decay.ratio_at(n)
            if previous is not None and terms_used > GUARD_BURN_IN:
                allowed = 2 * previous_rho * abs(previous)
                if abs(t) > allowed:
                    violations += 1
                    if violations >= GUARD_VIOLATION_LIMIT:
                        raise DivergenceError(
                            f"terms violated the declared decay near index {n}"
                        )
                else:
                    violations = 0
            if terms_used >= MIN_TERMS and rho < 1:
                tail = abs(t) * rho / (1 - rho)
                if tail < target:
                    return SeriesValue(
                        value=total,
                        terms_used=terms_used,
                        tail_bound=tail + ctx.tail_floor(total),
                        method_tag=method_tag,
                    )
            previous = t
            previous_rho = rho
            n += 1
            if terms_used > hard_cap:
                raise DivergenceError(
                    f"series failed to certify within {hard_cap} terms"
                )


def qpochhammer_n(a: BigReal, q: BigReal, n: int, ctx: RealContext) -> BigReal:
    """Finite q-Pochhammer product ``(a;q)_n = (1-a)(1-aq)...(1-aq^(n-1))``.

    ``n = 0`` returns exactly 1.
    """
    if n < 0:
        raise DomainError("qpochhammer_n requires n >= 0")
    with localcontext(ctx.dec):
        product = Decimal(1)
        factor_arg = Decimal(a)
        for _ in range(n):
            product *= 1 - factor_arg
            factor_arg *= q
        return product


def qpochhammer_inf(a: BigReal, q: BigReal, ctx: RealContext) -> SeriesValue:
    """Infinite q-Pochhammer product ``(a;q)_inf`` for ``|q| < 1``.

    Truncates at the first ``N`` where ``|a|*|q|**N < epsilon/4`` and the
    logarithm-based tail estimate (from ``|log(1-u)| <= 2|u|`` for
    ``|u| <= 1/2``) certifies the remaining factors to within ``epsilon/2``.
    """
    q = Decimal(q)
    a = Decimal(a)
    if abs(q) >= 1:
        raise DomainError("qpochhammer_inf requires |q| < 1")
    with localcontext(ctx.dec):
        quarter = ctx.epsilon / 4
        half = ctx.epsilon / 2
        q_hat = abs(q)
        product = Decimal(1)
        factor_arg = a
        factors = 0
        while True:
            u = abs(factor_arg)
            if u < quarter and u <= Decimal("0.5"):
                log_tail = 2 * u / (1 - q_hat)
                tail = abs(product) * 2 * log_tail
                if tail < half:
                    return SeriesValue(
                        value=product,
                        terms_used=factors,
                        tail_bound=tail + ctx.tail_floor(product),
                        method_tag="product",
                    )
            product *= 1 - factor_arg
            factor_arg *= q
            factors += 1
            if factors > max(20_000, 600 * ctx.working_digits):
                raise DivergenceError("infinite product failed to certify")


def theta3(q: BigReal, ctx: RealContext) -> SeriesValue:
    """Jacobi theta constant ``Theta_3(q) = 1 + 2 * sum_{n>=1} q**(n**2)``.

    Truncates once ``|q|**(n**2) < epsilon/8`` and the theta-class tail bound
    certifies the remainder.

    Raises:
        DomainError: unless ``|q| < 1``.
    """
    q = Decimal(q)
    if abs(q) >= 1:
        raise DomainError("theta3 requires |q| < 1")
    with localcontext(ctx.dec):
        eighth = ctx.epsilon / 8
        half = ctx.epsilon / 2
        q_hat = abs(q)
        total = Decimal(1)
        power = q          # q**(n**2) at n = 1
        power_hat = q_hat
        n = 1
        terms = 0
        while True:
            total += 2 * power
            terms += 1
            # q**((n+1)**2) = q**(n**2) * q**(2n+1)
            step = q ** (2 * n + 1)
            next_power_hat = power_hat * abs(step)
            rho = q_hat ** (2 * n + 3)
            if power_hat < eighth and rho < 1:
                tail = 2 * next_power_hat / (1 - rho)
                if tail < half:
                    return SeriesValue(
                        value=total,
                        terms_used=terms,
                        tail_bound=tail + ctx.tail_floor(total),
                        method_tag="theta",
                    )
            power *= step
            power_hat = next_power_hat
            n += 1
            if terms > max(20_000, 600 * ctx.working_digits):
                raise DivergenceError("theta series failed to certify")
