"""Evaluators for the central unilateral q-series.

Implements both sides of the three headline identities

* ``sum_{n>=0} t^n/(1-x q^n)
  = sum_{n>=0} (1 - x t q^(2n)) / ((1-x q^n)(1-t q^n)) * x^n t^n q^(n^2)``
  (naive geometric form versus theta-convergent form),
* ``L(q) = sum_{n>=1} q^n/(1-q^n) = sum_{n>=1} (1+q^n)/(1-q^n) * q^(n^2)``
  (the Lambert series, obtained at ``x = t = q``), and
* ``L(x,q) = sum_{n>=1} x q^n/(1-x q^n)
  = sum_{n>=1} (1 - x q^(2n)) / ((1-x q^n)(1-q^n)) * x^n q^(n^2)``
  (the generalized Lambert series),

plus the alternate theta-convergent expansion

* ``sum_{n>=0} t^n/(1-x q^n)
  = sum_{n>=0} (q;q)_n / ((x;q)_{n+1} (t;q)_{n+1}) * (-x t)^n q^((n^2-n)/2)``

and Fine's function ``F(a,b;t) = sum_{n>=0} ((aq;q)_n/(bq;q)_n) t^n``.

All Pochhammer ratios are maintained as running products (one multiply per
term), and every evaluator declares a rigorous decay majorant so the engine
can certify its truncation bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext

from .errors import DomainError, PoleError
from .numerics import BigReal, RealContext
from .qcore import Geometric, SeriesValue, TermGenerator, Theta, ipow, sum_series

#: Number of leading denominator indices scanned for poles.
POLE_SCAN_COUNT = 64


def _require_unit(name: str, value: BigReal) -> None:
    if abs(value) >= 1:
        raise DomainError(f"{name} outside (-1,1): {value}")


def _pole_scan(
    name: str, x: BigReal, q: BigReal, ctx: RealContext, first_index: int
) -> None:
    """Reject parameters with ``|1 - x*q**n|`` below the pole tolerance.

    Scans ``POLE_SCAN_COUNT`` consecutive indices starting at ``first_index``.
    """
    tol = ctx.pole_tolerance()
    with localcontext(ctx.dec):
        qn = Decimal(q) ** first_index if first_index else Decimal(1)
        for n in range(first_index, first_index + POLE_SCAN_COUNT):
            if abs(1 - x * qn) <= tol:
                raise PoleError(
                    f"denominator 1 - {name}*q**{n} vanishes at working tolerance"
                )
            qn *= q


@dataclass(frozen=True)
class QxtParams:
    """Parameters (x, t, q) of the two-variable series ``sum t^n/(1-x q^n)``.

    The convergence domain is ``|q| < 1``, ``|x| < 1``, ``|t| < 1``; both
    ``x`` and ``t`` must additionally stay clear of the denominator poles
    over the first :data:`POLE_SCAN_COUNT` indices.
    """

    x: BigReal
    t: BigReal
    q: BigReal

    def validate(self, ctx: RealContext) -> None:
        _require_unit("q", self.q)
        _require_unit("x", self.x)
        _require_unit("t", self.t)
        _pole_scan("x", self.x, self.q, ctx, 0)
        _pole_scan("t", self.t, self.q, ctx, 0)


def series_qxt_lhs(p: QxtParams, ctx: RealContext) -> SeriesValue:
    """Naive (geometrically convergent) form ``sum_{n>=0} t^n/(1-x q^n)``."""
    p.validate(ctx)
    with localcontext(ctx.dec):
        x, t, q = (+Decimal(p.x), +Decimal(p.t), +Decimal(p.q))
        x_hat, q_hat = abs(x), abs(q)
        state = {"tn": Decimal(1), "qn": Decimal(1)}

        def term(n: int) -> BigReal:
            value = state["tn"] / (1 - x * state["qn"])
            state["tn"] *= t
            state["qn"] *= q
            return value

        def prefactor_sup(n: int) -> BigReal:
            den = 1 - x_hat * ipow(q_hat, n + 1)
            if den <= 0:
                return Decimal(0)
            return (1 + x_hat * ipow(q_hat, n)) / den

        gen = TermGenerator(term, Geometric(abs(t), prefactor_sup))
        return sum_series(gen, 0, ctx, method_tag="naive")


def series_qxt_rhs(p: QxtParams, ctx: RealContext) -> SeriesValue:
    """Theta-convergent form of the same series.

    ``sum_{n>=0} (1 - x t q^(2n)) / ((1-x q^n)(1-t q^n)) * x^n t^n q^(n^2)``;
    the summand is symmetric in ``x`` and ``t``.
    """
    p.validate(ctx)
    with localcontext(ctx.dec):
        x, t, q = (+Decimal(p.x), +Decimal(p.t), +Decimal(p.q))
        x_hat, t_hat, q_hat = abs(x), abs(t), abs(q)
        xt = x * t
        state = {
            "xt_pow": Decimal(1),   # (x t)^n
            "q_sq": Decimal(1),     # q^(n^2)
            "q_odd": q,             # q^(2n+1)
            "qn": Decimal(1),       # q^n
            "q2n": Decimal(1),      # q^(2n)
        }

        def term(n: int) -> BigReal:
            numerator = 1 - xt * state["q2n"]
            denominator = (1 - x * state["qn"]) * (1 - t * state["qn"])
            value = numerator / denominator * state["xt_pow"] * state["q_sq"]
            state["xt_pow"] *= xt
            state["q_sq"] *= state["q_odd"]
            state["q_odd"] *= q * q
            state["qn"] *= q
            state["q2n"] *= q * q
            return value

        sup_p = (1 + x_hat * t_hat) / ((1 - x_hat) * (1 - t_hat))
        inf_p = (1 - x_hat * t_hat) / ((1 + x_hat) * (1 + t_hat))
        extra = x_hat * t_hat * sup_p / inf_p
        gen = TermGenerator(term, Theta(q_hat, step=2, shift=1, extra=extra))
        return sum_series(gen, 0, ctx, method_tag="theta")


def series_qxt_alt(p: QxtParams, ctx: RealContext) -> SeriesValue:
    """Alternate theta-convergent expansion via finite Pochhammer ratios.

    ``sum_{n>=0} (q;q)_n / ((x;q)_{n+1} (t;q)_{n+1}) * (-x t)^n q^((n^2-n)/2)``;
    also symmetric in ``x`` and ``t``.
    """
    p.validate(ctx)
    with localcontext(ctx.dec):
        x, t, q = (+Decimal(p.x), +Decimal(p.t), +Decimal(p.q))
        x_hat, t_hat, q_hat = abs(x), abs(t), abs(q)
        xt = x * t
        state = {
            "coeff": 1 / ((1 - x) * (1 - t)),  # full term at the current n
            "qn": q,                           # q^n for the next update
            "qpow": Decimal(1),                # q^(n-1) for the next update
        }

        def term(n: int) -> BigReal:
            value = state["coeff"]
            qn = state["qn"]
            state["coeff"] *= (1 - qn) * (-xt) * state["qpow"] / (
                (1 - x * qn) * (1 - t * qn)
            )
            state["qn"] *= q
            state["qpow"] *= q
            return value

        extra = x_hat * t_hat * (1 + q_hat) / ((1 - x_hat * q_hat) * (1 - t_hat * q_hat))
        gen = TermGenerator(term, Theta(q_hat, step=1, shift=0, extra=extra))
        return sum_series(gen, 0, ctx, method_tag="alt")


def lambert_naive(q: BigReal, ctx: RealContext) -> SeriesValue:
    """Lambert series ``L(q) = sum_{n>=1} q^n/(1-q^n)``, linear convergence."""
    q = Decimal(q)
    if q == 0 or abs(q) >= 1:
        raise DomainError(f"q outside (-1,1) minus 0: {q}")
    with localcontext(ctx.dec):
        q = +q
        q_hat = abs(q)
        state = {"qn": q}

        def term(n: int) -> BigReal:
            qn = state["qn"]
            value = qn / (1 - qn)
            state["qn"] *= q
            return value

        def prefactor_sup(n: int) -> BigReal:
            den = 1 - ipow(q_hat, n + 1)
            if den <= 0:
                return Decimal(0)
            return (1 + ipow(q_hat, n)) / den

        gen = TermGenerator(term, Geometric(q_hat, prefactor_sup))
        return sum_series(gen, 1, ctx, method_tag="naive")


def lambert_theta(q: BigReal, ctx: RealContext) -> SeriesValue:
    """Theta-convergent Lambert series ``sum_{n>=1} (1+q^n)/(1-q^n) q^(n^2)``."""
    q = Decimal(q)
    if q == 0 or abs(q) >= 1:
        raise DomainError(f"q outside (-1,1) minus 0: {q}")
    with localcontext(ctx.dec):
        q = +q
        q_hat = abs(q)
        state = {"qn": q, "q_sq": q, "q_odd": q**3}

        def term(n: int) -> BigReal:
            qn = state["qn"]
            value = (1 + qn) / (1 - qn) * state["q_sq"]
            state["qn"] *= q
            state["q_sq"] *= state["q_odd"]
            state["q_odd"] *= q * q
            return value

        ratio_pre = (1 + q_hat) / (1 - q_hat)
        gen = TermGenerator(
            term, Theta(q_hat, step=2, shift=1, extra=ratio_pre * ratio_pre)
        )
        return sum_series(gen, 1, ctx, method_tag="theta")


def _validate_glambert(x: BigReal, q: BigReal, ctx: RealContext) -> None:
    _require_unit("q", q)
    if abs(x * q) >= 1:
        raise DomainError(f"|x*q| must be < 1, got {abs(x * q)}")
    _pole_scan("x", x, q, ctx, 1)


def glambert_lhs(x: BigReal, q: BigReal, ctx: RealContext) -> SeriesValue:
    """Generalized Lambert series ``L(x,q) = sum_{n>=1} x q^n/(1-x q^n)``."""
    x, q = Decimal(x), Decimal(q)
    _validate_glambert(x, q, ctx)
    with localcontext(ctx.dec):
        x, q = +x, +q
        x_hat, q_hat = abs(x), abs(q)
        state = {"qn": q}

        def term(n: int) -> BigReal:
            xqn = x * state["qn"]
            value = xqn / (1 - xqn)
            state["qn"] *= q
            return value

        def prefactor_sup(n: int) -> BigReal:
            den = 1 - x_hat * ipow(q_hat, n + 1)
            if den <= 0:
                return Decimal(0)
            return (1 + x_hat * ipow(q_hat, n)) / den

        gen = TermGenerator(term, Geometric(q_hat, prefactor_sup))
        return sum_series(gen, 1, ctx, method_tag="naive")


def glambert_theta(x: BigReal, q: BigReal, ctx: RealContext) -> SeriesValue:
    """Theta-convergent generalized Lambert series.

    ``sum_{n>=1} (1 - x q^(2n)) / ((1-x q^n)(1-q^n)) * x^n q^(n^2)``.
    """
    x, q = Decimal(x), Decimal(q)
    _validate_glambert(x, q, ctx)
    with localcontext(ctx.dec):
        x, q = +x, +q
        x_hat, q_hat = abs(x), abs(q)
        state = {
            "xn": x,          # x^n
            "q_sq": q,        # q^(n^2)
            "q_odd": q**3,    # q^(2n+1)
            "qn": q,          # q^n
            "q2n": q * q,     # q^(2n)
        }

        def term(n: int) -> BigReal:
            numerator = 1 - x * state["q2n"]
            denominator = (1 - x * state["qn"]) * (1 - state["qn"])
            value = numerator / denominator * state["xn"] * state["q_sq"]
            state["xn"] *= x
            state["q_sq"] *= state["q_odd"]
            state["q_odd"] *= q * q
            state["qn"] *= q
            state["q2n"] *= q * q
            return value

        sup_p = (1 + x_hat * q_hat * q_hat) / ((1 - x_hat * q_hat) * (1 - q_hat))
        inf_p = (1 - x_hat * q_hat * q_hat) / ((1 + x_hat * q_hat) * (1 + q_hat))
        extra = x_hat * sup_p / inf_p
        gen = TermGenerator(term, Theta(q_hat, step=2, shift=1, extra=extra))
        return sum_series(gen, 1, ctx, method_tag="theta")


def fine_F(
    a: BigReal, b: BigReal, t: BigReal, q: BigReal, ctx: RealContext
) -> SeriesValue:
    """Fine's function ``F(a,b;t) = sum_{n>=0} ((aq;q)_n/(bq;q)_n) t^n``.

    Evaluated with a running Pochhammer ratio (one update per term).
    """
    a, b, t, q = Decimal(a), Decimal(b), Decimal(t), Decimal(q)
    _require_unit("q", q)
    _require_unit("t", t)
    _pole_scan("b", b, q, ctx, 1)
    with localcontext(ctx.dec):
        a, b, t, q = +a, +b, +t, +q
        a_hat, b_hat, q_hat = abs(a), abs(b), abs(q)
        state = {"ratio": Decimal(1), "tn": Decimal(1), "qn1": q}

        def term(n: int) -> BigReal:
            value = state["ratio"] * state["tn"]
            qn1 = state["qn1"]
            state["ratio"] *= (1 - a * qn1) / (1 - b * qn1)
            state["tn"] *= t
            state["qn1"] *= q
            return value

        def prefactor_sup(n: int) -> BigReal:
            den = 1 - b_hat * ipow(q_hat, n + 1)
            if den <= 0:
                return Decimal(0)
            return (1 + a_hat * ipow(q_hat, n + 1)) / den

        gen = TermGenerator(term, Geometric(abs(t), prefactor_sup))
        return sum_series(gen, 0, ctx, method_tag="naive")
