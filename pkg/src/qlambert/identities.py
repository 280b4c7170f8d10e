"""Registry of q-series identities with independently evaluable sides.

Every identity is registered as an :class:`IdentityEntry` carrying a
parameter schema and two or more side evaluators; :func:`check_identity`
draws deterministic pseudo-random parameter points, evaluates all sides at
full precision, and reports the worst pairwise deviation.  A point passes
when that deviation stays within ``4*epsilon`` (two independently truncated
sides carrying at most ``epsilon`` error each, plus rounding margin).

Two printed forms are corrected here because they fail numerically and the
corrected forms hold to full precision at every sampled point:

* the ``fine-12.2`` right side uses the Pochhammer symbol ``(b/a;q)_n``
  (folded into the pole-free product ``prod_j (a - b*q^j)``), and
* the alternate expansion checked inside module lambert uses ``(-x*t)^n``
  rather than ``(x*t)^n``.

Sampling uses a 64-bit linear congruential generator,

    ``state <- (6364136223846793005*state + 1442695040888963407) mod 2^64``,

mapped to ``[-0.9, 0.9]``, so worst points are reproducible across runs and
implementations.  Each trial expands its own substream seeded by
``seed + trial_index``; points hitting poles or domain edges are resampled
wholesale (up to 1000 attempts).
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from typing import Callable, Mapping

from .bilateral import (
    BilateralParams,
    jordan_direct,
    jordan_form1,
    jordan_form2,
    jordan_theta,
)
from .errors import DivergenceError, DomainError, PoleError, UnknownIdentityError
from .gospermat import (
    LEFT,
    RIGHT,
    exchange_check,
    product_factor_count,
    product_upper_right,
)
from .lambert import QxtParams, fine_F, lambert_naive, series_qxt_lhs
from .numerics import BigReal, RealContext, format_real, make_context
from .qcore import (
    Geometric,
    SeriesValue,
    TermGenerator,
    Theta,
    ipow,
    qpochhammer_inf,
    sum_series,
)

__all__ = [
    "GOSPER_MATRIX_NAME",
    "IdentityEntry",
    "IdentityReport",
    "ParamSpec",
    "check_gosper_matrix",
    "check_identity",
    "registry",
]

Params = Mapping[str, BigReal]
SideFn = Callable[[Params, RealContext], SeriesValue]

#: LCG constants (64-bit state).
LCG_MULTIPLIER = 6364136223846793005
LCG_INCREMENT = 1442695040888963407
_MASK64 = (1 << 64) - 1
_TWO64 = Decimal(1 << 64)

#: Real parameters are drawn uniformly from [-DRAW_SPAN, DRAW_SPAN].
DRAW_SPAN = Decimal("0.9")

#: Whole-point resampling budget per trial.
MAX_RESAMPLES = 1000

#: Name of the synthetic matrix-identity report (not a registry entry).
GOSPER_MATRIX_NAME = "gosper-matrix"

#: Extra digits beyond the estimated deficit when escalating precision.
ESCALATION_MARGIN = 4

#: Escalation rounds before giving up on the epsilon contract.
ESCALATION_ROUNDS = 3


@dataclass(frozen=True)
class ParamSpec:
    """Declared domain of one identity parameter.

    ``kind`` is ``"real"`` (uniform over ``[-0.9, 0.9]``, optionally floored
    away from zero by ``min_magnitude``) or ``"int"`` (uniform over the
    inclusive range ``low..high``).
    """

    name: str
    kind: str = "real"
    low: int = 0
    high: int = 0
    min_magnitude: Decimal | None = None


@dataclass(frozen=True)
class IdentityEntry:
    """One registered identity: parameter schema, side evaluators, anchor text.

    ``transform``, when present, post-processes a drawn point (used to scale
    ``q`` inside the bilateral convergence wedge).
    """

    name: str
    parameters: tuple[ParamSpec, ...]
    sides: tuple[SideFn, ...]
    anchor: str
    transform: Callable[[dict[str, BigReal], RealContext], dict[str, BigReal]] | None = None


@dataclass(frozen=True)
class IdentityReport:
    """Outcome of sampling one identity.

    ``worst_point`` maps parameter names to decimal strings; ``passed`` is
    ``worst_deviation <= 4*epsilon`` for the context used.
    """

    name: str
    trials: int
    seed: int
    worst_deviation: BigReal
    worst_point: dict[str, str]
    passed: bool


class _Rng:
    """64-bit LCG substream (see module docstring for the constants)."""

    __slots__ = ("state",)

    def __init__(self, seed: int) -> None:
        self.state = seed & _MASK64

    def next_raw(self) -> int:
        self.state = (LCG_MULTIPLIER * self.state + LCG_INCREMENT) & _MASK64
        return self.state

    def draw_real(self, ctx: RealContext, min_magnitude: BigReal | None = None) -> BigReal:
        """Uniform draw from ``[-0.9, 0.9]``, floored away from 0 on request."""
        while True:
            raw = self.next_raw()
            with localcontext(ctx.dec):
                unit = Decimal(raw) / _TWO64
                value = (2 * unit - 1) * DRAW_SPAN
            if min_magnitude is None or abs(value) >= min_magnitude:
                return value

    def draw_int(self, low: int, high: int) -> int:
        return low + self.next_raw() % (high - low + 1)


def _draw_point(
    entry: IdentityEntry, rng: _Rng, ctx: RealContext
) -> dict[str, BigReal]:
    point: dict[str, BigReal] = {}
    for spec in entry.parameters:
        if spec.kind == "int":
            point[spec.name] = Decimal(rng.draw_int(spec.low, spec.high))
        else:
            point[spec.name] = rng.draw_real(ctx, spec.min_magnitude)
    if entry.transform is not None:
        point = entry.transform(point, ctx)
    return point


# ---------------------------------------------------------------------------
# Entry 1: Rogers-Fine.


def _fine_times_one_minus_t(p: Params, ctx: RealContext) -> SeriesValue:
    """``(1-t) * F(a,b;t)`` with Fine's function summed naively."""
    sv = fine_F(p["a"], p["b"], p["t"], p["q"], ctx)
    with localcontext(ctx.dec):
        t = Decimal(p["t"])
        value = (1 - t) * sv.value
        tail = (1 + abs(t)) * sv.tail_bound + ctx.tail_floor(value)
    return SeriesValue(value, sv.terms_used, tail, "fine-naive")


def _rogers_fine_rhs(p: Params, ctx: RealContext) -> SeriesValue:
    """``sum_n ((aq;q)_n (atq/b;q)_n / ((bq;q)_n (tq;q)_n))
    (1 - a t q^(2n+1)) b^n t^n q^(n^2)``.

    The ``(atq/b;q)_n b^n`` block is folded into the running product
    ``prod_{j=1}^{n} (b - a t q^j)`` so ``b = 0`` needs no special casing.
    """
    with localcontext(ctx.dec):
        a, b, t, q = (
            +Decimal(p["a"]),
            +Decimal(p["b"]),
            +Decimal(p["t"]),
            +Decimal(p["q"]),
        )
        a_hat, b_hat, t_hat, q_hat = abs(a), abs(b), abs(t), abs(q)
        at = a * t
        state = {
            "coeff": Decimal(1),  # (aq;q)_n prod_j (b - a t q^j) / ((bq;q)_n (tq;q)_n)
            "t_pow": Decimal(1),  # t^n
            "q_sq": Decimal(1),   # q^(n^2)
            "q_odd": q,           # q^(2n+1)
            "at_q": at * q,       # a t q^(2n+1)
            "q_next": q,          # q^(n+1)
        }

        def term(n: int) -> BigReal:
            value = state["coeff"] * (1 - state["at_q"]) * state["t_pow"] * state["q_sq"]
            q_next = state["q_next"]
            state["coeff"] *= (
                (1 - a * q_next) * (b - at * q_next)
                / ((1 - b * q_next) * (1 - t * q_next))
            )
            state["t_pow"] *= t
            state["q_sq"] *= state["q_odd"]
            state["q_odd"] *= q * q
            state["at_q"] *= q * q
            state["q_next"] *= q
            return value

        extra = (
            t_hat
            * (1 + a_hat * q_hat)
            * (b_hat + a_hat * t_hat * q_hat)
            * (1 + a_hat * t_hat * q_hat**3)
            / ((1 - b_hat * q_hat) * (1 - t_hat * q_hat) * (1 - a_hat * t_hat * q_hat))
        )
        gen = TermGenerator(term, Theta(q_hat, step=2, shift=1, extra=extra))
        return sum_series(gen, 0, ctx, method_tag="rogers-theta")


# ---------------------------------------------------------------------------
# Entry 2: the x <-> t symmetry of sum t^n/(1 - x q^n).


def _symm_lhs(p: Params, ctx: RealContext) -> SeriesValue:
    return series_qxt_lhs(QxtParams(p["x"], p["t"], p["q"]), ctx)


def _symm_rhs(p: Params, ctx: RealContext) -> SeriesValue:
    return series_qxt_lhs(QxtParams(p["t"], p["x"], p["q"]), ctx)


# ---------------------------------------------------------------------------
# Entry 3: Fine's second transformation (12.2), corrected.


def _fine_122_rhs(p: Params, ctx: RealContext) -> SeriesValue:
    """``sum_n ((b/a;q)_n / ((bq;q)_n (tq;q)_n)) (-a t)^n q^((n^2+n)/2)``.

    ``(b/a;q)_n (-a t)^n`` is folded into ``prod_{j<n} (a - b q^j) (-t)^n``,
    which is exact at ``a = 0`` as well.
    """
    with localcontext(ctx.dec):
        a, b, t, q = (
            +Decimal(p["a"]),
            +Decimal(p["b"]),
            +Decimal(p["t"]),
            +Decimal(p["q"]),
        )
        a_hat, b_hat, t_hat, q_hat = abs(a), abs(b), abs(t), abs(q)
        state = {
            "coeff": Decimal(1),  # full summand at the current n
            "q_pow": Decimal(1),  # q^n
            "q_next": q,          # q^(n+1)
        }

        def term(n: int) -> BigReal:
            value = state["coeff"]
            q_next = state["q_next"]
            state["coeff"] *= (
                (a - b * state["q_pow"]) * (-t) * q_next
                / ((1 - b * q_next) * (1 - t * q_next))
            )
            state["q_pow"] *= q
            state["q_next"] *= q
            return value

        extra = (a_hat + b_hat) * t_hat / ((1 - b_hat * q_hat) * (1 - t_hat * q_hat))
        gen = TermGenerator(term, Theta(q_hat, step=1, shift=1, extra=extra))
        return sum_series(gen, 0, ctx, method_tag="fine-12.2")


# ---------------------------------------------------------------------------
# Entry 4: Fine's relation (16.3).


def _fine_163_lhs(p: Params, ctx: RealContext) -> SeriesValue:
    return fine_F(p["a"], p["b"], p["t"], p["q"], ctx)


def _fine_163_rhs(p: Params, ctx: RealContext) -> SeriesValue:
    """``((aq;q)_inf/(bq;q)_inf) sum_n ((b/a;q)_n/(q;q)_n) (aq)^n/(1-t q^n)``.

    ``(b/a;q)_n (aq)^n`` is folded into ``prod_{j<n}(a - b q^j) q^n``.
    """
    with localcontext(ctx.dec):
        a, b, t, q = (
            +Decimal(p["a"]),
            +Decimal(p["b"]),
            +Decimal(p["t"]),
            +Decimal(p["q"]),
        )
        a_hat, b_hat, t_hat, q_hat = abs(a), abs(b), abs(t), abs(q)
        poch_a = qpochhammer_inf(a * q, q, ctx)
        poch_b = qpochhammer_inf(b * q, q, ctx)
        state = {
            "coeff": 1 / (1 - t),  # full summand at the current n
            "q_pow": Decimal(1),   # q^n
            "q_next": q,           # q^(n+1)
        }

        def term(n: int) -> BigReal:
            value = state["coeff"]
            q_pow = state["q_pow"]
            q_next = state["q_next"]
            state["coeff"] *= (
                (a - b * q_pow) * q * (1 - t * q_pow)
                / ((1 - q_next) * (1 - t * q_next))
            )
            state["q_pow"] *= q
            state["q_next"] *= q
            return value

        def prefactor_sup(n: int) -> BigReal:
            num = (a_hat + b_hat * ipow(q_hat, n)) * (1 + t_hat * ipow(q_hat, n))
            den = (1 - ipow(q_hat, n + 1)) * (1 - t_hat * ipow(q_hat, n + 1))
            if den <= 0:
                return Decimal(0)
            return num / den

        gen = TermGenerator(term, Geometric(q_hat, prefactor_sup))
        series = sum_series(gen, 0, ctx, method_tag="fine-16.3")
        prefactor = poch_a.value / poch_b.value
        value = prefactor * series.value
        relative = poch_a.tail_bound / abs(poch_a.value) + poch_b.tail_bound / abs(
            poch_b.value
        )
        tail = (
            abs(prefactor) * series.tail_bound
            + abs(value) * relative
            + ctx.tail_floor(value)
        )
        terms = series.terms_used + poch_a.terms_used + poch_b.terms_used
    return SeriesValue(value, terms, tail, "fine-16.3")


# ---------------------------------------------------------------------------
# Entries 5 and 6: Pochhammer-denominator symmetry and Gosper's identity.


def _poch_series(t: BigReal, x: BigReal, q: BigReal, ctx: RealContext) -> SeriesValue:
    """``sum_{n>=0} t^n/(x;q)_{n+1}`` with a running denominator product."""
    with localcontext(ctx.dec):
        t, x, q = +Decimal(t), +Decimal(x), +Decimal(q)
        t_hat, x_hat, q_hat = abs(t), abs(x), abs(q)
        state = {
            "t_pow": Decimal(1),  # t^n
            "den": 1 - x,         # (x;q)_{n+1}
            "xq": x * q,          # x q^(n+1)
        }

        def term(n: int) -> BigReal:
            value = state["t_pow"] / state["den"]
            state["t_pow"] *= t
            state["den"] *= 1 - state["xq"]
            state["xq"] *= q
            return value

        def prefactor_sup(n: int) -> BigReal:
            den = 1 - x_hat * ipow(q_hat, n + 1)
            if den <= 0:
                return Decimal(0)
            return 1 / den

        gen = TermGenerator(term, Geometric(t_hat, prefactor_sup))
        return sum_series(gen, 0, ctx, method_tag="poch-series")


def _poch_symm_lhs(p: Params, ctx: RealContext) -> SeriesValue:
    return _poch_series(p["t"], p["x"], p["q"], ctx)


def _poch_symm_rhs(p: Params, ctx: RealContext) -> SeriesValue:
    return _poch_series(p["x"], p["t"], p["q"], ctx)


def _gosper_poch_lhs(p: Params, ctx: RealContext) -> SeriesValue:
    """``((t;q)_inf (x;q)_inf / (q;q)_inf) * sum_n t^n/(x;q)_{n+1}``."""
    with localcontext(ctx.dec):
        x, t, q = +Decimal(p["x"]), +Decimal(p["t"]), +Decimal(p["q"])
        poch_t = qpochhammer_inf(t, q, ctx)
        poch_x = qpochhammer_inf(x, q, ctx)
        poch_q = qpochhammer_inf(q, q, ctx)
        series = _poch_series(t, x, q, ctx)
        prefactor = poch_t.value * poch_x.value / poch_q.value
        value = prefactor * series.value
        relative = (
            poch_t.tail_bound / abs(poch_t.value)
            + poch_x.tail_bound / abs(poch_x.value)
            + poch_q.tail_bound / abs(poch_q.value)
        )
        tail = (
            abs(prefactor) * series.tail_bound
            + abs(value) * relative
            + ctx.tail_floor(value)
        )
        terms = (
            series.terms_used
            + poch_t.terms_used
            + poch_x.terms_used
            + poch_q.terms_used
        )
    return SeriesValue(value, terms, tail, "gosper-poch-lhs")


def _gosper_poch_rhs(p: Params, ctx: RealContext) -> SeriesValue:
    """``sum_{n>=0} ((t;q)_n (x;q)_n / (q;q)_n) q^n``."""
    with localcontext(ctx.dec):
        x, t, q = +Decimal(p["x"]), +Decimal(p["t"]), +Decimal(p["q"])
        x_hat, t_hat, q_hat = abs(x), abs(t), abs(q)
        state = {
            "coeff": Decimal(1),  # full summand at the current n
            "q_pow": Decimal(1),  # q^n
            "q_next": q,          # q^(n+1)
        }

        def term(n: int) -> BigReal:
            value = state["coeff"]
            q_pow = state["q_pow"]
            state["coeff"] *= (
                (1 - t * q_pow) * (1 - x * q_pow) * q / (1 - state["q_next"])
            )
            state["q_pow"] *= q
            state["q_next"] *= q
            return value

        def prefactor_sup(n: int) -> BigReal:
            num = (1 + t_hat * ipow(q_hat, n)) * (1 + x_hat * ipow(q_hat, n))
            den = 1 - ipow(q_hat, n + 1)
            if den <= 0:
                return Decimal(0)
            return num / den

        gen = TermGenerator(term, Geometric(q_hat, prefactor_sup))
        return sum_series(gen, 0, ctx, method_tag="gosper-poch-rhs")


# ---------------------------------------------------------------------------
# Entry 7: Osler-Hassen relations (6.5) = (6.6) = (6.7).


def _osler_single(
    alpha: BigReal,
    beta: BigReal,
    q: BigReal,
    a: int,
    b: int,
    c: int,
    d: int,
    ctx: RealContext,
    method_tag: str,
) -> SeriesValue:
    """``sum_{n>=0} alpha^n q^(d(an+b)) / (1 - beta q^(c(an+b)))``."""
    with localcontext(ctx.dec):
        alpha, beta, q = +Decimal(alpha), +Decimal(beta), +Decimal(q)
        alpha_hat, beta_hat, q_hat = abs(alpha), abs(beta), abs(q)
        state = {
            "a_pow": Decimal(1),           # alpha^n
            "num_pow": ipow(q, d * b),     # q^(d(an+b))
            "num_step": ipow(q, d * a),
            "den_pow": ipow(q, c * b),     # q^(c(an+b))
            "den_step": ipow(q, c * a),
        }

        def term(n: int) -> BigReal:
            value = state["a_pow"] * state["num_pow"] / (1 - beta * state["den_pow"])
            state["a_pow"] *= alpha
            state["num_pow"] *= state["num_step"]
            state["den_pow"] *= state["den_step"]
            return value

        def prefactor_sup(n: int) -> BigReal:
            here = beta_hat * ipow(q_hat, c * (a * n + b))
            after = beta_hat * ipow(q_hat, c * (a * (n + 1) + b))
            return (1 + here) / (1 - after)

        ratio = alpha_hat * ipow(q_hat, d * a)
        gen = TermGenerator(term, Geometric(ratio, prefactor_sup))
        return sum_series(gen, 0, ctx, method_tag=method_tag)


def _osler_lhs(p: Params, ctx: RealContext) -> SeriesValue:
    return _osler_single(
        p["alpha"], p["beta"], p["q"],
        int(p["a"]), int(p["b"]), int(p["c"]), int(p["d"]),
        ctx, "osler-6.5",
    )


def _osler_mid(p: Params, ctx: RealContext) -> SeriesValue:
    return _osler_single(
        p["beta"], p["alpha"], p["q"],
        int(p["c"]), int(p["d"]), int(p["a"]), int(p["b"]),
        ctx, "osler-6.6",
    )


def _osler_combined(p: Params, ctx: RealContext) -> SeriesValue:
    """Two-term combined form (6.7).

    ``sum_{n>=0} [ (alpha beta)^n q^((an+b)(cn+d)) / (1 - beta q^(c(an+b)))
    + alpha^(n+1) beta^n q^((a(n+1)+b)(cn+d)) / (1 - alpha q^(a(cn+d))) ]``,
    evaluated as two separately certified theta-class series (their sum can
    cancel at isolated indices, which would break a shared ratio bound).
    """
    with localcontext(ctx.dec):
        alpha, beta, q = +Decimal(p["alpha"]), +Decimal(p["beta"]), +Decimal(p["q"])
        a, b, c, d = int(p["a"]), int(p["b"]), int(p["c"]), int(p["d"])
        alpha_hat, beta_hat, q_hat = abs(alpha), abs(beta), abs(q)
        ab = alpha * beta
        ab_hat = alpha_hat * beta_hat
        two_ac = 2 * a * c

        state1 = {
            "coeff": Decimal(1),                     # (alpha beta)^n
            "e_pow": ipow(q, b * d),                 # q^((an+b)(cn+d))
            "e_step": ipow(q, a * c + a * d + b * c),
            "e_step2": ipow(q, two_ac),
            "den_pow": ipow(q, c * b),               # q^(c(an+b))
            "den_step": ipow(q, c * a),
        }

        def term1(n: int) -> BigReal:
            value = state1["coeff"] * state1["e_pow"] / (1 - beta * state1["den_pow"])
            state1["coeff"] *= ab
            state1["e_pow"] *= state1["e_step"]
            state1["e_step"] *= state1["e_step2"]
            state1["den_pow"] *= state1["den_step"]
            return value

        decay1 = Theta(
            q_hat,
            step=two_ac,
            shift=a * c + a * d + b * c,
            extra=ab_hat * (1 + beta_hat) / (1 - beta_hat),
        )
        part1 = sum_series(TermGenerator(term1, decay1), 0, ctx, method_tag="osler-6.7a")

        state2 = {
            "coeff": alpha,                          # alpha^(n+1) beta^n
            "e_pow": ipow(q, (a + b) * d),           # q^((a(n+1)+b)(cn+d))
            "e_step": ipow(q, two_ac + a * d + b * c),
            "e_step2": ipow(q, two_ac),
            "den_pow": ipow(q, a * d),               # q^(a(cn+d))
            "den_step": ipow(q, a * c),
        }

        def term2(n: int) -> BigReal:
            value = state2["coeff"] * state2["e_pow"] / (1 - alpha * state2["den_pow"])
            state2["coeff"] *= ab
            state2["e_pow"] *= state2["e_step"]
            state2["e_step"] *= state2["e_step2"]
            state2["den_pow"] *= state2["den_step"]
            return value

        decay2 = Theta(
            q_hat,
            step=two_ac,
            shift=two_ac + a * d + b * c,
            extra=ab_hat * (1 + alpha_hat) / (1 - alpha_hat),
        )
        part2 = sum_series(TermGenerator(term2, decay2), 0, ctx, method_tag="osler-6.7b")

        value = part1.value + part2.value
        tail = part1.tail_bound + part2.tail_bound
    return SeriesValue(
        value, part1.terms_used + part2.terms_used, tail, "osler-6.7"
    )


# ---------------------------------------------------------------------------
# Entry 8: the five-expression chain at a=b=c=d=1.


def _chain_geo(x: BigReal, t: BigReal, q: BigReal, ctx: RealContext) -> SeriesValue:
    """``sum_{n>=1} x^n q^n / (1 - t q^n)``."""
    with localcontext(ctx.dec):
        x, t, q = +Decimal(x), +Decimal(t), +Decimal(q)
        x_hat, t_hat, q_hat = abs(x), abs(t), abs(q)
        xq = x * q
        state = {"xq_pow": xq, "q_pow": q}

        def term(n: int) -> BigReal:
            value = state["xq_pow"] / (1 - t * state["q_pow"])
            state["xq_pow"] *= xq
            state["q_pow"] *= q
            return value

        def prefactor_sup(n: int) -> BigReal:
            den = 1 - t_hat * ipow(q_hat, n + 1)
            if den <= 0:
                return Decimal(0)
            return (1 + t_hat * ipow(q_hat, n)) / den

        gen = TermGenerator(term, Geometric(x_hat * q_hat, prefactor_sup))
        return sum_series(gen, 1, ctx, method_tag="chain-geo")


def _scale_series(
    sv: SeriesValue, scale: BigReal, ctx: RealContext, method_tag: str
) -> SeriesValue:
    with localcontext(ctx.dec):
        value = scale * sv.value
        tail = abs(scale) * sv.tail_bound + ctx.tail_floor(value)
    return SeriesValue(value, sv.terms_used, tail, method_tag)


def _chain_e1(p: Params, ctx: RealContext) -> SeriesValue:
    inner = _chain_geo(p["x"], p["t"], p["q"], ctx)
    return _scale_series(inner, Decimal(p["t"]), ctx, "chain-e1")


def _chain_e2(p: Params, ctx: RealContext) -> SeriesValue:
    inner = _chain_geo(p["t"], p["x"], p["q"], ctx)
    return _scale_series(inner, Decimal(p["x"]), ctx, "chain-e2")


def _chain_theta_parts(
    x: BigReal, t: BigReal, q: BigReal, ctx: RealContext, method_tag: str
) -> SeriesValue:
    """``sum_{n>=1} x^n t^n q^(n^2)/(1-t q^n)
    + x * sum_{n>=1} x^n t^n q^(n(n+1))/(1-x q^n)``."""
    with localcontext(ctx.dec):
        x, t, q = +Decimal(x), +Decimal(t), +Decimal(q)
        x_hat, t_hat, q_hat = abs(x), abs(t), abs(q)
        xt = x * t

        state_a = {"xt_pow": xt, "q_sq": q, "q_odd": q**3, "q_pow": q}

        def term_a(n: int) -> BigReal:
            value = state_a["xt_pow"] * state_a["q_sq"] / (1 - t * state_a["q_pow"])
            state_a["xt_pow"] *= xt
            state_a["q_sq"] *= state_a["q_odd"]
            state_a["q_odd"] *= q * q
            state_a["q_pow"] *= q
            return value

        decay_a = Theta(
            q_hat,
            step=2,
            shift=1,
            extra=x_hat * t_hat * (1 + t_hat * q_hat) / (1 - t_hat * q_hat * q_hat),
        )
        part_a = sum_series(TermGenerator(term_a, decay_a), 1, ctx, method_tag="chain-a")

        state_b = {"xt_pow": xt, "q_tri": q * q, "q_even": q**4, "q_pow": q}

        def term_b(n: int) -> BigReal:
            value = state_b["xt_pow"] * state_b["q_tri"] / (1 - x * state_b["q_pow"])
            state_b["xt_pow"] *= xt
            state_b["q_tri"] *= state_b["q_even"]
            state_b["q_even"] *= q * q
            state_b["q_pow"] *= q
            return value

        decay_b = Theta(
            q_hat,
            step=2,
            shift=2,
            extra=x_hat * t_hat * (1 + x_hat * q_hat) / (1 - x_hat * q_hat * q_hat),
        )
        part_b = sum_series(TermGenerator(term_b, decay_b), 1, ctx, method_tag="chain-b")

        value = part_a.value + x * part_b.value
        tail = part_a.tail_bound + x_hat * part_b.tail_bound + ctx.tail_floor(value)
    return SeriesValue(
        value, part_a.terms_used + part_b.terms_used, tail, method_tag
    )


def _chain_e3(p: Params, ctx: RealContext) -> SeriesValue:
    return _chain_theta_parts(p["x"], p["t"], p["q"], ctx, "chain-e3")


def _chain_e4(p: Params, ctx: RealContext) -> SeriesValue:
    return _chain_theta_parts(p["t"], p["x"], p["q"], ctx, "chain-e4")


def _chain_e5(p: Params, ctx: RealContext) -> SeriesValue:
    """``sum_{n>=1} (1 - x t q^(2n)) x^n t^n q^(n^2) /
    ((1-x q^n)(1-t q^n))`` (the symmetric form)."""
    with localcontext(ctx.dec):
        x, t, q = +Decimal(p["x"]), +Decimal(p["t"]), +Decimal(p["q"])
        x_hat, t_hat, q_hat = abs(x), abs(t), abs(q)
        xt = x * t
        state = {"xt_pow": xt, "q_sq": q, "q_odd": q**3, "q_pow": q, "q2_pow": q * q}

        def term(n: int) -> BigReal:
            numerator = 1 - xt * state["q2_pow"]
            denominator = (1 - x * state["q_pow"]) * (1 - t * state["q_pow"])
            value = numerator / denominator * state["xt_pow"] * state["q_sq"]
            state["xt_pow"] *= xt
            state["q_sq"] *= state["q_odd"]
            state["q_odd"] *= q * q
            state["q_pow"] *= q
            state["q2_pow"] *= q * q
            return value

        q2 = q_hat * q_hat
        sup_b = (1 + x_hat * t_hat * q2) / ((1 - x_hat * q_hat) * (1 - t_hat * q_hat))
        inf_b = (1 - x_hat * t_hat * q2) / ((1 + x_hat * q_hat) * (1 + t_hat * q_hat))
        decay = Theta(q_hat, step=2, shift=1, extra=x_hat * t_hat * sup_b / inf_b)
        return sum_series(TermGenerator(term, decay), 1, ctx, method_tag="chain-e5")


# ---------------------------------------------------------------------------
# Entry 9: the Knuth/Wrench bracket identity with a_n = x^n.


def _wrench_lhs(p: Params, ctx: RealContext) -> SeriesValue:
    """``sum_{n>=1} x^n q^n/(1-q^n)`` (linear route)."""
    with localcontext(ctx.dec):
        x, q = +Decimal(p["x"]), +Decimal(p["q"])
        x_hat, q_hat = abs(x), abs(q)
        xq = x * q
        state = {"xq_pow": xq, "q_pow": q}

        def term(n: int) -> BigReal:
            value = state["xq_pow"] / (1 - state["q_pow"])
            state["xq_pow"] *= xq
            state["q_pow"] *= q
            return value

        def prefactor_sup(n: int) -> BigReal:
            den = 1 - ipow(q_hat, n + 1)
            if den <= 0:
                return Decimal(0)
            return (1 + ipow(q_hat, n)) / den

        gen = TermGenerator(term, Geometric(x_hat * q_hat, prefactor_sup))
        return sum_series(gen, 1, ctx, method_tag="wrench-lhs")


def _wrench_decay(x_hat: BigReal, q_hat: BigReal) -> Theta:
    """Shared majorant for both bracket routes.

    The bracket equals ``(1 - x q^(2n))/((1-q^n)(1-x q^n))`` after closing
    the geometric inner sums, so the glambert-style sup/inf bound applies.
    """
    q2 = q_hat * q_hat
    sup_b = (1 + x_hat * q2) / ((1 - q_hat) * (1 - x_hat * q_hat))
    inf_b = (1 - x_hat * q2) / ((1 + q_hat) * (1 + x_hat * q_hat))
    return Theta(q_hat, step=2, shift=1, extra=x_hat * sup_b / inf_b)


def _wrench_closed(p: Params, ctx: RealContext) -> SeriesValue:
    """``sum_{n>=1} [1/(1-q^n) + x q^n/(1-x q^n)] x^n q^(n^2)``.

    The inner ``k``-sums of the Wrench bracket are closed geometrically
    (valid because ``a_n = x^n``).
    """
    with localcontext(ctx.dec):
        x, q = +Decimal(p["x"]), +Decimal(p["q"])
        x_hat, q_hat = abs(x), abs(q)
        state = {"x_pow": x, "q_sq": q, "q_odd": q**3, "q_pow": q}

        def term(n: int) -> BigReal:
            q_pow = state["q_pow"]
            xq = x * q_pow
            bracket = 1 / (1 - q_pow) + xq / (1 - xq)
            value = bracket * state["x_pow"] * state["q_sq"]
            state["x_pow"] *= x
            state["q_sq"] *= state["q_odd"]
            state["q_odd"] *= q * q
            state["q_pow"] *= q
            return value

        gen = TermGenerator(term, _wrench_decay(x_hat, q_hat))
        return sum_series(gen, 1, ctx, method_tag="wrench-closed")


def _wrench_truncated(p: Params, ctx: RealContext) -> SeriesValue:
    """``sum_{n>=1} [x^n + sum_{k>=1} (x^n + x^(n+k)) q^(kn)] q^(n^2)``.

    The inner sum is truncated once its geometric tail drops below
    ``10^-(working_digits+6)``; the leftover is absorbed by the reported
    tail's rounding floor.
    """
    with localcontext(ctx.dec):
        x, q = +Decimal(p["x"]), +Decimal(p["q"])
        x_hat, q_hat = abs(x), abs(q)
        inner_eps = Decimal(1).scaleb(-(ctx.working_digits + 6))
        state = {"x_pow": x, "q_sq": q, "q_odd": q**3, "q_pow": q}

        def term(n: int) -> BigReal:
            x_pow = state["x_pow"]
            q_pow = state["q_pow"]  # q^n
            bracket = +x_pow
            qk = q_pow              # q^(kn) for k = 1, 2, ...
            xk = x_pow * x          # x^(n+k)
            qn_hat = abs(q_pow)
            while True:
                bracket += (x_pow + xk) * qk
                qk *= q_pow
                xk *= x
                inner_tail = 2 * abs(x_pow) * abs(qk) / (1 - qn_hat)
                if inner_tail < inner_eps:
                    break
            value = bracket * state["q_sq"]
            state["x_pow"] *= x
            state["q_sq"] *= state["q_odd"]
            state["q_odd"] *= q * q
            state["q_pow"] *= q
            return value

        gen = TermGenerator(term, _wrench_decay(x_hat, q_hat))
        return sum_series(gen, 1, ctx, method_tag="wrench-truncated")


# ---------------------------------------------------------------------------
# Entry 10: the x/q swap.


def _xq_swap_lhs(p: Params, ctx: RealContext) -> SeriesValue:
    """``sum_{n>=0} x q^n/(1 - x q^n)``."""
    with localcontext(ctx.dec):
        x, q = +Decimal(p["x"]), +Decimal(p["q"])
        x_hat, q_hat = abs(x), abs(q)
        state = {"xq_pow": x}  # x q^n

        def term(n: int) -> BigReal:
            v = state["xq_pow"]
            state["xq_pow"] *= q
            return v / (1 - v)

        def prefactor_sup(n: int) -> BigReal:
            den = 1 - x_hat * ipow(q_hat, n + 1)
            if den <= 0:
                return Decimal(0)
            return (1 + x_hat * ipow(q_hat, n)) / den

        gen = TermGenerator(term, Geometric(q_hat, prefactor_sup))
        return sum_series(gen, 0, ctx, method_tag="xq-swap-lhs")


def _xq_swap_rhs(p: Params, ctx: RealContext) -> SeriesValue:
    """``sum_{n>=1} x^n/(1 - q^n)``."""
    with localcontext(ctx.dec):
        x, q = +Decimal(p["x"]), +Decimal(p["q"])
        x_hat, q_hat = abs(x), abs(q)
        state = {"x_pow": x, "q_pow": q}

        def term(n: int) -> BigReal:
            value = state["x_pow"] / (1 - state["q_pow"])
            state["x_pow"] *= x
            state["q_pow"] *= q
            return value

        def prefactor_sup(n: int) -> BigReal:
            den = 1 - ipow(q_hat, n + 1)
            if den <= 0:
                return Decimal(0)
            return (1 + ipow(q_hat, n)) / den

        gen = TermGenerator(term, Geometric(x_hat, prefactor_sup))
        return sum_series(gen, 1, ctx, method_tag="xq-swap-rhs")


# ---------------------------------------------------------------------------
# Entry 11: the bilateral Jordan-Kronecker forms.


def _jordan_transform(
    point: dict[str, BigReal], ctx: RealContext
) -> dict[str, BigReal]:
    """Scale the raw ``q`` draw into the wedge ``|q| < min(|x|, |t|)``."""
    with localcontext(ctx.dec):
        bound = min(abs(point["x"]), abs(point["t"]))
        q = point["q"] / DRAW_SPAN * bound * Decimal("0.95")
    return {"x": point["x"], "t": point["t"], "q": q}


def _jordan_side(fn: Callable[[BilateralParams, RealContext], SeriesValue]) -> SideFn:
    def side(p: Params, ctx: RealContext) -> SeriesValue:
        return fn(BilateralParams(p["x"], p["t"], p["q"]), ctx)

    return side


# ---------------------------------------------------------------------------
# Registry and checker.


def _certified(side: SideFn) -> SideFn:
    """Hold a side to an absolute-error budget of ``ctx.epsilon``.

    A side's certified tail can overshoot epsilon when its value is large or
    a Pochhammer prefactor amplifies series error (both happen as ``|q|``
    approaches 0.9).  In that case the side is re-evaluated at a context
    boosted by the observed deficit, which shrinks every tail contribution
    proportionally.
    """

    def wrapped(p: Params, ctx: RealContext) -> SeriesValue:
        sv = side(p, ctx)
        digits = ctx.target_digits
        for _round in range(ESCALATION_ROUNDS):
            if sv.tail_bound <= ctx.epsilon:
                return sv
            with localcontext(ctx.dec):
                deficit = sv.tail_bound / ctx.epsilon
                digits += int(deficit.log10().to_integral_value()) + ESCALATION_MARGIN
            sv = side(p, make_context(digits))
        if sv.tail_bound <= ctx.epsilon:
            return sv
        raise DivergenceError(
            f"side {side.__name__} could not reach epsilon after "
            f"{ESCALATION_ROUNDS} precision escalations (tail {sv.tail_bound:E})"
        )

    return wrapped


def _sides(*fns: SideFn) -> tuple[SideFn, ...]:
    return tuple(_certified(fn) for fn in fns)


_REAL = ParamSpec
_MIN_A = Decimal("0.05")


def _entries() -> tuple[IdentityEntry, ...]:
    return (
        IdentityEntry(
            name="rogers-fine",
            parameters=(
                _REAL("a"), _REAL("b"), _REAL("t"), _REAL("q"),
            ),
            sides=_sides(_fine_times_one_minus_t, _rogers_fine_rhs),
            anchor="Rogers-Fine identity, relation (14.1) of Fine",
        ),
        IdentityEntry(
            name="symm",
            parameters=(_REAL("x"), _REAL("t"), _REAL("q")),
            sides=_sides(_symm_lhs, _symm_rhs),
            anchor="symmetry of sum t^n/(1-x q^n) in x and t",
        ),
        IdentityEntry(
            name="fine-12.2",
            parameters=(
                _REAL("a"), _REAL("b"), _REAL("t"), _REAL("q"),
            ),
            sides=_sides(_fine_times_one_minus_t, _fine_122_rhs),
            anchor="Fine's second transformation (12.2), corrected to (b/a;q)_n",
        ),
        IdentityEntry(
            name="fine-16.3",
            parameters=(
                _REAL("a", min_magnitude=_MIN_A), _REAL("b"), _REAL("t"), _REAL("q"),
            ),
            sides=_sides(_fine_163_lhs, _fine_163_rhs),
            anchor="Fine's relation (16.3)",
        ),
        IdentityEntry(
            name="poch-symm",
            parameters=(_REAL("x"), _REAL("t"), _REAL("q")),
            sides=_sides(_poch_symm_lhs, _poch_symm_rhs),
            anchor="symmetry of sum t^n/(x;q)_{n+1}",
        ),
        IdentityEntry(
            name="gosper-poch",
            parameters=(_REAL("x"), _REAL("t"), _REAL("q")),
            sides=_sides(_gosper_poch_lhs, _gosper_poch_rhs),
            anchor="Pochhammer-quotient identity given by Gosper",
        ),
        IdentityEntry(
            name="osler",
            parameters=(
                _REAL("alpha"),
                _REAL("beta"),
                _REAL("q"),
                ParamSpec("a", kind="int", low=1, high=4),
                ParamSpec("b", kind="int", low=0, high=4),
                ParamSpec("c", kind="int", low=1, high=4),
                ParamSpec("d", kind="int", low=0, high=4),
            ),
            sides=_sides(_osler_lhs, _osler_mid, _osler_combined),
            anchor="Osler-Hassen relations (6.5), (6.6), (6.7)",
        ),
        IdentityEntry(
            name="osler-1111",
            parameters=(_REAL("x"), _REAL("t"), _REAL("q")),
            sides=_sides(_chain_e1, _chain_e2, _chain_e3, _chain_e4, _chain_e5),
            anchor="five-expression chain at a=b=c=d=1",
        ),
        IdentityEntry(
            name="knuth-wrench",
            parameters=(_REAL("x"), _REAL("q")),
            sides=_sides(_wrench_lhs, _wrench_closed, _wrench_truncated),
            anchor="Knuth/Wrench bracket identity with a_n = x^n",
        ),
        IdentityEntry(
            name="xq-swap",
            parameters=(_REAL("x"), _REAL("q")),
            sides=_sides(_xq_swap_lhs, _xq_swap_rhs),
            anchor="swap relation sum x q^n/(1-x q^n) = sum x^n/(1-q^n)",
        ),
        IdentityEntry(
            name="jordan-forms",
            parameters=(
                _REAL("x", min_magnitude=_MIN_A),
                _REAL("t", min_magnitude=_MIN_A),
                _REAL("q"),
            ),
            sides=_sides(
                _jordan_side(jordan_direct),
                _jordan_side(jordan_theta),
                _jordan_side(jordan_form1),
                _jordan_side(jordan_form2),
            ),
            anchor="Jordan-Kronecker function: direct sum and three forms",
            transform=_jordan_transform,
        ),
    )


_REGISTRY: tuple[IdentityEntry, ...] | None = None


def registry() -> list[IdentityEntry]:
    """All registered identities, in fixed report order."""
    global _REGISTRY
    if _REGISTRY is None:
        _REGISTRY = _entries()
    return list(_REGISTRY)


def get_entry(name: str) -> IdentityEntry:
    """Look up one registry entry by name."""
    for entry in registry():
        if entry.name == name:
            return entry
    raise UnknownIdentityError(f"unknown identity: {name!r}")


def check_identity(
    name: str, trials: int, seed: int, ctx: RealContext
) -> IdentityReport:
    """Sample an identity and report the worst pairwise side deviation.

    Each trial seeds its own generator substream with ``seed + trial``, so
    the report is independent of evaluation order.  Points rejected by
    domain or pole checks are redrawn from the same substream, up to
    :data:`MAX_RESAMPLES` attempts.

    Raises:
        UnknownIdentityError: if ``name`` is not registered.
        DomainError: if ``trials < 1`` or some trial exhausts its
            resampling budget.
    """
    entry = get_entry(name)
    if not isinstance(trials, int) or isinstance(trials, bool) or trials < 1:
        raise DomainError(f"trials must be a positive integer, got {trials!r}")
    worst = Decimal(0)
    worst_point: dict[str, BigReal] = {}
    for trial in range(trials):
        rng = _Rng(seed + trial)
        point = None
        values: list[SeriesValue] = []
        for _attempt in range(MAX_RESAMPLES):
            candidate = _draw_point(entry, rng, ctx)
            try:
                values = [side(candidate, ctx) for side in entry.sides]
            except (DomainError, PoleError):
                continue
            point = candidate
            break
        if point is None:
            raise DomainError(
                f"all {MAX_RESAMPLES} sampled points rejected for {name!r}"
            )
        with localcontext(ctx.dec):
            deviation = max(
                abs(first.value - second.value)
                for i, first in enumerate(values)
                for second in values[i + 1 :]
            )
        if deviation > worst:
            worst = deviation
            worst_point = point
    threshold = 4 * ctx.epsilon
    return IdentityReport(
        name=name,
        trials=trials,
        seed=seed,
        worst_deviation=worst,
        worst_point=_format_point(worst_point, ctx),
        passed=worst <= threshold,
    )


def _format_point(point: Mapping[str, BigReal], ctx: RealContext) -> dict[str, str]:
    formatted = {}
    for key, value in point.items():
        if value == value.to_integral_value() and abs(value) <= 4:
            formatted[key] = str(int(value))
        else:
            formatted[key] = format_real(value, ctx)
    return formatted


def check_gosper_matrix(
    ctx: RealContext, seed: int = 0, factors: int | None = None
) -> IdentityReport:
    """Exchange-relation sweep plus matrix-product comparison.

    Sweeps ``exchange_check`` over ``(k, n) in [1,10] x [0,10]`` and
    ``q in {0.3, -0.3, 0.7}``, then compares the left and right matrix
    products (by default long enough for certified convergence) against each
    other and the Lambert-series oracle at ``q = 0.3``.  All residuals fold
    into ``worst_deviation`` under the usual ``4*epsilon`` bar.
    """
    with localcontext(ctx.dec):
        worst = Decimal(0)
        worst_point: dict[str, str] = {}
        checks = 0
        for q_text in ("0.3", "-0.3", "0.7"):
            q = ctx.dec.create_decimal(q_text)
            for k in range(1, 11):
                for n in range(0, 11):
                    residual = exchange_check(k, n, q, ctx)
                    checks += 1
                    if residual > worst:
                        worst = residual
                        worst_point = {"check": "exchange", "k": str(k), "n": str(n), "q": q_text}
        q = ctx.dec.create_decimal("0.3")
        count = factors if factors is not None else product_factor_count(q, ctx)
        left = product_upper_right(LEFT, count, q, ctx)
        right = product_upper_right(RIGHT, count, q, ctx)
        oracle = lambert_naive(q, ctx).value
        for label, diff in (
            ("left-vs-right", abs(left - right)),
            ("left-vs-lambert", abs(left - oracle)),
            ("right-vs-lambert", abs(right - oracle)),
        ):
            checks += 1
            if diff > worst:
                worst = diff
                worst_point = {
                    "check": label,
                    "q": "0.3",
                    "factors": str(count),
                }
        threshold = 4 * ctx.epsilon
    return IdentityReport(
        name=GOSPER_MATRIX_NAME,
        trials=checks,
        seed=seed,
        worst_deviation=worst,
        worst_point=worst_point,
        passed=worst <= threshold,
    )
