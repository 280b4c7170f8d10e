"""Gosper's 2x2 matrix family: entries, exchange relation, products."""

from __future__ import annotations

from decimal import Decimal, localcontext

import pytest

from qlambert import (
    DomainError,
    Mat2,
    exchange_check,
    lambert_naive,
    make_context,
    matK,
    matN,
    product_factor_count,
    product_upper_right,
)
from qlambert.gospermat import LEFT, RIGHT


class TestMatrixEntries:
    def test_matK_small_point(self, ctx30) -> None:
        q = Decimal("0.1")
        mat = matK(1, 0, q, ctx30)
        with localcontext(ctx30.dec):
            expected_u = q * (1 - q**2) / ((1 - q) * (1 - q))
        assert mat.p == Decimal("0.001")
        assert abs(mat.u - expected_u) < Decimal("1e-38")

    def test_matN_small_point(self, ctx30) -> None:
        mat = matN(1, 1, Decimal("0.5"), ctx30)
        with localcontext(ctx30.dec):
            expected_u = Decimal("0.5") / (1 - Decimal("0.25"))
        assert mat.p == Decimal("0.5")
        assert abs(mat.u - expected_u) < Decimal("1e-38")

    def test_matK_limit_in_n(self, ctx30) -> None:
        q = Decimal("0.3")
        mat = matK(2, None, q, ctx30)
        with localcontext(ctx30.dec):
            expected_u = q / (1 - q**2)
        assert mat.p == 0
        assert abs(mat.u - expected_u) < Decimal("1e-38")

    def test_matN_limit_in_k(self, ctx30) -> None:
        q = Decimal("0.3")
        mat = matN(None, 5, q, ctx30)
        assert mat.p == 0
        assert mat.u == q

    def test_invalid_indices_rejected(self, ctx30) -> None:
        q = Decimal("0.3")
        with pytest.raises(DomainError):
            matK(0, 1, q, ctx30)
        with pytest.raises(DomainError):
            matN(1, -1, q, ctx30)

    def test_unit_q_rejected(self, ctx30) -> None:
        with pytest.raises(DomainError):
            matK(1, 1, Decimal(1), ctx30)


class TestMat2:
    def test_product_rule(self) -> None:
        a = Mat2(Decimal(2), Decimal(3))
        b = Mat2(Decimal(5), Decimal(7))
        ab = a.mul(b)
        assert (ab.p, ab.u) == (Decimal(10), Decimal(17))

    def test_multiplication_is_associative(self) -> None:
        a = Mat2(Decimal("0.5"), Decimal(1))
        b = Mat2(Decimal(3), Decimal("-2"))
        c = Mat2(Decimal("0.25"), Decimal(4))
        left = a.mul(b).mul(c)
        right = a.mul(b.mul(c))
        assert (left.p, left.u) == (right.p, right.u)


class TestExchangeRelation:
    @pytest.mark.parametrize("q_text", ["0.3", "-0.3", "0.7"])
    def test_residual_below_rounding_allowance(self, q_text: str, ctx30) -> None:
        q = Decimal(q_text)
        allowance = Decimal(1).scaleb(-(ctx30.working_digits - 6))
        for k in range(1, 11):
            for n in range(0, 11):
                assert exchange_check(k, n, q, ctx30) <= allowance

    def test_zero_q_residual_is_zero(self, ctx30) -> None:
        assert exchange_check(3, 2, Decimal(0), ctx30) == 0


class TestProducts:
    def test_left_product_matches_closed_form(self, ctx40) -> None:
        q = Decimal("0.3")
        count = 20
        value = product_upper_right(LEFT, count, q, ctx40)
        with localcontext(ctx40.dec):
            expected = q ** (count + 1) / (1 - q)
            power = Decimal(1)
            for m in range(1, count + 1):
                power *= q
                expected += power / (1 - power)
        assert abs(value - expected) < Decimal(1).scaleb(-(ctx40.working_digits - 8))

    def test_right_product_matches_closed_form(self, ctx40) -> None:
        q = Decimal("0.3")
        count = 20
        value = product_upper_right(RIGHT, count, q, ctx40)
        with localcontext(ctx40.dec):
            expected = q ** ((count + 1) ** 2)
            for k in range(1, count + 1):
                qk = q**k
                expected += q ** (k * k) * (1 + qk) / (1 - qk)
        assert abs(value - expected) < Decimal(1).scaleb(-(ctx40.working_digits - 8))

    def test_long_products_converge_to_lambert(self, ctx40) -> None:
        q = Decimal("0.3")
        oracle = lambert_naive(q, ctx40)
        for side in (LEFT, RIGHT):
            value = product_upper_right(side, 50, q, ctx40)
            assert abs(value - oracle.value) < Decimal("1e-30")

    def test_factor_count_clears_epsilon(self, ctx40) -> None:
        q = Decimal("0.3")
        count = product_factor_count(q, ctx40)
        assert count == 85
        with localcontext(ctx40.dec):
            assert abs(q) ** (count - 8) < ctx40.epsilon

    def test_invalid_product_arguments_rejected(self, ctx30) -> None:
        with pytest.raises(DomainError):
            product_upper_right("middle", 10, Decimal("0.3"), ctx30)
        with pytest.raises(DomainError):
            product_upper_right(LEFT, 0, Decimal("0.3"), ctx30)
        with pytest.raises(DomainError):
            product_upper_right(LEFT, 10, Decimal(0), ctx30)


def test_environment_uses_distinct_side_labels() -> None:
    assert LEFT != RIGHT


def test_products_at_fifty_digits() -> None:
    ctx = make_context(50)
    q = Decimal("0.5")
    count = product_factor_count(q, ctx)
    left = product_upper_right(LEFT, count, q, ctx)
    right = product_upper_right(RIGHT, count, q, ctx)
    with localcontext(ctx.dec):
        assert abs(left - right) < Decimal(1).scaleb(-(ctx.working_digits - 10))