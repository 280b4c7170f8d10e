"""Context construction, parsing, formatting, and square roots."""

from __future__ import annotations

from decimal import Decimal

import pytest

from qlambert import DomainError, format_real, make_context, parse_real, sqrt


class TestMakeContext:
    def test_thirty_digit_context_fields(self) -> None:
        ctx = make_context(30)
        assert ctx.target_digits == 30
        assert ctx.guard_digits == 11
        assert ctx.working_digits == 41
        assert ctx.epsilon == Decimal(1).scaleb(-30)
        assert ctx.dec.prec == 41

    def test_guard_digits_grow_with_target(self) -> None:
        assert make_context(10).guard_digits == 10
        assert make_context(100).guard_digits == 15
        assert make_context(1000).guard_digits == 60

    @pytest.mark.parametrize("bad", [9, 0, -5])
    def test_targets_below_minimum_rejected(self, bad: int) -> None:
        with pytest.raises(DomainError):
            make_context(bad)

    @pytest.mark.parametrize("bad", ["30", 30.0, True, None])
    def test_non_integer_targets_rejected(self, bad: object) -> None:
        with pytest.raises(DomainError):
            make_context(bad)  # type: ignore[arg-type]

    def test_pole_tolerance_scales_with_working_digits(self) -> None:
        ctx = make_context(30)
        assert ctx.pole_tolerance() == Decimal(1).scaleb(-20)

    def test_tail_floor_tracks_value_magnitude(self) -> None:
        ctx = make_context(30)
        assert ctx.tail_floor(Decimal("0.5")) == Decimal(1).scaleb(-35)
        assert ctx.tail_floor(Decimal(1000)) == Decimal(1000).scaleb(-35)


class TestParseReal:
    def test_decimal_literals(self, ctx30) -> None:
        assert parse_real("0.25", ctx30) == Decimal("0.25")
        assert parse_real("-0.7", ctx30) == Decimal("-0.7")
        assert parse_real(".5", ctx30) == Decimal("0.5")
        assert parse_real("+3", ctx30) == Decimal(3)

    def test_rational_literals_divide_exactly(self, ctx30) -> None:
        assert parse_real("1/2", ctx30) == Decimal("0.5")
        assert parse_real("-3/4", ctx30) == Decimal("-0.75")
        third = parse_real("1/3", ctx30)
        assert abs(third * 3 - 1) < Decimal(1).scaleb(-39)

    def test_unicode_minus_accepted(self, ctx30) -> None:
        assert parse_real("−0.5", ctx30) == Decimal("-0.5")

    @pytest.mark.parametrize("bad", ["", "abc", "1/0", "1//2", "0x1", "1e3", "nan"])
    def test_malformed_literals_rejected(self, bad: str, ctx30) -> None:
        with pytest.raises(DomainError):
            parse_real(bad, ctx30)


class TestFormatReal:
    def test_exact_significant_digit_count(self, ctx30) -> None:
        text = format_real(Decimal(1) / 3, ctx30)
        assert text == "0.333333333333333333333333333333"

    def test_short_digit_override(self, ctx30) -> None:
        psi = Decimal("3.3598856662431775531720113029189")
        assert format_real(psi, ctx30, 7) == "3.359886"
        assert format_real(psi, ctx30, 5) == "3.3599"

    def test_round_half_even_at_the_cut(self, ctx30) -> None:
        assert format_real(Decimal("0.125"), ctx30, 2) == "0.12"
        assert format_real(Decimal("0.135"), ctx30, 2) == "0.14"

    def test_zero_and_negative_values(self, ctx30) -> None:
        assert format_real(Decimal(0), ctx30, 3) == "0.00"
        assert format_real(Decimal("-1.5"), ctx30, 3) == "-1.50"

    def test_nonpositive_digit_count_rejected(self, ctx30) -> None:
        with pytest.raises(DomainError):
            format_real(Decimal(1), ctx30, 0)


class TestSqrt:
    def test_five_squares_back(self, ctx30) -> None:
        root = sqrt(Decimal(5), ctx30)
        assert abs(root * root - 5) < Decimal(1).scaleb(-39)

    def test_negative_rejected(self, ctx30) -> None:
        with pytest.raises(DomainError):
            sqrt(Decimal(-1), ctx30)
