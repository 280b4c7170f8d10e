"""Horadam sequences and the reciprocal-sum routes."""

from __future__ import annotations

from decimal import Decimal, localcontext

import pytest

from qlambert import (
    DomainError,
    HoradamSequence,
    fib_even_alt,
    fib_even_theta,
    fib_odd_alt,
    fib_odd_theta,
    fib_recip_gosper,
    fibonacci,
    horadam_term,
    lucas_G,
    make_context,
    recip_sum_fast,
    recip_sum_naive,
)

from _oracles import (
    FIB_EVEN,
    FIB_ODD,
    JACOBSTHAL,
    LAMBERT_HALF,
    PELL,
    PSI,
    RECIP_2_3,
    RECIP_3_1,
    RECIP_3_2,
    RECIP_4_M3,
)

RECIP_ORACLES = {
    (1, 1): PSI,
    (2, 1): PELL,
    (1, 2): JACOBSTHAL,
    (3, 1): RECIP_3_1,
    (3, 2): RECIP_3_2,
    (2, 3): RECIP_2_3,
    (3, -2): LAMBERT_HALF,
    (4, -3): RECIP_4_M3,
}


class TestHoradamSequence:
    def test_fibonacci_terms(self) -> None:
        seq = HoradamSequence(1, 1)
        assert [horadam_term(seq, n) for n in range(8)] == [0, 1, 1, 2, 3, 5, 8, 13]

    def test_pell_terms(self) -> None:
        seq = HoradamSequence(2, 1)
        assert [horadam_term(seq, n) for n in range(6)] == [0, 1, 2, 5, 12, 29]

    def test_mersenne_terms_from_3_minus2(self) -> None:
        seq = HoradamSequence(3, -2)
        assert [horadam_term(seq, n) for n in range(6)] == [0, 1, 3, 7, 15, 31]

    @pytest.mark.parametrize(
        ("m1", "m2"), [(0, 1), (-1, 1), (1, 0), (1, -1), (2, -1), (True, 1), (1, 1.0)]
    )
    def test_invalid_parameters_rejected(self, m1, m2) -> None:
        with pytest.raises(DomainError):
            HoradamSequence(m1, m2)

    def test_roots_multiply_to_minus_m2(self, ctx30) -> None:
        seq = HoradamSequence(2, 3)
        alpha, beta = seq.roots(ctx30)
        with localcontext(ctx30.dec):
            assert abs(alpha * beta + 3) < Decimal("1e-38")
            assert abs(alpha + beta - 2) < Decimal("1e-38")

    def test_fibonacci_and_lucas_helpers(self) -> None:
        assert [fibonacci(n) for n in range(8)] == [0, 1, 1, 2, 3, 5, 8, 13]
        assert [lucas_G(n) for n in range(1, 9)] == [1, 3, 4, 7, 11, 18, 29, 47]


class TestReciprocalSums:
    @pytest.mark.parametrize(("m1", "m2"), sorted(RECIP_ORACLES))
    def test_naive_route_matches_oracles(self, m1: int, m2: int, ctx30) -> None:
        sv = recip_sum_naive(HoradamSequence(m1, m2), ctx30)
        assert abs(sv.value - RECIP_ORACLES[(m1, m2)]) <= sv.tail_bound

    @pytest.mark.parametrize(("m1", "m2"), sorted(RECIP_ORACLES))
    def test_fast_route_matches_oracles(self, m1: int, m2: int, ctx30) -> None:
        sv = recip_sum_fast(HoradamSequence(m1, m2), ctx30)
        assert abs(sv.value - RECIP_ORACLES[(m1, m2)]) <= sv.tail_bound

    def test_routes_agree_at_fifty_digits(self, ctx50) -> None:
        for m1, m2 in ((1, 1), (2, 1), (3, 2)):
            seq = HoradamSequence(m1, m2)
            naive = recip_sum_naive(seq, ctx50)
            fast = recip_sum_fast(seq, ctx50)
            assert abs(naive.value - fast.value) <= naive.tail_bound + fast.tail_bound

    def test_fast_route_rejects_near_degenerate_ratio(self, ctx30) -> None:
        # beta/alpha approaches -1 as m2 grows; past the gap the theta
        # rearrangement converges too slowly to certify.
        with pytest.raises(DomainError):
            recip_sum_fast(HoradamSequence(1, 10**13), ctx30)

    def test_naive_route_survives_near_degenerate_ratio(self, ctx30) -> None:
        sv = recip_sum_naive(HoradamSequence(1, 10**13), ctx30)
        assert sv.tail_bound < 2 * ctx30.epsilon


class TestGosperPartialSums:
    def test_one_term_is_exactly_three(self, ctx30) -> None:
        assert fib_recip_gosper(1, ctx30).value == 3

    def test_two_terms_are_exactly_41_twelfths(self, ctx30) -> None:
        sv = fib_recip_gosper(2, ctx30)
        with localcontext(ctx30.dec):
            expected = Decimal(41) / 12
        assert abs(sv.value - expected) < Decimal("1e-38")

    def test_six_terms_land_within_a_millionth(self, ctx30) -> None:
        sv = fib_recip_gosper(6, ctx30)
        assert abs(sv.value - PSI) < Decimal("1e-6")

    def test_twelve_terms_reach_thirty_digits(self, ctx30) -> None:
        sv = fib_recip_gosper(12, ctx30)
        assert abs(sv.value - PSI) < Decimal("1e-30")

    def test_uncorrected_variant_breaks_the_identity(self, ctx30) -> None:
        sv = fib_recip_gosper(6, ctx30, corrected=False)
        assert abs(sv.value - PSI) > Decimal("1e-3")

    def test_invalid_term_counts_rejected(self, ctx30) -> None:
        with pytest.raises(DomainError):
            fib_recip_gosper(0, ctx30)


class TestSplits:
    def test_even_theta_matches_oracle(self, ctx30) -> None:
        sv = fib_even_theta(ctx30)
        assert abs(sv.value - FIB_EVEN) <= sv.tail_bound

    def test_odd_theta_matches_oracle(self, ctx30) -> None:
        sv = fib_odd_theta(ctx30)
        assert abs(sv.value - FIB_ODD) <= sv.tail_bound

    def test_splits_sum_to_psi(self, ctx50) -> None:
        even = fib_even_theta(ctx50)
        odd = fib_odd_theta(ctx50)
        with localcontext(ctx50.dec):
            total = even.value + odd.value
        assert abs(total - PSI) <= even.tail_bound + odd.tail_bound

    def test_even_alternate_with_scaling_matches_even_split(self, ctx30) -> None:
        sv = fib_even_alt(True, ctx30)
        assert abs(sv.value - FIB_EVEN) <= sv.tail_bound

    def test_even_alternate_without_scaling_is_far_off(self, ctx30) -> None:
        sv = fib_even_alt(False, ctx30)
        assert abs(sv.value - FIB_EVEN) > Decimal("0.5")

    def test_odd_alternate_matches_odd_split(self, ctx30) -> None:
        sv = fib_odd_alt(ctx30)
        assert abs(sv.value - FIB_ODD) <= sv.tail_bound

    def test_splits_hold_at_higher_precision(self) -> None:
        ctx = make_context(60)
        for fn, oracle in ((fib_even_theta, FIB_EVEN), (fib_odd_theta, FIB_ODD)):
            sv = fn(ctx)
            assert abs(sv.value - oracle) < Decimal("1e-59")
