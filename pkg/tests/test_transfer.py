import pytest

from thetacalc.errors import DomainError
from thetacalc.laurent import Monomial, parse_series, set_q_to_one
from thetacalc.transfer import (
    ORACLE_SIGN_RAW,
    ORACLE_SIGN_RESOLVED,
    BiWeight,
    SeriesMonomial,
    TransferParams,
    base_case_series,
    check_difference_equation,
    consistency_report,
    gen_series_closed,
    gen_series_sum,
    gen_series_sum_q,
    invariants_oracle,
    leading_exponent,
    normalization_ratio,
    series_monomial_ratio,
    transfer_three_point,
    transfer_two_point,
    zeta_base_identity,
    zeta_normalized,
)


class TestTwoPoint:
    def test_m_zero_level_one(self):
        assert transfer_two_point(TransferParams(1, 0, -1)) == BiWeight(-1, 1)

    def test_vanishing_branch(self):
        assert transfer_two_point(TransferParams(1, 0, 5)) is None

    def test_m_zero_level_two(self):
        assert transfer_two_point(TransferParams(2, 1, -6)) == BiWeight(0, 2)

    def test_negative_degree(self):
        assert transfer_two_point(TransferParams(1, -1, 1)) == BiWeight(-4, 1)

    def test_rejects_nonpositive_level(self):
        with pytest.raises(DomainError):
            TransferParams(0, 0, 0)

    def test_m_attribute(self):
        assert TransferParams(2, 1, -6).m == 0
        assert TransferParams(1, 0, 5).m == 6


class TestInvariantsOracle:
    def test_vanishing(self):
        assert invariants_oracle(TransferParams(1, 0, 5)) is None

    def test_matches_closed_form_at_m_zero(self):
        p = TransferParams(1, 0, -1)
        assert invariants_oracle(p) == transfer_two_point(p)

    def test_level_three(self):
        p = TransferParams(3, 2, -15)
        assert p.m == 0
        assert invariants_oracle(p) == transfer_two_point(p)

    def test_presence_agrees_for_both_signs(self):
        for a in (1, 2, 3):
            for d in range(-3, 4):
                for n in range(-12, 13):
                    p = TransferParams(a, d, n)
                    closed = transfer_two_point(p)
                    for sign in (ORACLE_SIGN_RESOLVED, ORACLE_SIGN_RAW):
                        got = invariants_oracle(p, sign)
                        assert (got is None) == (closed is None)

    def test_raw_sign_disagrees_exactly_when_m_negative(self):
        disagreements = []
        for a in (1, 2):
            for d in range(-3, 4):
                for n in range(-10, 11):
                    p = TransferParams(a, d, n)
                    closed = transfer_two_point(p)
                    raw = invariants_oracle(p, ORACLE_SIGN_RAW)
                    if closed is None:
                        continue
                    if closed != raw:
                        disagreements.append(p)
                        # they differ by twice the mixed term, in the first slot
                        assert raw.u_weight == closed.u_weight
                        assert raw.q_weight - closed.q_weight == -2 * (p.d + 1) * p.m
                        assert p.m < 0 and p.d != -1
        assert disagreements  # the raw convention genuinely differs somewhere


class TestSumSeries:
    def test_level_one_weight_zero(self):
        s = gen_series_sum(1, 0, 3)
        assert s == parse_series("z^-1 + z^-2*u^-2 + z^-3*u^-4 + O(z^-4)")
        assert s.max_z == -1

    def test_leading_degree_solves_presence(self):
        # a=1, n=-2: first present degree is d=0 with m=-1
        assert transfer_two_point(TransferParams(1, 0, -2)) is not None
        assert transfer_two_point(TransferParams(1, 1, -2)) is None
        s = gen_series_sum(1, -2, 2)
        assert s == parse_series("1 + z^-1*u^-2 + O(z^-2)")

    def test_support_bound(self):
        for a in (1, 2, 3):
            for n in range(-8, 9):
                s = gen_series_sum(a, n, 4)
                assert s.max_z == leading_exponent(a, n)
                assert not s.coefficient(s.max_z).is_zero()
                assert transfer_two_point(TransferParams(a, s.max_z + 1, n)) is None

    def test_q_weights(self):
        s = gen_series_sum_q(1, 0, 2)
        assert s == parse_series("z^-1*q^-4 + z^-2*u^-2*q^-6 + O(z^-3)")


class TestClosedSeries:
    def test_level_one_weight_zero(self):
        assert gen_series_closed(1, 0, 2) == parse_series("z^-1*u^-1 + z^-2*u^-3 + O(z^-3)")

    def test_level_one_weight_one(self):
        assert gen_series_closed(1, 1, 2) == parse_series("z^-1 + z^-2*u^-2 + O(z^-3)")

    def test_level_two(self):
        assert gen_series_closed(2, 2, 1) == parse_series("z^-1 + O(z^-2)")


class TestBaseCase:
    def test_top_of_range(self):
        assert base_case_series(1, 1, 2) == parse_series("1 + z^-1*u^-2 + O(z^-2)")

    def test_middle(self):
        assert base_case_series(1, 0, 2) == parse_series("u^-1 + z^-1*u^-3 + O(z^-2)")

    def test_level_two_negative(self):
        assert base_case_series(2, -1, 1) == parse_series("u^-3 + O(z^-1)")

    def test_rejects_out_of_range(self):
        with pytest.raises(DomainError):
            base_case_series(1, 2, 3)
        with pytest.raises(DomainError):
            base_case_series(2, -2, 3)


class TestNormalization:
    def test_fixed_monomial_per_level(self):
        for a in (1, 2):
            got = normalization_ratio(a, (-4, 4), 6)
            assert got == SeriesMonomial(0, Monomial(u=-a))

    def test_self_ratio_is_one(self):
        s = gen_series_sum(1, 0, 5)
        assert series_monomial_ratio(s, s) == SeriesMonomial(0, Monomial())

    def test_base_vs_sum_shift(self):
        # the small-weight identity sits one z step above the sum presentation
        for a in (1, 2):
            for n in range(-a + 1, a + 1):
                r = series_monomial_ratio(base_case_series(a, n, 5), gen_series_sum(a, n, 5))
                assert r == SeriesMonomial(1, Monomial(u=-a))


class TestDifferenceEquation:
    def test_sum_example(self):
        assert check_difference_equation(gen_series_sum, 1, 0, 8)

    def test_closed_example(self):
        assert check_difference_equation(gen_series_closed, 1, -3, 8)

    def test_sum_level_three(self):
        assert check_difference_equation(gen_series_sum, 3, 5, 8)


class TestZeta:
    def test_period_invariance(self):
        a, n = 1, 0
        assert zeta_normalized(a, n, 6) == zeta_normalized(a, n + 2 * a, 6)

    def test_base_identity_expansion(self):
        assert zeta_base_identity(1, 1, 2) == parse_series("1 + zeta^-2*u^-2 + O(zeta^-4)")

    def test_single_leading_monomial(self):
        for n in (-3, 0, 4):
            s = zeta_normalized(2, n, 1)
            assert len(s.coeffs) == 1

    def test_relation_to_base_identity(self):
        # zeta-normalized sum = u^a zeta^-2a times the displayed identity
        for a in (1, 2):
            for n in range(-a + 1, a + 1):
                got = series_monomial_ratio(
                    zeta_normalized(a, n, 6), zeta_base_identity(a, n, 6)
                )
                assert got == SeriesMonomial(-2 * a, Monomial(u=a))


class TestThreePoint:
    def test_factorization_example(self):
        assert transfer_three_point(1, 2, -2, 2) == gen_series_sum(1, 0, 2)

    def test_symmetry(self):
        for m, n in ((3, -1), (0, 5), (-2, -2)):
            a = 2
            s = transfer_three_point(a, m, n, 4)
            t = transfer_three_point(a, n, m, 4)
            assert s.coeffs == t.coeffs and s.max_z == t.max_z

    def test_level_two(self):
        assert transfer_three_point(2, 1, 1, 3) == gen_series_sum(2, 2, 3)

    def test_difference_equation_each_slot(self):
        a = 1
        for m, n in ((2, 1), (-3, 0)):
            first = transfer_three_point(a, m + 2 * a, n, 8)
            second = transfer_three_point(a, m, n + 2 * a, 8)
            base = transfer_three_point(a, m, n, 8)
            assert first == base.scale(-1)
            assert second == base.scale(-1)


class TestConsistencyReport:
    def test_resolved_sign_matches_everywhere(self):
        report = consistency_report(a_values=(1,), d_range=(-2, 2), n_range=(-6, 6))
        assert all(row.match_resolved for row in report.rows)

    def test_raw_mismatch_exactly_on_negative_m(self):
        report = consistency_report(a_values=(1,), d_range=(-2, 2), n_range=(-6, 6))
        for row in report.rows:
            if row.closed_form is None:
                assert row.match_raw  # both absent
            else:
                expected = row.m == 0 or row.d == -1
                assert row.match_raw == expected

    def test_normalization_listed(self):
        report = consistency_report(a_values=(1, 2), d_range=(-1, 1), n_range=(-2, 2))
        assert report.normalization[1] == SeriesMonomial(0, Monomial(u=-1))
        assert report.normalization[2] == SeriesMonomial(0, Monomial(u=-2))
        assert report.diagnostics
