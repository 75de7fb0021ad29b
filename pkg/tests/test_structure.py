"""Quotient shape, beta extraction, classification, named identities."""

from fractions import Fraction

import pytest

from mahlercf.contfrac import expand_family, monic_normalize
from mahlercf.errors import (
    ClassificationFailure,
    InvalidParameter,
    ShapeViolation,
)
from mahlercf.polys import RatPoly, poly_normalize_integer
from mahlercf.structure import (
    IDENTITY_NAMES,
    beta_closed_form,
    beta_sequence,
    classify_all,
    classify_convergent,
    companion_map,
    first_shape_violation,
    ones_polynomial,
    transport,
    verify_identity,
    well_approx_rate,
    well_approx_report,
)


class TestShape:
    def test_ones_polynomial(self):
        assert ones_polynomial(2) == RatPoly.from_text("1, 1")
        assert ones_polynomial(4) == RatPoly.from_text("1, 1, 1, 1")

    def test_quotient_shape_holds_d2_d3(self, betas_d2, betas_d3):
        for seq, d in ((betas_d2, 2), (betas_d3, 3)):
            monic = seq.monic
            for i in range(1, 20):
                quotient = monic.monic_quotient(i)
                if i % 2 == 1:
                    assert quotient == ones_polynomial(d), (d, i)
                else:
                    assert quotient == RatPoly.from_text("-1, 1"), (d, i)

    def test_shape_violation_d4(self):
        with pytest.raises(ShapeViolation) as err:
            beta_sequence(4, 10)
        assert err.value.index == 6

    def test_first_shape_violation_fixtures(self):
        assert first_shape_violation(4) == 6
        assert first_shape_violation(5) == 5


class TestBetas:
    def test_seed_betas(self, betas_d2):
        assert betas_d2.beta(2) == 2
        assert betas_d2.beta(3) == -1
        assert betas_d2.beta(4) == 1

    def test_beta_conventions(self, betas_d2):
        assert betas_d2.beta(0) == 0
        assert betas_d2.beta(1) == 0

    def test_closed_form_matches_oracle_d2(self, betas_d2):
        closed = beta_closed_form(40)
        for i in range(2, 41):
            assert closed[i] == betas_d2.beta(i), i

    def test_d3_sub_leading_coefficients(self, betas_d3):
        assert [betas_d3.a_coeff(m) for m in range(1, 7)] == [
            Fraction(0),
            Fraction(1),
            Fraction(1, 2),
            Fraction(-1),
            Fraction(3),
            Fraction(0),
        ]
        assert [betas_d3.b_coeff(m) for m in range(4, 7)] == [
            Fraction(-1),
            Fraction(1),
            Fraction(0),
        ]

    def test_a_b_coefficients_require_d3(self, betas_d2):
        with pytest.raises(InvalidParameter):
            betas_d2.a_coeff(3)


class TestIntegerForms:
    def test_q9_d2_primitive(self, g2_expansion):
        cf, _ = g2_expansion
        monic = monic_normalize(cf)
        q9 = poly_normalize_integer(monic.monic_denominator(9))
        assert q9.primitive == RatPoly.from_text("2, 2, 1, 1, 0, 0, -1, -1, 1, 1")
        # factors as (x+1)(x^8 - x^6 + x^2 + 2)
        factor = RatPoly.from_text("1, 1") * RatPoly.from_text("2, 0, 1, 0, 0, 0, -1, 0, 1")
        assert q9.primitive == factor

    def test_q8_d3_primitive_and_scale(self, g3_expansion):
        cf, _ = g3_expansion
        monic = monic_normalize(cf)
        q8 = poly_normalize_integer(monic.monic_denominator(8))
        assert q8.primitive == RatPoly.from_text("1, 0, 0, 1, 0, 0, 1, 0, 0, 2, 0, 0, 2")
        assert q8.scale == Fraction(1, 2)


class TestTransport:
    def test_h_transport_d2(self):
        h_cf, _ = expand_family(2, "H", 6)
        conv = h_cf.convergents[1]
        moved = transport(2, "H", conv, None)
        assert moved.claimed_rate_lower_bound == 2 * int(conv.q.degree()) - 1
        assert moved.measured_rate >= moved.claimed_rate_lower_bound
        assert moved.result_q == conv.q.substitute_power(2)

    def test_companion_map_on_real_convergent(self):
        u_cf, _ = expand_family(2, "U", 6)
        conv = u_cf.convergents[1]
        new_p, new_q, measured = companion_map(
            2, "U->H", conv.p, conv.q, int(conv.q.degree())
        )
        assert measured >= int(conv.q.degree()) - 1
        assert isinstance(new_p, RatPoly) and isinstance(new_q, RatPoly)


class TestClassification:
    @pytest.mark.parametrize("d", [2, 3])
    def test_all_convergents_classify_by_parity(self, d):
        classified = classify_all(d, 24)
        for item in classified:
            assert item.origin == ("H" if item.index % 2 == 0 else "U")

    def test_classify_single(self, g2_expansion):
        cf, _ = g2_expansion
        from mahlercf.contfrac import cf_expand
        from mahlercf.laurent import generate

        h_exp = cf_expand(generate(2, "H", -80), 16)
        u_exp = cf_expand(generate(2, "U", -80), 16)
        item = classify_convergent(2, cf.convergents[4], h_exp, u_exp)
        assert item.origin == "H"


class TestIdentities:
    def test_identity_vocabulary_frozen(self):
        assert IDENTITY_NAMES == (
            "funceq",
            "lemma5",
            "prop2",
            "prop_sum3",
            "prop_bk",
            "theorem1",
            "bzz",
        )

    @pytest.mark.parametrize("name", ["lemma5", "prop2", "prop_sum3", "prop_bk"])
    def test_d3_identities_pass(self, name):
        report = verify_identity(name, 3, (0, 10))
        assert report.status == "pass"
        assert report.failures == []

    def test_bzz_passes(self):
        report = verify_identity("bzz", 2, (2, 60))
        assert report.status == "pass"

    def test_theorem1_passes(self):
        report = verify_identity("theorem1", 2, (0, 20))
        assert report.status == "pass"

    def test_funceq_passes(self):
        report = verify_identity("funceq", 3, (0, 40))
        assert report.status == "pass"

    def test_report_json_schema(self):
        report = verify_identity("prop2", 3, (0, 5))
        data = report.to_json_dict()
        assert set(data) == {"identity", "d", "range", "status", "failures"}

    def test_unknown_identity_rejected(self):
        with pytest.raises(InvalidParameter):
            verify_identity("nonsense", 2, (0, 5))

    def test_bzz_requires_d2(self):
        with pytest.raises(InvalidParameter):
            verify_identity("bzz", 3, (2, 10))


class TestWellApproximation:
    def test_rate_formula(self):
        for d in (4, 5, 6, 7):
            for k in range(4):
                expected = d ** (k + 1) - 2 * (d ** (k + 1) - 1) // (d - 1)
                assert well_approx_rate(d, k) == expected

    def test_d4_report(self):
        report = well_approx_report(4, 3)
        assert report.rates == [2, 6, 22, 86]
        assert report.first_large_quotient_index == 6
        assert report.first_large_quotient_degree == 5

    def test_d5_report(self):
        report = well_approx_report(5, 2)
        assert report.rates == [3, 13, 63]
        assert report.first_large_quotient_index == 5
        assert report.first_large_quotient_degree == 9

    def test_requires_d_at_least_4(self):
        with pytest.raises(InvalidParameter):
            well_approx_report(3, 2)
