"""Continued-fraction expansion: certification, convergent laws, monic view."""

from fractions import Fraction

import pytest

from mahlercf.contfrac import (
    cf_expand,
    convergent_soundness,
    default_floor,
    expand_family,
    monic_normalize,
)
from mahlercf.errors import InsufficientPrecision, InvalidParameter
from mahlercf.laurent import TruncatedLaurentSeries, generate, partial_product
from mahlercf.polys import RatPoly

FROZEN_BETAS_D2 = [
    Fraction(v)
    for v in (
        "2,-1,1,1,1,-1,1,-1,3,-1/3,1/3,3,-1,1,-1,-1,3,-1,1,1/3,5/3,-1/5,1/5".split(",")
    )
]  # beta_2 .. beta_24

FROZEN_BETAS_D3 = [
    Fraction(v)
    for v in ("2,-1/2,-1/2,4,-2,1/4,7/4,-2/7,16/7,-7/8,-1/8".split(","))
]  # beta_2 .. beta_12


class TestExactExpansion:
    def test_rational_series_terminates(self):
        series = TruncatedLaurentSeries.from_fraction(
            RatPoly.one(), RatPoly.from_text("1, 1"), -16
        )
        cf = cf_expand(series, 10)
        assert cf.terminated
        assert list(cf.partial_quotients) == [RatPoly.zero(), RatPoly.from_text("1, 1")]

    def test_already_monic_expansion_has_unit_betas(self):
        # (x^2+1)/(x^3+2x) = 1/(x + 1/(x + 1/x)) has monic convergent
        # denominators x, x^2+1, x^3+2x: the monic view is the identity
        series = TruncatedLaurentSeries.from_fraction(
            RatPoly.from_text("1, 0, 1"),
            RatPoly.from_text("0, 2, 0, 1"),
            -24,
        )
        cf = cf_expand(series, 6)
        monic = monic_normalize(cf)
        for n in range(1, 4):
            assert monic.monic_denominator(n) == cf.convergents[n].q
        assert monic.beta(2) == 1
        assert monic.beta(3) == 1
        assert monic.monic_quotient(2) == cf.partial_quotients[2]

    def test_exact_and_truncated_paths_agree(self):
        poly, denom = partial_product(2, 4)
        exact = TruncatedLaurentSeries.from_fraction(poly, denom, -40)
        cf_exact = cf_expand(exact, 14)
        # the same rational function fed through plain coefficient truncation
        plain = TruncatedLaurentSeries(
            {deg: exact.coeff(deg) for deg in range(-40, 1) if exact.coeff(deg)},
            -40,
        )
        cf_plain = cf_expand(plain, 14)
        assert cf_exact.partial_quotients[: 15] == cf_plain.partial_quotients[: 15]

    def test_partial_product_cf_agrees_with_full_series_on_certified_prefix(self):
        # |f_2 - r_4| has degree -2^5 = -32, so the two quotient sequences must
        # agree on every convergent with 2*deg(q) < 32 (the certification
        # criterion applied to the difference of the two inputs)
        poly, denom = partial_product(2, 4)
        r4 = TruncatedLaurentSeries.from_fraction(poly, denom, -64)
        f2 = generate(2, "F", -64)
        cf_r = cf_expand(r4, 15)
        cf_f = cf_expand(f2, 15)
        certified = [
            conv.index
            for conv in cf_f.convergents
            if 2 * int(conv.q.degree()) < 32
        ]
        top = max(certified)
        assert top >= 8
        assert cf_r.partial_quotients[: top + 1] == cf_f.partial_quotients[: top + 1]


class TestConvergentLaws:
    def test_determinant_identity(self, g2_expansion):
        cf, _ = g2_expansion
        for n in range(0, 30):
            det = cf.determinant(n)
            assert det in (RatPoly.one(), -RatPoly.one())

    def test_determinant_alternates(self, g2_expansion):
        cf, _ = g2_expansion
        signs = []
        for n in range(0, 12):
            det = cf.determinant(n)
            signs.append(1 if det == RatPoly.one() else -1)
        assert signs == [(-1) ** (n + 1) for n in range(0, 12)]

    def test_rates_equal_next_quotient_degree(self, g2_expansion, g3_expansion):
        for cf, series in (g2_expansion, g3_expansion):
            rates = convergent_soundness(series, cf)
            assert all(r >= 1 for r in rates)

    def test_d2_rates_all_one(self, g2_expansion):
        cf, _ = g2_expansion
        assert all(conv.rate == 1 for conv in cf.convergents[:-1])

    def test_d3_rates_alternate(self, g3_expansion):
        cf, _ = g3_expansion
        rates = [conv.rate for conv in cf.convergents[:-1]]
        assert rates[:8] == [2, 1, 2, 1, 2, 1, 2, 1]

    def test_denominator_degrees_increase(self, g3_expansion):
        cf, _ = g3_expansion
        degrees = [conv.q.degree() for conv in cf.convergents]
        assert degrees == sorted(degrees)
        assert all(b > a for a, b in zip(degrees, degrees[1:]))

    def test_sign_normalization(self, g2_expansion):
        cf, _ = g2_expansion
        for conv in cf.convergents:
            assert conv.q.leading_coefficient() > 0


class TestCertification:
    def test_insufficient_precision_on_shallow_floor(self):
        f2 = generate(2, "F", -6)
        with pytest.raises(InsufficientPrecision):
            cf_expand(f2, 12)

    def test_expand_family_retries_on_depth(self):
        cf, series = expand_family(2, "G", 30, floor=-8)
        assert len(cf.partial_quotients) == 31
        assert series.floor <= -60

    def test_depth_cap_stops_retries(self):
        # use a family nothing else touches: the shared cache legitimately
        # serves deeper series for warm (d, kind) pairs
        with pytest.raises(InsufficientPrecision):
            expand_family(6, "U", 50, floor=-8, depth_cap=16)

    def test_default_floor_formula(self):
        assert default_floor(2, 10) == -(2 * 10 * 2 + 16)
        assert default_floor(3, 7) == -(2 * 7 * 3 + 16)


class TestMonicView:
    def test_frozen_betas_d2(self, g2_expansion):
        cf, _ = g2_expansion
        monic = monic_normalize(cf)
        betas = [monic.beta(i) for i in range(2, 25)]
        assert betas == FROZEN_BETAS_D2

    def test_frozen_betas_d3(self, g3_expansion):
        cf, _ = g3_expansion
        monic = monic_normalize(cf)
        betas = [monic.beta(i) for i in range(2, 13)]
        assert betas == FROZEN_BETAS_D3

    def test_monic_denominator_fixtures_d3(self, g3_expansion):
        cf, _ = g3_expansion
        monic = monic_normalize(cf)
        assert monic.monic_denominator(1) == RatPoly.from_text("1, 1, 1")
        assert monic.monic_denominator(2) == RatPoly.from_text("1, 0, 0, 1")
        assert monic.monic_denominator(4) == RatPoly.from_text("-1, 0, 0, -1, 0, 0, 1")
        assert monic.monic_denominator(6) == RatPoly.from_text(
            "1, 0, 0, 0, 0, 0, 0, 0, 0, 1"
        )

    def test_beta_convention_beta1_zero(self, g2_expansion):
        cf, _ = g2_expansion
        monic = monic_normalize(cf)
        assert monic.beta(1) == 0

    def test_json_schema(self, g2_expansion):
        cf, _ = g2_expansion
        monic = monic_normalize(cf)
        data = cf.to_json_dict(monic=monic)
        assert set(data) == {"a", "convergents", "betas"}
        assert data["betas"][0] == "2"
        first = data["convergents"][0]
        assert set(first) == {"n", "p", "q", "rate"}

    def test_quotient_degree_validation(self):
        with pytest.raises(InvalidParameter):
            from mahlercf.contfrac import CFExpansion

            CFExpansion((RatPoly.zero(), RatPoly.one()), terminated=False)
