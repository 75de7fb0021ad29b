"""Multiplicative orders, witness conditions, searches, orbit table, lifting."""

import json

import pytest

from mahlercf.errors import (
    HypothesisFailed,
    InvalidParameter,
    NotCoprime,
    NotFound,
    ScaleNotInvertible,
)
from mahlercf.padic import (
    BadApproxWitness,
    check_conditions,
    convergent_denominators,
    enumerate_orbit_hits,
    exact_divisibility,
    exact_divisibility_tower,
    fermat_quotient_nonzero,
    gamma_growth,
    hensel_divisibility_demo,
    mult_order,
    orbit_table,
    orbit_table_csv,
    order_growth_check,
    power_tower_residue,
    revalidate_witness,
    wieferich_scan,
    witness_from_check,
    witness_search,
)

# first certified (t, residue) per squaring-orbit, verified by standalone
# big-integer evaluation of q_t at the residue
FROZEN_TABLE_SMALL = {
    3: [(9, 7)],
    5: [(11, 11)],
    7: [(41, 15), (59, 43)],
}


class TestOrders:
    def test_mult_order_basics(self):
        assert mult_order(2, 3) == 2
        assert mult_order(2, 9) == 6
        assert mult_order(2, 7) == 3

    def test_mult_order_requires_coprime(self):
        with pytest.raises(NotCoprime):
            mult_order(6, 9)

    def test_gamma_growth_typical(self):
        assert gamma_growth(2, 3)
        assert gamma_growth(2, 5)
        assert gamma_growth(3, 5)

    def test_gamma_growth_fails_at_wieferich(self):
        assert not gamma_growth(2, 1093)
        assert not gamma_growth(2, 3511)
        assert not gamma_growth(3, 11)

    def test_fermat_quotient_matches_growth(self):
        for a, p in ((2, 5), (2, 7), (3, 7), (2, 1093), (3, 11)):
            assert fermat_quotient_nonzero(a, p) == gamma_growth(a, p)

    def test_wieferich_scan_small_windows(self):
        assert wieferich_scan(2, 1000) == []
        assert wieferich_scan(2, 4000) == [1093, 3511]
        assert wieferich_scan(3, 100) == [11]

    def test_order_growth_sequence(self):
        growth = order_growth_check(2, 3, 5)
        assert [g.order for g in growth] == [2, 6, 18, 54, 162, 486]
        growth5 = order_growth_check(2, 5, 4)
        assert [g.order for g in growth5] == [4, 20, 100, 500, 2500]

    def test_order_growth_refuses_stalled_base(self):
        with pytest.raises(HypothesisFailed):
            order_growth_check(3, 11, 3)


class TestDivisibility:
    def test_exact_divisibility(self):
        assert exact_divisibility(7, 7)
        assert not exact_divisibility(7, 49)
        assert not exact_divisibility(7, 8)

    def test_power_tower_residue(self):
        assert power_tower_residue(2, 3, 2, 49) == 512 % 49 == 22
        assert power_tower_residue(2, 2, 1, 9) == 4

    def test_exact_divisibility_tower(self):
        # 2^{3^1} - 1 = 7 is exactly divisible by 7
        assert exact_divisibility_tower(2, 3, 1, 7)
        # 2^{2^2} - 1 = 15 is not divisible by 7
        assert not exact_divisibility_tower(2, 2, 2, 7)


class TestConditions:
    def test_pinned_d2_row(self):
        q9 = convergent_denominators(2, 9)[9]
        check = check_conditions(2, 2, 3, 2, 9, q9)
        assert check.passed
        assert check.residue == 7
        assert check.verdicts == {"c1": True, "c2": True, "c3": True, "c4": True}

    def test_pinned_d3_tuple(self):
        q8 = convergent_denominators(3, 8)[8]
        check = check_conditions(2, 3, 7, 2, 8, q8)
        assert check.passed
        assert check.residue == 22
        assert check.qt_derivative_at_1 % 7 == 2

    def test_p_dividing_a_fails(self):
        q9 = convergent_denominators(2, 9)[9]
        check = check_conditions(15, 2, 3, 2, 9, q9)
        assert not check.passed
        assert not check.verdicts["c1"]

    def test_d3_requires_odd_t_rejected(self):
        q7 = convergent_denominators(3, 7)[7]
        check = check_conditions(2, 3, 7, 2, 7, q7)
        assert not check.verdicts["c3"]

    def test_d3_small_primes_rejected(self):
        q8 = convergent_denominators(3, 8)[8]
        check = check_conditions(2, 3, 3, 1, 8, q8)
        assert not check.passed

    def test_scale_sharing_p_is_skipped(self):
        from fractions import Fraction

        from mahlercf.polys import IntPolyWithContent, RatPoly

        fake = IntPolyWithContent(
            primitive=RatPoly.from_text("1, 1"), scale=Fraction(1, 5)
        )
        with pytest.raises(ScaleNotInvertible):
            check_conditions(2, 2, 5, 1, 1, fake)


class TestWitnessSearch:
    def test_bounded_search_reproduces_d3_tuple(self):
        w = witness_search(2, 3, 7, 6, 10)
        assert (w.p, w.n0, w.t, w.residue) == (7, 2, 8, 22)

    def test_lexicographic_first_d3_under_wider_bounds(self):
        # with a larger t bound, n0=1 admits an earlier (p, n0, t) witness
        w = witness_search(2, 3, 7, 6, 30)
        assert (w.p, w.n0, w.t, w.residue) == (7, 1, 24, 8)

    def test_lexicographic_first_d2(self):
        w = witness_search(2, 2, 11, 8, 20)
        assert (w.p, w.n0, w.t, w.residue) == (3, 1, 18, 4)

    def test_lexicographic_first_a15(self):
        # the orbit {8, 15, 29} mod 49 carries two roots within t <= 50:
        # t=41 at residue 15 (n0=3) and t=49 at residue 29 (n0=1); the
        # (p, n0, t) order picks the latter
        w = witness_search(15, 2, 11, 8, 50)
        assert (w.p, w.n0, w.t, w.residue) == (7, 1, 49, 29)

    def test_search_not_found_carries_diagnostics(self):
        with pytest.raises(NotFound) as err:
            witness_search(3, 2, 5, 2, 3)
        assert "primes_considered" in str(err.value)

    def test_invalid_d_rejected(self):
        with pytest.raises(InvalidParameter):
            witness_search(2, 5, 10, 5, 10)

    def test_threads_agree_with_serial(self):
        serial = witness_search(2, 2, 11, 8, 20, threads=1)
        threaded = witness_search(2, 2, 11, 8, 20, threads=4)
        assert (serial.p, serial.n0, serial.t, serial.residue) == (
            threaded.p,
            threaded.n0,
            threaded.t,
            threaded.residue,
        )


class TestWitnessObjects:
    def test_json_round_trip(self):
        w = witness_search(2, 3, 7, 6, 10)
        data = w.to_json_dict()
        assert set(data) == {"a", "d", "p", "n0", "t", "residue", "conditions", "qt"}
        assert data["qt"].count(",") == 12  # dense ascending integer list, degree 12
        again = BadApproxWitness.from_json_dict(json.loads(json.dumps(data)))
        # the JSON schema carries the primitive integer coefficients only, so
        # the normalization scale is not restored; everything else must match
        assert (again.a, again.d, again.p, again.n0, again.t, again.residue) == (
            w.a,
            w.d,
            w.p,
            w.n0,
            w.t,
            w.residue,
        )
        assert again.conditions == w.conditions
        assert again.qt.primitive == w.qt.primitive
        # a reloaded witness still revalidates from scratch
        assert revalidate_witness(again).passed

    def test_revalidation_from_scratch(self):
        w = witness_search(2, 2, 11, 8, 20)
        check = revalidate_witness(w)
        assert check.passed
        assert check.residue == w.residue

    def test_tampered_residue_rejected_on_revalidation(self):
        w = witness_search(2, 2, 11, 8, 20)
        data = w.to_json_dict()
        data["residue"] = (data["residue"] + 1) % (data["p"] ** 2)
        tampered = BadApproxWitness.from_json_dict(data)
        with pytest.raises(InvalidParameter, match="stored residue"):
            revalidate_witness(tampered)

    def test_tampered_polynomial_rejected_on_revalidation(self):
        w = witness_search(2, 2, 11, 8, 20)
        data = w.to_json_dict()
        head, _, tail = data["qt"].partition(",")
        data["qt"] = f"{int(head) + 1},{tail}"
        tampered = BadApproxWitness.from_json_dict(data)
        with pytest.raises(InvalidParameter, match="does not match"):
            revalidate_witness(tampered)

    def test_witness_from_check(self):
        q9 = convergent_denominators(2, 9)[9]
        check = check_conditions(2, 2, 3, 2, 9, q9)
        w = witness_from_check(check)
        assert (w.a, w.d, w.p, w.n0, w.t, w.residue) == (2, 2, 3, 2, 9, 7)


class TestHensel:
    def test_lift_at_m2_returns_seed_exponent(self):
        w = witness_search(2, 3, 7, 6, 10)
        demo = hensel_divisibility_demo(w, 2)
        assert demo.n == 2
        assert demo.evaluation % 49 == 0

    def test_lift_d2_mod_27(self):
        w = witness_search(2, 2, 11, 8, 20)
        demo = hensel_divisibility_demo(w, 3)
        assert demo.m == 3
        assert demo.n == 1
        assert demo.lifted_root == 4
        assert demo.evaluation % 27 == 0

    def test_lift_deeper_modulus(self):
        w = witness_search(2, 3, 7, 6, 10)
        demo = hensel_divisibility_demo(w, 3)
        assert demo.exponent_residue == demo.lifted_root
        assert demo.evaluation % 343 == 0


class TestOrbitTable:
    def test_small_primes_match_frozen_rows(self):
        rows = orbit_table([3, 5, 7], 200)
        got = {}
        for row in rows:
            got.setdefault(row.p, []).append((row.t, row.residue))
        assert got == FROZEN_TABLE_SMALL

    def test_enumerate_hits_lists_every_certified_pair(self):
        hits = enumerate_orbit_hits(7, 200)
        # the first-per-orbit rows are the earliest hits for their residues
        assert (41, 15) in hits
        assert (59, 43) in hits
        # later t serving the same orbit are certified pairs too
        assert (91, 43) in hits
        assert (187, 43) in hits
        # t=63 has 1-unit roots but q_63'(1) == 0 mod 7, so it must be absent
        assert not any(t == 63 for t, _ in hits)
        assert min(t for t, r in hits if r in {22, 36, 43}) == 59

    def test_p3_orbit_and_classes(self):
        row = orbit_table([3], 50)[0]
        assert row.orbit == (4, 7)
        assert row.a_classes == (2, 4)

    def test_csv_shape(self):
        rows = orbit_table([3, 5], 50)
        csv_text = orbit_table_csv(rows)
        lines = csv_text.strip().split("\n")
        assert lines[0] == "p,t,residue,a_classes"
        assert lines[1] == "3,9,7,+-2 +-4"

    def test_include_missing_marks_row(self):
        rows = orbit_table([3], 5, include_missing=True)
        assert any(row.t is None for row in rows)
