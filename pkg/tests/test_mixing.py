from fractions import Fraction as F

import pytest

from collatz_lab.errors import AssumptionRequired
from collatz_lab.mixing import (
    CONJECTURE,
    ROTATION_ORBITS,
    class_g_membership,
    closed_form_matches_descriptor,
    contradiction_report,
    empirical_nu,
    forced_table,
    nu_table,
    repeated_integral_g,
    repeated_integral_h,
    rotation_relations_hold,
    triple_block_encoding,
    tychonoff_distance,
)

THIRD = F(1, 3)


class TestRepeatedIntegrals:
    def test_g_both_orders(self):
        inner2 = repeated_integral_g("omega2")
        inner1 = repeated_integral_g("omega1", assume_conjecture=True)
        assert inner2.value == inner1.value == F(2, 3)
        assert inner2.assumptions == ()
        assert inner1.assumptions == (CONJECTURE,)
        assert class_g_membership("g").in_class

    def test_h_orders_differ(self):
        assert repeated_integral_h("omega2").value == F(3, 5)
        assert repeated_integral_h("omega1", assume_conjecture=True).value == F(2, 3)
        assert not class_g_membership("h").in_class

    @pytest.mark.parametrize("fn", [repeated_integral_g, repeated_integral_h])
    def test_conjecture_flag_required(self, fn):
        with pytest.raises(AssumptionRequired):
            fn("omega1")

    def test_bad_order(self):
        with pytest.raises(ValueError):
            repeated_integral_g("omega3")

    def test_descriptors_match_closed_forms(self):
        assert closed_form_matches_descriptor(40)


class TestTychonoff:
    def test_identical(self):
        x = triple_block_encoding(7, 8)
        assert tychonoff_distance(x, x, 8) == (0, F(1, 2**8))

    def test_single_term(self):
        x = [(3, 0, 0)] + [(1, 1, 1)] * 4
        y = [(0, 0, 0)] + [(1, 1, 1)] * 4
        lo, hi = tychonoff_distance(x, y, 5)
        assert lo == F(3, 8)
        assert hi == F(3, 8) + F(1, 32)

    def test_irrational_norm_bracket(self):
        lo, hi = tychonoff_distance([(1, 1, 0)], [(0, 0, 0)], 1, precision_bits=80)
        # sqrt(2)/(2(1+sqrt(2))) = (2 - sqrt(2))/2
        assert abs(float(lo) - (2 - 2**0.5) / 2) < 1e-12
        assert lo < hi
        assert hi - lo <= F(1, 2) + F(1, 2**75)

    def test_orbits_8_and_4(self):
        x, y = triple_block_encoding(8, 10), triple_block_encoding(4, 10)
        lo, hi = tychonoff_distance(x, y, 10)
        assert 0 < lo <= hi < 1
        # agreement on a longer prefix shrinks the distance
        x2, y2 = triple_block_encoding(16, 10), triple_block_encoding(8, 10)
        assert tychonoff_distance(x2[1:], y2[1:], 9)[1] < hi


class TestTripleBlocks:
    def test_examples(self):
        assert triple_block_encoding(4, 4) == [(4, 2, 1)] * 4
        assert triple_block_encoding(8, 3) == [(8, 4, 2), (1, 4, 2), (1, 4, 2)]

    def test_eventual_block(self):
        for k in range(1, 500):
            blocks = triple_block_encoding(k, 120)
            assert blocks[-1] in {(4, 2, 1), (2, 1, 4), (1, 4, 2)}
            assert blocks[-1] == blocks[-2]


class TestNu:
    def test_rows_sum_to_one(self):
        table = nu_table(300)
        for i in range(3):
            assert sum(table.nu(i, v) for v in (1, 2, 4)) == 1

    def test_small_window_by_enumeration(self):
        # phase limits of k = 1..12 enumerated by direct iteration: 4 of each value
        assert empirical_nu(0, 1, 12) == F(4, 12)

    def test_rotation_relations(self):
        assert rotation_relations_hold(nu_table(500).as_dict())

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            empirical_nu(0, 3, 10)


class TestContradiction:
    def test_symbolic(self):
        rep = contradiction_report()
        assert rep.contradiction_gap == (F(3, 5), F(2, 3))
        assert rep.contradiction
        assert all(rep.forced_nu[i][v] == THIRD for i in range(3) for v in (1, 2, 4))
        assert rep.nu is None
        assert CONJECTURE in rep.assumptions

    def test_forced_table_uses_rotations(self):
        t = forced_table(F(1, 5))
        assert all(t[i][v] == F(1, 5) for cells in ROTATION_ORBITS for i, v in cells)

    def test_empirical_part(self):
        rep = contradiction_report(200)
        assert rep.sample_size == 200
        assert rep.rotation_relations_ok
        assert rep.lumped_nu0_14 == rep.nu[0][1] + rep.nu[0][4]
        data = rep.to_json()
        assert data["symbolic"]["contradiction_gap"] == [{"num": "3", "den": "5"}, {"num": "2", "den": "3"}]
        assert "empirical" in data
