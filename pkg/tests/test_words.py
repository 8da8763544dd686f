import random
from fractions import Fraction

import pytest

from substreetution.engine import ABBA, BBAB, apply
from substreetution.errors import NonPositive, NotPowerOfTwo
from substreetution.words import (
    chi,
    chi_pow,
    chi_recursive,
    chi_via_theta,
    f_iter,
    line_formula,
    ones_addresses,
    ones_count_line_2n,
    ones_proportion,
    proportion_check,
    v2,
    v2_case_check,
    word_from_addresses,
)
from substreetution.trees import random_patch


class TestAddressSets:
    def test_examples(self):
        assert ones_addresses("0010") == {"ba"}
        assert ones_addresses("01000001") == {"aab", "bbb"}
        assert ones_addresses("0000") == frozenset()

    def test_roundtrip(self):
        rng = random.Random(1)
        for l in range(5):
            word = "".join(rng.choice("01") for _ in range(1 << l))
            assert word_from_addresses(l, ones_addresses(word)) == word

    def test_power_of_two_guard(self):
        with pytest.raises(NotPowerOfTwo):
            ones_addresses("010")


class TestChi:
    def test_pinned_values(self):
        assert chi(BBAB, "10") == "0010"
        assert chi(BBAB, "0010") == "0010001000000010"
        assert chi(BBAB, "00") == "0000"
        assert chi(BBAB, "0") == "0" and chi(BBAB, "1") == "1"

    def test_pow(self):
        assert chi_pow(BBAB, "10", 0) == "10"
        assert chi_pow(BBAB, "10", 2) == "0010001000000010"
        w3 = chi_pow(BBAB, "10", 3)
        assert len(w3) == 256 and w3.count("1") == 39

    def test_pow_length_exponent_doubles(self):
        w = "0110"
        for u in range(3):
            assert len(chi_pow(BBAB, w, u)) == 1 << (2 * (1 << u))

    def test_recursion_matches_definition(self):
        rng = random.Random(2)
        for system in (BBAB, ABBA):
            for l in range(4):
                for _ in range(12):
                    w = "".join(rng.choice("01") for _ in range(1 << l))
                    assert chi_recursive(system, w) == chi_via_theta(system, w)

    def test_block_recursion_shape(self):
        # image of a split word is slot-wise images of the halves
        rng = random.Random(3)
        for _ in range(12):
            w1 = "".join(rng.choice("01") for _ in range(4))
            w2 = "".join(rng.choice("01") for _ in range(4))
            lhs = chi(BBAB, w1 + w2)
            c1, c2 = chi(BBAB, w1), chi(BBAB, w2)
            assert lhs == c2 + c2 + c1 + c2

    def test_bottom_row_commutation(self):
        # last line of the image is the doubled word of the input's last line
        rng = random.Random(4)
        for system in (BBAB, ABBA):
            for _ in range(10):
                p = random_patch(3, rng)
                image = apply(system, p)
                assert image.line(2 * p.depth) == chi_via_theta(system, p.line(p.depth))


class TestValuation:
    def test_values(self):
        assert v2(12) == 2
        assert v2(22) == 1
        assert v2(1) == 0

    def test_guard(self):
        with pytest.raises(NonPositive):
            v2(0)

    def test_case_rules(self):
        assert v2_case_check(kmax=7, mmax=7)


class TestCounts:
    def test_f_iterates(self):
        assert f_iter(1) == 3
        assert f_iter(2) == Fraction(13, 3)
        assert f_iter(3) == Fraction(217, 39)

    def test_ones_counts(self):
        assert [ones_count_line_2n(n) for n in range(5)] == [1, 1, 3, 39, 8463]

    def test_proportions(self):
        assert proportion_check("0010", 1)
        assert proportion_check("10", 0)
        assert not proportion_check("0000", 1)
        assert ones_proportion(1) == Fraction(1, 4)

    def test_block_densities_distinct(self):
        densities = [ones_proportion(u) for u in range(6)]
        assert len(set(densities)) == 6


class TestLineFormula:
    def test_examples(self):
        assert line_formula(3) == "10101010"
        assert line_formula(4) == "0010001000000010"
        assert line_formula(6) == "0010" * 16

    def test_guard(self):
        with pytest.raises(NonPositive):
            line_formula(0)

    def test_block_halves_have_ones(self):
        for u in range(1, 5):
            block = chi_pow(BBAB, "10", u)
            half = len(block) // 2
            assert "1" in block[half:]
            if u >= 2:
                assert "1" in block[:half]
