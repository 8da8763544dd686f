import random

import pytest

from substreetution.errors import AddressTooDeep, BadPatchFormat, DepthMismatch
from substreetution.jacaranda import jacaranda_prefix, jprime_prefix
from substreetution.trees import (
    EQUAL_TO_DEPTH,
    Patch,
    addr_index,
    distance,
    distinct_subpatches,
    dump_patch,
    index_addr,
    parse_patch,
    random_patch,
    subpatch_representatives,
)
from fractions import Fraction


def patch(*rows):
    return Patch(tuple(rows))


class TestAddressing:
    def test_index_roundtrip(self):
        for length in range(6):
            for i in range(1 << length):
                assert addr_index(index_addr(i, length)) == i

    def test_lexicographic_rank(self):
        assert addr_index("") == 0
        assert addr_index("ab") == 1
        assert addr_index("ba") == 2


class TestPatchBasics:
    def test_levels_validated(self):
        with pytest.raises(BadPatchFormat):
            patch("0", "1")
        with pytest.raises(BadPatchFormat):
            patch("0", "1x")
        with pytest.raises(BadPatchFormat):
            Patch(())

    def test_get_at_sites(self):
        j = jacaranda_prefix(4)
        assert j.get("ba") == 1  # the single 1 of generation 2
        assert j.get("") == 0
        assert j.get("aaaa") == 0

    def test_get_too_deep(self):
        with pytest.raises(AddressTooDeep):
            patch("0").get("a")

    def test_subtree_child_extraction(self):
        p = patch("0", "10")
        assert p.subtree("a") == patch("1")
        assert p.subtree("") == p

    def test_subtree_of_prefix(self):
        j = jacaranda_prefix(3)
        assert j.subtree("b").levels == ("0", "10", "1010")

    def test_subtree_composition(self):
        rng = random.Random(7)
        for _ in range(25):
            p = random_patch(6, rng)
            w1 = "".join(rng.choice("ab") for _ in range(rng.randrange(3)))
            w2 = "".join(rng.choice("ab") for _ in range(rng.randrange(3)))
            assert p.subtree(w1).subtree(w2) == p.subtree(w1 + w2)

    def test_line(self):
        j = jacaranda_prefix(2)
        assert j.line(0) == "0"
        assert j.line(1) == "10"
        assert j.line(2) == "0010"
        with pytest.raises(AddressTooDeep):
            j.line(3)


class TestDistance:
    def test_root_mismatch(self):
        d = 6
        assert distance(jacaranda_prefix(d), jprime_prefix(d)) == 1

    def test_equal(self):
        p = patch("0", "10")
        assert distance(p, p) is EQUAL_TO_DEPTH

    def test_first_level(self):
        assert distance(patch("0", "10"), patch("0", "11")) == Fraction(1, 2)

    def test_depth_mismatch(self):
        with pytest.raises(DepthMismatch):
            distance(patch("0"), patch("0", "10"))

    def test_ultrametric(self):
        rng = random.Random(11)
        for _ in range(60):
            p, q, r = (random_patch(4, rng) for _ in range(3))
            dv = {
                k: (0 if v is EQUAL_TO_DEPTH else v)
                for k, v in {
                    "pq": distance(p, q),
                    "qr": distance(q, r),
                    "pr": distance(p, r),
                }.items()
            }
            assert dv["pr"] <= max(dv["pq"], dv["qr"])


class TestCanonicalIds:
    def test_equality_iff_equal_structure(self):
        rng = random.Random(3)
        for _ in range(40):
            p = random_patch(4, rng)
            q = Patch(p.levels)
            assert p.canonical_id == q.canonical_id
            rows = list(p.levels)
            l = rng.randrange(len(rows))
            i = rng.randrange(len(rows[l]))
            flipped = "1" if rows[l][i] == "0" else "0"
            rows[l] = rows[l][:i] + flipped + rows[l][i + 1 :]
            assert Patch(tuple(rows)).canonical_id != p.canonical_id

    def test_id_tables_match_windows(self):
        j = jacaranda_prefix(6)
        table = j.subtree_ids(2)
        for m in range(len(table)):
            for i in range(1 << m):
                assert table[m][i] == j.window(m, i, 2).canonical_id


class TestDistinctSubpatches:
    def test_jacaranda_depth1(self):
        ids = distinct_subpatches(jacaranda_prefix(6), 1)
        reps = subpatch_representatives(jacaranda_prefix(6), 1)
        shapes = {reps[i].levels for i in ids}
        assert shapes == {
            ("0", "10"),
            ("1", "10"),
            ("1", "00"),
            ("0", "00"),
        }

    def test_all_zero(self):
        zero = Patch(tuple("0" * (1 << l) for l in range(4)))
        assert len(distinct_subpatches(zero, 1)) == 1

    def test_contains_root_subtree(self):
        j = jacaranda_prefix(6)
        assert j.truncate(2).canonical_id in distinct_subpatches(j, 2)

    def test_monotone_and_bounded(self):
        for n in (0, 1, 2):
            counts = [
                len(distinct_subpatches(jacaranda_prefix(d), n)) for d in range(n + 1, 9)
            ]
            assert counts == sorted(counts)
            assert counts[-1] <= 1 << ((1 << (n + 1)) - 1)


class TestTextFormat:
    def test_roundtrip(self):
        j = jacaranda_prefix(5)
        assert parse_patch(dump_patch(j)) == j

    def test_comments_and_blanks(self):
        text = "# a patch\ndepth 1\n\n0  # root\n10\n"
        assert parse_patch(text) == patch("0", "10")

    def test_bad_header(self):
        with pytest.raises(BadPatchFormat):
            parse_patch("deep 1\n0\n10\n")
        with pytest.raises(BadPatchFormat):
            parse_patch("depth 2\n0\n10\n")
