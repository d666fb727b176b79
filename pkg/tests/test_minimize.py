import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geofence.minimize import (
    Cover,
    cover_cost,
    expand_cover,
    expand_pattern,
    from_pla,
    minimize,
    to_pla,
)


def bitsets(width, min_size=1, max_size=None):
    universe = [format(i, f"0{width}b") for i in range(1 << width)]
    return st.sets(
        st.sampled_from(universe),
        min_size=min_size,
        max_size=max_size or len(universe),
    )


class TestMinimize:
    def test_seven_cell_zone_cover(self):
        ids = {"0010", "1000", "1001", "1010", "1011", "1110", "1111"}
        cover = minimize(ids, 4)
        # all three covering cubes are essential, so the cover is unique
        assert {p.symbols for p in cover.patterns} == {"10**", "1*1*", "*010"}
        assert expand_cover(cover) == ids
        assert cover_cost(cover)[0] <= 7

    def test_single_bit_merge(self):
        cover = minimize({"00", "01"}, 2)
        assert [p.symbols for p in cover.patterns] == ["0*"]

    def test_full_domain_collapses_to_all_stars(self):
        ids = {format(i, "03b") for i in range(8)}
        cover = minimize(ids, 3)
        assert [p.symbols for p in cover.patterns] == ["***"]

    def test_singleton(self):
        cover = minimize({"1101"}, 4)
        assert [p.symbols for p in cover.patterns] == ["1101"]

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            minimize(set(), 3)
        with pytest.raises(ValueError):
            minimize({"01", "011"}, 2)
        with pytest.raises(ValueError):
            minimize({"0*"}, 2)

    def test_exhaustive_width_three(self):
        universe = [format(i, "03b") for i in range(8)]
        for r in range(1, 9):
            for combo in itertools.combinations(universe, r):
                s = set(combo)
                cover = minimize(s, 3)
                assert expand_cover(cover) == s
                assert len(cover) <= len(s)

    @settings(max_examples=150, deadline=None)
    @given(s=bitsets(6, max_size=40))
    def test_exact_coverage_random(self, s):
        assert expand_cover(minimize(s, 6)) == s

    @settings(max_examples=100, deadline=None)
    @given(s=bitsets(5, max_size=20))
    def test_primality(self, s):
        cover = minimize(s, 5)
        for p in cover.patterns:
            for pos in p.J:
                widened = p.symbols[:pos] + "*" + p.symbols[pos + 1:]
                assert not expand_pattern(widened) <= s

    @settings(max_examples=100, deadline=None)
    @given(s=bitsets(6, max_size=25))
    def test_monotone_budget(self, s):
        cover = minimize(s, 6)
        nonwild = cover_cost(cover)[0]
        assert nonwild <= 6 * len(s)
        isolated = all(
            sum(a != b for a, b in zip(x, y)) > 1
            for x in s
            for y in s
            if x != y
        )
        # equality exactly when nothing is mergeable
        assert (nonwild == 6 * len(s)) == isolated

    def test_deterministic(self):
        rng = random.Random(5)
        s = {format(rng.randrange(256), "08b") for _ in range(30)}
        assert minimize(s, 8) == minimize(s, 8)


class TestExpandPattern:
    def test_two_stars(self):
        assert expand_pattern("1*1*") == {"1010", "1011", "1110", "1111"}

    def test_no_stars(self):
        assert expand_pattern("0110") == {"0110"}

    def test_all_stars(self):
        assert expand_pattern("**") == {"00", "01", "10", "11"}


class TestCoverCost:
    def _cover(self, *symbols):
        from geofence.hve import Pattern

        return Cover(tuple(Pattern(s) for s in symbols), len(symbols[0]))

    def test_two_token_area(self):
        assert cover_cost(self._cover("00*110", "00111*"))[0] == 10

    def test_merged_token(self):
        assert cover_cost(self._cover("00*11*"))[0] == 4

    def test_all_stars(self):
        assert cover_cost(self._cover("******")) == (0, 1)

    def test_pairing_total(self):
        assert cover_cost(self._cover("10**", "1*1*"))[1] == (1 + 4) + (1 + 4)


class TestPla:
    def test_roundtrip(self):
        s = {"0101", "0111", "1000"}
        cells, width = from_pla(to_pla(s, 4))
        assert (cells, width) == (s, 4)

    def test_reads_dashes_as_stars(self):
        cells, width = from_pla(".i 3\n.o 1\n0-1 1\n.e\n")
        assert cells == {"001", "011"} and width == 3
