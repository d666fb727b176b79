import random
from collections import Counter

import pytest

from geofence import engine
from geofence.engine import (
    MatchResult,
    ZoneTokenSet,
    build_zone_tokens,
    match_all,
    match_user_zone,
    results_to_csv,
    token_sort_key,
)
from geofence.hve import Pattern, encrypt, gen_token, plain_match, setup


@pytest.fixture(scope="module")
def keys(params62):
    return setup(4, params62, random.Random(77), precompute=True)


def result_key(r):
    return (r.user_id, r.zone_id, r.message, r.pairings)


class TestTokenOrder:
    def test_more_stars_first(self):
        symbols = ["0010", "1*1*", "*010", "10**", "****"]
        ordered = sorted(symbols, key=token_sort_key)
        assert ordered == ["****", "10**", "1*1*", "*010", "0010"]

    def test_zone_set_sorted_and_budgeted(self, keys):
        _, sk = keys
        rng = random.Random(1)
        toks = [gen_token(sk, Pattern(s), rng) for s in ("0010", "10**")]
        zset = ZoneTokenSet.from_tokens("z", toks)
        assert [t.pattern.symbols for t in zset.tokens] == ["10**", "0010"]
        assert zset.pairing_budget == 5 + 9


class TestMatchUserZone:
    def test_early_exit_on_first_token(self, keys):
        pk, sk = keys
        rng = random.Random(2)
        zset = build_zone_tokens(
            sk, "z", [Pattern("10**"), Pattern("1*1*"), Pattern("*010")], rng
        )
        assert [t.pattern.symbols for t in zset.tokens] == \
            ["10**", "1*1*", "*010"]
        c = encrypt(pk, "1010", 55, rng)
        r = match_user_zone(c, zset)
        assert r.matched and r.message == 55
        assert r.pairings == 5  # only the first token was evaluated

    def test_nonmatch_costs_full_budget(self, keys):
        pk, sk = keys
        rng = random.Random(3)
        zset = build_zone_tokens(sk, "z", [Pattern("10**"), Pattern("0001")],
                                 rng)
        c = encrypt(pk, "0100", 9, rng)
        r = match_user_zone(c, zset)
        assert not r.matched
        assert r.pairings == zset.pairing_budget

    def test_empty_token_list(self, keys):
        pk, _ = keys
        c = encrypt(pk, "0100", 9, random.Random(4))
        r = match_user_zone(c, ZoneTokenSet("z", (), 0))
        assert not r.matched and r.pairings == 0

    def test_match_pairings_never_exceed_budget(self, keys):
        pk, sk = keys
        rng = random.Random(5)
        zset = build_zone_tokens(
            sk, "z", [Pattern("01**"), Pattern("0100")], rng
        )
        r = match_user_zone(encrypt(pk, "0100", 6, rng), zset)
        assert r.matched
        assert r.pairings <= zset.pairing_budget


class TestMatchAll:
    def make_workload(self, keys, n_users=12, n_zones=3):
        pk, sk = keys
        rng = random.Random(6)
        zones = [
            build_zone_tokens(
                sk, f"z{i}", [Pattern("1**1"), Pattern(f"{i % 2}0*1")], rng
            )
            for i in range(n_zones)
        ]
        indexes = ["1001", "0011", "1111", "0000"]
        cts = [
            (f"u{i}", encrypt(pk, indexes[i % 4], i + 1, rng))
            for i in range(n_users)
        ]
        return cts, zones, indexes

    def test_worker_counts_agree(self, keys):
        cts, zones, _ = self.make_workload(keys)
        serial = match_all(cts, zones, workers=1)
        parallel = match_all(cts, zones, workers=2)
        assert Counter(map(result_key, serial)) == \
            Counter(map(result_key, parallel))

    def test_outcomes_match_plaintext_semantics(self, keys):
        cts, zones, indexes = self.make_workload(keys)
        by_user = {f"u{i}": indexes[i % 4] for i in range(len(cts))}
        for r in match_all(cts, zones, workers=1):
            zone = next(z for z in zones if z.zone_id == r.zone_id)
            expected = any(
                plain_match(by_user[r.user_id], t.pattern)
                for t in zone.tokens
            )
            assert r.matched == expected

    def test_empty_inputs(self, keys):
        _, zones, _ = self.make_workload(keys)
        assert match_all([], zones, workers=2) == []

    def test_worker_count_validated(self, keys):
        with pytest.raises(ValueError):
            match_all([], [], workers=0)


class TestInstrument:
    def test_single_wildcard_query_counts_one_pairing(self, keys):
        pk, sk = keys
        rng = random.Random(7)
        zset = build_zone_tokens(sk, "z", [Pattern("****")], rng)
        c = encrypt(pk, "0000", 2, rng)
        engine.reset_counters()
        match_user_zone(c, zset)
        assert engine.instrument().pairings == 1

    def test_one_hot_token_counts_thirteen(self, params62):
        pk, sk = setup(9, params62, random.Random(8))
        rng = random.Random(9)
        zset = build_zone_tokens(sk, "z", [Pattern("00*0000**")], rng)
        c = encrypt(pk, "100000000", 4, rng)
        engine.reset_counters()
        match_user_zone(c, zset)
        assert engine.instrument().pairings == 13

    def test_reset(self):
        engine.reset_counters()
        counters = engine.instrument()
        assert (counters.pairings, counters.exps, counters.table_hits) == \
            (0, 0, 0)


def test_results_csv_format():
    results = [
        MatchResult("u1", "z0", 5, 9, 12),
        MatchResult("u0", "z1", None, 3, 4),
    ]
    csv = results_to_csv(results)
    assert csv.splitlines() == [
        "user,zone,outcome,pairings,micros",
        "u0,z1,nonmatch,3,4",
        "u1,z0,match,9,12",
    ]
