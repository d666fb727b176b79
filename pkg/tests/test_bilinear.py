import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geofence import bilinear
from geofence.bilinear import (
    GElem,
    GroupParams,
    GTElem,
    gen_params,
    identity_g,
    identity_gt,
    inv,
    mul,
    pair,
    params_from_text,
    params_to_text,
    pow,
    pow_pre,
    precompute_base,
    sample_gp,
    sample_gq,
)

FIVE_BIT_PRIMES = {17, 19, 23, 29, 31}


def test_gen_params_small_bits_hits_known_primes():
    p = gen_params(5, 1)
    assert p.P in FIVE_BIT_PRIMES
    assert p.Q in FIVE_BIT_PRIMES
    assert p.P != p.Q
    assert p.N == p.P * p.Q


def test_gen_params_deterministic():
    assert gen_params(62, 7) == gen_params(62, 7)


def test_gen_params_seed_changes_modulus():
    assert gen_params(62, 7).N != gen_params(62, 8).N


def test_gen_params_exact_bit_length():
    for seed in range(5):
        p = gen_params(62, seed)
        assert p.P.bit_length() == 62
        assert p.Q.bit_length() == 62


def test_gen_params_rejects_tiny_width():
    with pytest.raises(ValueError):
        gen_params(3, 0)


def test_group_params_consistency_checked():
    with pytest.raises(ValueError):
        GroupParams(N=15, P=3, Q=7, bits=3)


def test_subgroup_membership(params16, rng):
    for _ in range(20):
        assert sample_gp(params16, rng).e % params16.Q == 0
        assert sample_gq(params16, rng).e % params16.P == 0


def test_samples_never_identity(params16, rng):
    assert all(not sample_gp(params16, rng).is_identity for _ in range(50))
    assert all(not sample_gq(params16, rng).is_identity for _ in range(50))


def test_subgroup_orthogonality(params62, rng):
    for _ in range(20):
        gp = sample_gp(params62, rng)
        gq = sample_gq(params62, rng)
        assert pair(gp, gq) == identity_gt(params62)


def test_mul_pow_known_values():
    params = GroupParams(N=323, P=17, Q=19, bits=5)
    a = GElem(5, params)
    assert pow(a, 7).e == 35
    assert pow(a, 0) == identity_g(params)
    assert mul(a, pow(a, params.N - 1)) == identity_g(params)


def test_closure(params16, rng):
    n = params16.N
    for _ in range(50):
        a = GElem(rng.randrange(n), params16)
        b = GElem(rng.randrange(n), params16)
        assert 0 <= mul(a, b).e < n
        assert 0 <= pow(a, rng.randrange(10 * n)).e < n


def test_param_mixing_rejected(params16, params62):
    a = GElem(1, params16)
    b = GElem(1, params62)
    with pytest.raises(ValueError):
        mul(a, b)
    with pytest.raises(ValueError):
        pair(a, b)


def test_gt_and_g_do_not_mix(params16):
    with pytest.raises(TypeError):
        mul(GElem(1, params16), GTElem(1, params16))
    with pytest.raises(TypeError):
        pair(GTElem(1, params16), GTElem(2, params16))


@settings(max_examples=100, deadline=None)
@given(data=st.data())
def test_bilinearity(data):
    params = gen_params(32, 1)
    n = params.N
    a = GElem(data.draw(st.integers(0, n - 1)), params)
    b = GElem(data.draw(st.integers(0, n - 1)), params)
    u = data.draw(st.integers(0, n - 1))
    v = data.draw(st.integers(0, n - 1))
    assert pair(pow(a, u), pow(b, v)) == pow(pair(a, b), u * v)


def test_pair_symmetry_and_identity(params62, rng):
    for _ in range(20):
        a = GElem(rng.randrange(params62.N), params62)
        b = GElem(rng.randrange(params62.N), params62)
        assert pair(a, b) == pair(b, a)
    assert pair(GElem(5, params62), identity_g(params62)).is_identity


def test_inv(params62, rng):
    for _ in range(20):
        a = GTElem(rng.randrange(params62.N), params62)
        assert mul(a, inv(a)) == identity_gt(params62)


class TestPowerTable:
    def test_edge_exponents(self, params62):
        a = GElem(1234567, params62)
        t = precompute_base(a)
        assert pow_pre(t, 0) == identity_g(params62)
        assert pow_pre(t, 1) == a

    def test_matches_direct_pow_on_random_exponents(self, params62, rng):
        for base_e in (rng.randrange(params62.N) for _ in range(3)):
            a = GElem(base_e, params62)
            t = precompute_base(a)
            for _ in range(1000):
                k = rng.randrange(params62.N)
                # independent oracle: direct modular product
                assert pow_pre(t, k).e == (base_e * k) % params62.N

    def test_gt_base(self, params62, rng):
        a = GTElem(rng.randrange(params62.N), params62)
        t = precompute_base(a)
        k = rng.randrange(params62.N)
        got = pow_pre(t, k)
        assert isinstance(got, GTElem)
        assert got == pow(a, k)

    def test_counters_track_hits(self, params62):
        a = GElem(99, params62)
        t = precompute_base(a)
        bilinear.counters.reset()
        pow_pre(t, 12345)
        pow(a, 12345)
        assert bilinear.counters.exps == 2
        assert bilinear.counters.table_hits == 1
        assert bilinear.counters.table_misses == 1


def test_params_text_roundtrip(params62):
    assert params_from_text(params_to_text(params62)) == params62


def test_sampling_deterministic(params62):
    a = sample_gp(params62, random.Random(5))
    b = sample_gp(params62, random.Random(5))
    assert a == b
