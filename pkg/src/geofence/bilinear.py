"""Composite-order symmetric bilinear group, reference backend.

The group G has order N = P*Q (P, Q prime, equal bit length) with subgroups
G_p of order P and G_q of order Q, and a symmetric pairing
e : G x G -> G_T with e(a^u, b^v) = e(a, b)^(u*v).

This backend represents every element by its discrete log with respect to a
fixed implicit generator, so:

    mul(a, b)  = a.e + b.e   (mod N)
    pow(a, k)  = a.e * k     (mod N)
    pair(a, b) = a.e * b.e   (mod N)

Bilinearity and the orthogonality pair(G_p, G_q) = 1 hold exactly, which is
what the encryption layer relies on.  *** This backend is INSECURE by
construction *** (discrete logs are stored in the clear); it exists so the
full system can be executed and tested quickly.  A curve-based backend can
replace it behind the same operations without touching callers.

Exponentiations and pairings are counted in a per-process `counters` object
so higher layers can assert operation budgets.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from gmpy2 import is_prime

__all__ = [
    "GroupParams",
    "GElem",
    "GTElem",
    "PowerTable",
    "OpCounters",
    "counters",
    "gen_params",
    "sample_gp",
    "sample_gq",
    "identity_g",
    "identity_gt",
    "mul",
    "pow",
    "inv",
    "pair",
    "precompute_base",
    "pow_pre",
    "params_to_text",
    "params_from_text",
]

_builtin_pow = pow

MIN_BITS = 4  # smallest width with two distinct primes of exact bit length


@dataclass(frozen=True)
class GroupParams:
    """Modulus N = P*Q with P, Q prime, both exactly `bits` bits."""

    N: int
    P: int
    Q: int
    bits: int

    def __post_init__(self):
        if self.N != self.P * self.Q:
            raise ValueError("N must equal P*Q")
        if self.P == self.Q:
            raise ValueError("P and Q must be distinct")


class _Elem:
    __slots__ = ("e", "params")

    def __init__(self, e: int, params: GroupParams):
        self.e = e % params.N
        self.params = params

    def __eq__(self, other):
        return (
            type(other) is type(self)
            and other.e == self.e
            and other.params == self.params
        )

    def __hash__(self):
        return hash((type(self).__name__, self.e, self.params.N))

    def __repr__(self):
        return f"{type(self).__name__}({self.e})"

    @property
    def is_identity(self) -> bool:
        return self.e == 0


class GElem(_Elem):
    """Source-group element (stored as its discrete log)."""

    @property
    def in_gp(self) -> bool:
        return self.e % self.params.Q == 0

    @property
    def in_gq(self) -> bool:
        return self.e % self.params.P == 0


class GTElem(_Elem):
    """Target-group element (stored as its discrete log)."""


@dataclass
class OpCounters:
    """Per-process operation counters; reset before a measured run."""

    pairings: int = 0
    exps: int = 0
    table_hits: int = 0

    def reset(self):
        self.pairings = 0
        self.exps = 0
        self.table_hits = 0

    def snapshot(self) -> "OpCounters":
        return OpCounters(self.pairings, self.exps, self.table_hits)

    @property
    def table_misses(self) -> int:
        return self.exps - self.table_hits


counters = OpCounters()


def _random_prime(bits: int, rng: random.Random) -> int:
    while True:
        cand = rng.getrandbits(bits) | (1 << (bits - 1)) | 1
        if is_prime(cand):
            return int(cand)


def gen_params(bits: int, seed: int) -> GroupParams:
    """Deterministically generate group parameters from a seed.

    `bits` is the exact bit length of each prime factor.  The library floor
    is MIN_BITS (tiny groups for exhaustive tests); the CLI enforces >= 16
    and defaults to 62, where the false-match probability of a query is
    below 2**-60.
    """
    if bits < MIN_BITS:
        raise ValueError(f"bits must be >= {MIN_BITS}")
    rng = random.Random(seed)
    p = _random_prime(bits, rng)
    q = p
    while q == p:
        q = _random_prime(bits, rng)
    return GroupParams(N=p * q, P=p, Q=q, bits=bits)


def sample_gp(params: GroupParams, rng: random.Random) -> GElem:
    """Uniform non-identity element of the order-P subgroup."""
    return GElem(params.Q * rng.randrange(1, params.P), params)


def sample_gq(params: GroupParams, rng: random.Random) -> GElem:
    """Uniform non-identity element of the order-Q subgroup."""
    return GElem(params.P * rng.randrange(1, params.Q), params)


def identity_g(params: GroupParams) -> GElem:
    return GElem(0, params)


def identity_gt(params: GroupParams) -> GTElem:
    return GTElem(0, params)


def _check_same(a: _Elem, b: _Elem):
    if a.params != b.params:
        raise ValueError("elements belong to different group parameters")


def mul(a, b):
    """Group operation; both operands must be of the same group and params."""
    if type(a) is not type(b):
        raise TypeError("cannot combine source- and target-group elements")
    _check_same(a, b)
    return type(a)((a.e + b.e) % a.params.N, a.params)


def pow(a, k: int):
    """Repeated group operation a^k, k taken mod N."""
    counters.exps += 1
    return type(a)((a.e * k) % a.params.N, a.params)


def inv(a):
    """Group inverse (exponent negation)."""
    return type(a)(-a.e % a.params.N, a.params)


def pair(a: GElem, b: GElem) -> GTElem:
    """Symmetric bilinear pairing G x G -> G_T."""
    if not (type(a) is GElem and type(b) is GElem):
        raise TypeError("pairing is defined on source-group elements")
    _check_same(a, b)
    counters.pairings += 1
    return GTElem((a.e * b.e) % a.params.N, a.params)


@dataclass(frozen=True)
class PowerTable:
    """Fixed-base exponentiation table (windowed).

    rows[i][j] holds base^(j * 2^(window*i)); pow_pre combines one row entry
    per window of the exponent, reproducing pow(base, k) exactly.
    """

    base_e: int
    params: GroupParams
    kind: type
    window: int
    rows: tuple = field(repr=False)


def precompute_base(a, window: int = 4) -> PowerTable:
    """One-time table so later exponentiations on `a` avoid full multiplies."""
    if not 1 <= window <= 16:
        raise ValueError("window out of range")
    n = a.params.N
    nwindows = -(-n.bit_length() // window)
    radix = 1 << window
    rows = []
    step = a.e
    for _ in range(nwindows):
        rows.append(tuple((step * j) % n for j in range(radix)))
        step = (step << window) % n
    return PowerTable(a.e, a.params, type(a), window, tuple(rows))


def pow_pre(table: PowerTable, k: int):
    """Table-backed equivalent of pow(base, k)."""
    counters.exps += 1
    counters.table_hits += 1
    n = table.params.N
    k %= n
    acc = 0
    i = 0
    mask = (1 << table.window) - 1
    while k:
        acc += table.rows[i][k & mask]
        k >>= table.window
        i += 1
    return table.kind(acc % n, table.params)


def params_to_text(params: GroupParams) -> str:
    return f"N={params.N} P={params.P} Q={params.Q} bits={params.bits}"


def params_from_text(text: str) -> GroupParams:
    fields = dict(part.split("=", 1) for part in text.split())
    try:
        return GroupParams(
            N=int(fields["N"]),
            P=int(fields["P"]),
            Q=int(fields["Q"]),
            bits=int(fields["bits"]),
        )
    except KeyError as exc:
        raise ValueError(f"missing field in group parameters: {exc}") from exc
