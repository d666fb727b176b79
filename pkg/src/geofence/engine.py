"""Server-side matching: token stores, early exit, and parallel dispatch.

A zone is a disjunction of tokens, evaluated from the cheapest (most
wildcards) to the most expensive; the first match ends the zone.  Each
(ciphertext, zone) pair is an independent task, so the coordinator just
hands out task chunks to worker processes from a shared queue; tokens and
ciphertexts are read-only and inherited by fork.
"""

from __future__ import annotations

import multiprocessing as mp
import random
from dataclasses import dataclass
from time import perf_counter_ns

from . import bilinear
from .hve import SecretKey, gen_token, pairing_cost, query

__all__ = [
    "ZoneTokenSet",
    "MatchResult",
    "token_sort_key",
    "build_zone_tokens",
    "match_user_zone",
    "match_all",
    "instrument",
    "reset_counters",
    "results_to_csv",
]

_SYMBOL_RANK = {"0": 0, "1": 1, "*": 2}


def token_sort_key(pattern) -> tuple:
    """Most wildcards first; ties by pattern text with '*' ranked last."""
    symbols = getattr(pattern, "symbols", pattern)
    stars = symbols.count("*")
    return (-stars, tuple(_SYMBOL_RANK[c] for c in symbols))


@dataclass(frozen=True)
class ZoneTokenSet:
    """Tokens of one zone in evaluation order, plus the worst-case budget."""

    zone_id: str
    tokens: tuple
    pairing_budget: int

    @classmethod
    def from_tokens(cls, zone_id: str, tokens) -> "ZoneTokenSet":
        ordered = tuple(
            sorted(tokens, key=lambda t: token_sort_key(t.pattern))
        )
        budget = sum(pairing_cost(t.pattern) for t in ordered)
        return cls(zone_id, ordered, budget)


def build_zone_tokens(sk: SecretKey, zone_id: str, patterns,
                      rng: random.Random) -> ZoneTokenSet:
    """Issue tokens for a zone's patterns, already in evaluation order."""
    ordered = sorted(patterns, key=token_sort_key)
    tokens = tuple(gen_token(sk, p, rng) for p in ordered)
    return ZoneTokenSet(zone_id, tokens, sum(map(pairing_cost, ordered)))


@dataclass(frozen=True)
class MatchResult:
    user_id: str
    zone_id: str
    message: int | None  # payload on match, None otherwise
    pairings: int
    micros: int = 0

    @property
    def matched(self) -> bool:
        return self.message is not None


def match_user_zone(c, zone: ZoneTokenSet) -> MatchResult:
    """Try the zone's tokens in order; stop at the first match."""
    pairings = 0
    for token in zone.tokens:
        pairings += pairing_cost(token.pattern)
        message = query(token, c)
        if message is not None:
            return MatchResult("", zone.zone_id, message, pairings)
    return MatchResult("", zone.zone_id, None, pairings)


# Read-only task data inherited by forked workers.
_WORK = None


def _match_span(span):
    lo, hi = span
    ciphers, zones = _WORK
    nz = len(zones)
    out = []
    for t in range(lo, hi):
        ci, zi = divmod(t, nz)
        uid, c = ciphers[ci]
        t0 = perf_counter_ns()
        r = match_user_zone(c, zones[zi])
        micros = (perf_counter_ns() - t0) // 1000
        out.append(MatchResult(uid, r.zone_id, r.message, r.pairings, micros))
    return out


def match_all(ciphertexts, zones, workers: int = 1):
    """Match every ciphertext against every zone.

    `ciphertexts` is a sequence of (user_id, Ciphertext).  The result
    multiset does not depend on the worker count; ordering may.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    ciphers = list(ciphertexts)
    zones = list(zones)
    ntasks = len(ciphers) * len(zones)
    if ntasks == 0:
        return []
    global _WORK
    _WORK = (ciphers, zones)
    try:
        if workers == 1:
            return _match_span((0, ntasks))
        chunk = max(1, ntasks // (workers * 8))
        spans = [(i, min(i + chunk, ntasks)) for i in range(0, ntasks, chunk)]
        results = []
        ctx = mp.get_context("fork")
        with ctx.Pool(workers) as pool:
            for part in pool.imap_unordered(_match_span, spans):
                results.extend(part)
        return results
    finally:
        _WORK = None


def instrument() -> bilinear.OpCounters:
    """Per-process pairing / exponentiation / table-hit counters."""
    return bilinear.counters


def reset_counters():
    bilinear.counters.reset()


def results_to_csv(results) -> str:
    lines = ["user,zone,outcome,pairings,micros"]
    for r in sorted(results, key=lambda r: (r.user_id, r.zone_id)):
        outcome = "match" if r.matched else "nonmatch"
        lines.append(f"{r.user_id},{r.zone_id},{outcome},{r.pairings},{r.micros}")
    return "\n".join(lines) + "\n"
