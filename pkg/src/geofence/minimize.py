"""Aggregation of cell-id sets into few wildcard patterns.

A set of equal-width bit strings (the ids of the cells in a zone) is treated
as the ON-set of a boolean function and covered by prime implicants:
Quine-McCluskey merging followed by essential-implicant extraction and a
greedy set cover.  Guarantees, in order of importance:

* exact coverage — the union of the chosen patterns' expansions equals the
  input set (a '*' never swallows a cell outside the zone);
* primality — no chosen pattern can turn a fixed bit into '*' without
  covering a non-member;
* small, not minimum, cover (greedy; minimum covering is NP-hard).

Cubes are (value, mask) integer pairs; mask bits mark fixed positions and
string position 0 is the most significant bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .hve import Pattern, pairing_cost

__all__ = [
    "Cover",
    "minimize",
    "expand_pattern",
    "expand_cover",
    "cover_cost",
    "to_pla",
    "from_pla",
]


@dataclass(frozen=True)
class Cover:
    patterns: tuple
    width: int

    def __len__(self):
        return len(self.patterns)


def _to_pattern(value: int, mask: int, width: int) -> Pattern:
    chars = []
    for pos in range(width):
        bit = 1 << (width - 1 - pos)
        if not mask & bit:
            chars.append("*")
        else:
            chars.append("1" if value & bit else "0")
    return Pattern("".join(chars))


def _prime_implicants(minterms: frozenset, width: int):
    """All maximal cubes whose expansion stays inside the ON-set."""
    full = (1 << width) - 1
    current = {full: set(minterms)}
    primes = []
    while current:
        nxt: dict[int, set[int]] = {}
        for mask, values in current.items():
            care_bits = [1 << b for b in range(width) if mask & (1 << b)]
            for v in values:
                merged = False
                for b in care_bits:
                    if v ^ b in values:
                        merged = True
                        if not v & b:
                            nm = mask ^ b
                            nxt.setdefault(nm, set()).add(v)
                if not merged:
                    primes.append((v, mask))
        current = nxt
    return primes


def _cube_minterms(value: int, mask: int, width: int):
    free = [1 << b for b in range(width) if not mask & (1 << b)]
    out = []
    for combo in product((0, 1), repeat=len(free)):
        m = value
        for on, bit in zip(combo, free):
            if on:
                m |= bit
        out.append(m)
    return out


def minimize(cells, width: int) -> Cover:
    """Cover a non-empty set of width-`width` bit strings exactly."""
    cellset = set(cells)
    if not cellset:
        raise ValueError("cannot minimize an empty set")
    for s in cellset:
        if len(s) != width or set(s) - set("01"):
            raise ValueError(f"not a width-{width} bit string: {s!r}")
    minterms = frozenset(int(s, 2) for s in cellset)
    primes = _prime_implicants(minterms, width)

    cover_lists = {m: [] for m in minterms}
    expansions = []
    for idx, (v, mask) in enumerate(primes):
        exp = _cube_minterms(v, mask, width)
        expansions.append(exp)
        for m in exp:
            cover_lists[m].append(idx)

    chosen: set[int] = set()
    uncovered = set(minterms)
    # essential primes: sole cover of some minterm
    for m, idxs in cover_lists.items():
        if len(idxs) == 1:
            chosen.add(idxs[0])
    for idx in chosen:
        uncovered.difference_update(expansions[idx])
    # greedy on the rest; ties broken toward wider cubes then id string
    while uncovered:
        best = None
        for idx, (v, mask) in enumerate(primes):
            if idx in chosen:
                continue
            gain = sum(1 for m in expansions[idx] if m in uncovered)
            if gain == 0:
                continue
            key = (-gain, bin(mask).count("1"), v, mask)
            if best is None or key < best[0]:
                best = (key, idx)
        chosen.add(best[1])
        uncovered.difference_update(expansions[best[1]])

    patterns = sorted(
        (_to_pattern(*primes[idx], width) for idx in chosen),
        key=lambda p: p.symbols,
    )
    return Cover(tuple(patterns), width)


def expand_pattern(pattern: Pattern | str):
    """All bit strings matching the pattern (2**stars of them)."""
    symbols = pattern.symbols if isinstance(pattern, Pattern) else pattern
    stars = [i for i, c in enumerate(symbols) if c == "*"]
    base = list(symbols)
    out = set()
    for combo in product("01", repeat=len(stars)):
        for i, c in zip(stars, combo):
            base[i] = c
        out.add("".join(base))
    return out


def expand_cover(cover: Cover):
    out = set()
    for p in cover.patterns:
        out |= expand_pattern(p)
    return out


def cover_cost(cover: Cover):
    """(total non-wildcard count, total pairing cost) of a cover."""
    nonwild = sum(len(p.J) for p in cover.patterns)
    pairings = sum(pairing_cost(p) for p in cover.patterns)
    return nonwild, pairings


def to_pla(cells, width: int) -> str:
    """Emit an ON-set in PLA text form (for external cross-checks)."""
    lines = [f".i {width}", ".o 1"]
    lines.extend(f"{s} 1" for s in sorted(cells))
    lines.append(".e")
    return "\n".join(lines) + "\n"


def from_pla(text: str):
    """Read a PLA ON-set; '-' in input columns is accepted as '*'."""
    width = None
    rows = set()
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith(".i"):
            width = int(line.split()[1])
        elif line.startswith("."):
            continue
        else:
            bits, out = line.split()
            if out != "1":
                continue
            bits = bits.replace("-", "*")
            if width is not None and len(bits) != width:
                raise ValueError("row width disagrees with .i")
            rows |= expand_pattern(bits)
    if width is None:
        raise ValueError("missing .i header")
    return rows, width
