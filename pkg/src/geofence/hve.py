"""Hidden-vector encryption over the composite-order bilinear group.

A ciphertext binds a payload to an index bit vector I of width l; a token
encodes a search pattern over {0, 1, *}.  Querying a token against a
ciphertext recovers the payload iff I agrees with the pattern on every
non-wildcard position, and yields an out-of-domain value otherwise.

Key material (J = indices of non-wildcard positions):

  SK = ( g_q in G_q,  a in Z_P,  g, v, u_i, h_i, w_i in G_p )
  PK = ( g_q,  V = v*R_v,  A = e(g,v)^a,
         U_i = u_i*R_u_i,  H_i = h_i*R_h_i,  W_i = w_i*R_w_i )     R_* in G_q

  Encrypt(I, M):  s in Z_N;  Z, Z_i1, Z_i2 in G_q
      C' = M * A^s,  C_0 = V^s * Z,
      C_i1 = (U_i^{I_i} * H_i)^s * Z_i1,  C_i2 = W_i^s * Z_i2
  Token(p):  r_i1, r_i2 in Z_P for i in J
      K_0 = g^a * prod_{i in J} (u_i^{p_i} * h_i)^{r_i1} * w_i^{r_i2},
      K_i1 = v^{r_i1},  K_i2 = v^{r_i2}
  Query:   M = C' / ( e(C_0, K_0) / prod_{i in J} e(C_i1, K_i1)*e(C_i2, K_i2) )

On a match every G_q blinder cancels through the pairing and the quotient is
exactly M; on a mismatch it is offset by a fresh multiple of Q, which falls
outside the payload domain except with probability about 2/P per query.

Payloads are integers below 2**32 ("valid message domain"); a query result
outside that range decodes to None (the reject symbol).

Both keys can carry optional fixed-base power tables: encryption only ever
raises A, V, H_i, U_i*H_i and W_i to a power, and token generation only
g, v, h_i, u_i*h_i and w_i, so all bases are known at key-creation time.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace

from . import bilinear
from .bilinear import (
    GElem,
    GTElem,
    GroupParams,
    PowerTable,
    identity_gt,
    inv,
    mul,
    pair,
    pow_pre,
    precompute_base,
)

__all__ = [
    "MESSAGE_BOUND",
    "Pattern",
    "SecretKey",
    "PublicKey",
    "Ciphertext",
    "Token",
    "setup",
    "precompute_keys",
    "encrypt",
    "gen_token",
    "query",
    "plain_match",
    "pairing_cost",
    "token_to_text",
    "token_from_text",
    "tokens_to_text",
    "tokens_from_text",
    "ciphertext_to_text",
    "ciphertext_from_text",
    "ciphertexts_from_text",
]

MESSAGE_BOUND = 1 << 32

_power = bilinear.pow


@dataclass(frozen=True)
class Pattern:
    """Search pattern over {0, 1, *}; J caches the non-wildcard positions."""

    symbols: str
    J: tuple = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        bad = set(self.symbols) - set("01*")
        if bad:
            raise ValueError(f"pattern may contain only 0, 1, *: {bad}")
        object.__setattr__(
            self, "J", tuple(i for i, c in enumerate(self.symbols) if c != "*")
        )

    def __len__(self):
        return len(self.symbols)

    def __str__(self):
        return self.symbols

    @property
    def stars(self) -> int:
        return len(self.symbols) - len(self.J)


@dataclass(frozen=True)
class SecretKey:
    params: GroupParams
    gq: GElem
    a: int
    g: GElem
    v: GElem
    u: tuple
    h: tuple
    w: tuple
    tables: "SkTables | None" = None

    @property
    def l(self) -> int:
        return len(self.u)


@dataclass(frozen=True)
class PublicKey:
    params: GroupParams
    gq: GElem
    V: GElem
    A: GTElem
    U: tuple
    H: tuple
    W: tuple
    tables: "PkTables | None" = None

    @property
    def l(self) -> int:
        return len(self.U)


@dataclass(frozen=True)
class PkTables:
    V: PowerTable
    A: PowerTable
    H: tuple
    UH: tuple
    W: tuple


@dataclass(frozen=True)
class SkTables:
    g: PowerTable
    v: PowerTable
    h: tuple
    uh: tuple
    w: tuple


@dataclass(frozen=True)
class Ciphertext:
    c_prime: GTElem
    c0: GElem
    c1: tuple
    c2: tuple

    @property
    def l(self) -> int:
        return len(self.c1)


@dataclass(frozen=True)
class Token:
    """k1[j]/k2[j] correspond to position pattern.J[j]; wildcards carry none."""

    pattern: Pattern
    k0: GElem
    k1: tuple
    k2: tuple

    @property
    def l(self) -> int:
        return len(self.pattern)

    @property
    def size(self) -> int:
        """Number of group elements in the token."""
        return 1 + len(self.k1) + len(self.k2)


def setup(l: int, params: GroupParams, rng: random.Random,
          precompute: bool = False):
    """Generate a key pair of width l.  Blinders are consumed, not retained."""
    if l < 1:
        raise ValueError("width must be >= 1")
    gq = bilinear.sample_gq(params, rng)
    a = rng.randrange(params.P)
    g = bilinear.sample_gp(params, rng)
    v = bilinear.sample_gp(params, rng)
    u, h, w = [], [], []
    for _ in range(l):
        u.append(bilinear.sample_gp(params, rng))
        h.append(bilinear.sample_gp(params, rng))
        w.append(bilinear.sample_gp(params, rng))
    sk = SecretKey(params, gq, a, g, v, tuple(u), tuple(h), tuple(w))

    V = mul(v, bilinear.sample_gq(params, rng))
    A = _power(pair(g, v), a)
    U = tuple(mul(ui, bilinear.sample_gq(params, rng)) for ui in u)
    H = tuple(mul(hi, bilinear.sample_gq(params, rng)) for hi in h)
    W = tuple(mul(wi, bilinear.sample_gq(params, rng)) for wi in w)
    pk = PublicKey(params, gq, V, A, U, H, W)

    if precompute:
        pk, sk = precompute_keys(pk, sk)
    return pk, sk


def precompute_keys(pk: PublicKey, sk: SecretKey | None = None):
    """Attach fixed-base power tables to the keys (new objects)."""
    pk2 = replace(
        pk,
        tables=PkTables(
            V=precompute_base(pk.V),
            A=precompute_base(pk.A),
            H=tuple(precompute_base(hi) for hi in pk.H),
            UH=tuple(
                precompute_base(mul(ui, hi)) for ui, hi in zip(pk.U, pk.H)
            ),
            W=tuple(precompute_base(wi) for wi in pk.W),
        ),
    )
    if sk is None:
        return pk2
    sk2 = replace(
        sk,
        tables=SkTables(
            g=precompute_base(sk.g),
            v=precompute_base(sk.v),
            h=tuple(precompute_base(hi) for hi in sk.h),
            uh=tuple(
                precompute_base(mul(ui, hi)) for ui, hi in zip(sk.u, sk.h)
            ),
            w=tuple(precompute_base(wi) for wi in sk.w),
        ),
    )
    return pk2, sk2


def _check_index(index: str, l: int):
    if len(index) != l:
        raise ValueError(f"index width {len(index)} != key width {l}")
    if set(index) - set("01"):
        raise ValueError("index must be a bit string")


def encrypt(pk: PublicKey, index: str, message: int,
            rng: random.Random) -> Ciphertext:
    """Encrypt `message` under index bit string `index`."""
    _check_index(index, pk.l)
    if not 0 <= message < MESSAGE_BOUND:
        raise ValueError("message outside the valid domain [0, 2**32)")
    if message >= pk.params.N:
        raise ValueError("message exceeds group order; use larger key bits")
    params = pk.params
    t = pk.tables
    s = rng.randrange(params.N)

    a_s = pow_pre(t.A, s) if t else _power(pk.A, s)
    c_prime = mul(GTElem(message, params), a_s)
    v_s = pow_pre(t.V, s) if t else _power(pk.V, s)
    c0 = mul(v_s, bilinear.sample_gq(params, rng))

    c1, c2 = [], []
    for i in range(pk.l):
        if index[i] == "1":
            base_s = pow_pre(t.UH[i], s) if t else _power(mul(pk.U[i], pk.H[i]), s)
        else:
            base_s = pow_pre(t.H[i], s) if t else _power(pk.H[i], s)
        c1.append(mul(base_s, bilinear.sample_gq(params, rng)))
        w_s = pow_pre(t.W[i], s) if t else _power(pk.W[i], s)
        c2.append(mul(w_s, bilinear.sample_gq(params, rng)))
    return Ciphertext(c_prime, c0, tuple(c1), tuple(c2))


def gen_token(sk: SecretKey, pattern: Pattern | str,
              rng: random.Random) -> Token:
    """Issue a search token for `pattern`."""
    if isinstance(pattern, str):
        pattern = Pattern(pattern)
    if len(pattern) != sk.l:
        raise ValueError(f"pattern width {len(pattern)} != key width {sk.l}")
    params = sk.params
    t = sk.tables
    k0 = pow_pre(t.g, sk.a) if t else _power(sk.g, sk.a)
    k1, k2 = [], []
    for i in pattern.J:
        r1 = rng.randrange(params.P)
        r2 = rng.randrange(params.P)
        if pattern.symbols[i] == "1":
            base_r = pow_pre(t.uh[i], r1) if t else _power(mul(sk.u[i], sk.h[i]), r1)
        else:
            base_r = pow_pre(t.h[i], r1) if t else _power(sk.h[i], r1)
        w_r = pow_pre(t.w[i], r2) if t else _power(sk.w[i], r2)
        k0 = mul(k0, mul(base_r, w_r))
        k1.append(pow_pre(t.v, r1) if t else _power(sk.v, r1))
        k2.append(pow_pre(t.v, r2) if t else _power(sk.v, r2))
    return Token(pattern, k0, tuple(k1), tuple(k2))


def query(token: Token, c: Ciphertext) -> int | None:
    """Evaluate a token against a ciphertext.

    Returns the payload on a match and None otherwise.  Performs exactly
    1 + 2*|J| pairings.
    """
    if token.l != c.l:
        raise ValueError(f"token width {token.l} != ciphertext width {c.l}")
    denom = pair(c.c0, token.k0)
    prod = identity_gt(c.c0.params)
    for j, i in enumerate(token.pattern.J):
        prod = mul(prod, mul(pair(c.c1[i], token.k1[j]),
                             pair(c.c2[i], token.k2[j])))
    result = mul(c.c_prime, inv(mul(denom, inv(prod))))
    return result.e if result.e < MESSAGE_BOUND else None


def plain_match(index: str, pattern: Pattern | str) -> bool:
    """Plaintext match semantics: every non-* position must agree."""
    symbols = pattern.symbols if isinstance(pattern, Pattern) else pattern
    if len(index) != len(symbols):
        raise ValueError("index and pattern widths differ")
    return all(p == "*" or p == b for b, p in zip(index, symbols))


def pairing_cost(pattern: Pattern | str) -> int:
    """Pairings needed to query a token with this pattern: 1 + 2*|J|."""
    if isinstance(pattern, str):
        pattern = Pattern(pattern)
    return 1 + 2 * len(pattern.J)


# ---------------------------------------------------------------------------
# Text serialization (line oriented, decimal exponents)
# ---------------------------------------------------------------------------

def token_to_text(token: Token) -> str:
    lines = [
        f"HVETOK v1 l={token.l} J={','.join(map(str, token.pattern.J))}",
        f"pattern={token.pattern.symbols}",
        f"K0={token.k0.e}",
    ]
    for j, i in enumerate(token.pattern.J):
        lines.append(f"K{i},1={token.k1[j].e}")
        lines.append(f"K{i},2={token.k2[j].e}")
    return "\n".join(lines) + "\n"


def _parse_kv(line: str, key: str) -> str:
    if not line.startswith(key + "="):
        raise ValueError(f"expected '{key}=' line, got: {line!r}")
    return line[len(key) + 1:]


def token_from_text(text: str, params: GroupParams) -> Token:
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    head = lines[0].split()
    if head[:2] != ["HVETOK", "v1"]:
        raise ValueError("not a token file")
    fields = dict(part.split("=", 1) for part in head[2:])
    l = int(fields["l"])
    j_field = fields.get("J", "")
    j_list = tuple(int(x) for x in j_field.split(",") if x != "")
    pattern = Pattern(_parse_kv(lines[1], "pattern"))
    if len(pattern) != l or pattern.J != j_list:
        raise ValueError("token header disagrees with pattern")
    k0 = GElem(int(_parse_kv(lines[2], "K0")), params)
    k1, k2 = [], []
    pos = 3
    for i in j_list:
        k1.append(GElem(int(_parse_kv(lines[pos], f"K{i},1")), params))
        k2.append(GElem(int(_parse_kv(lines[pos + 1], f"K{i},2")), params))
        pos += 2
    return Token(pattern, k0, tuple(k1), tuple(k2))


def tokens_to_text(tokens, zone_id: str | None = None) -> str:
    """Concatenate token blocks; an optional zone id is kept as a comment."""
    parts = []
    if zone_id is not None:
        parts.append(f"# zone={zone_id}\n")
    parts.extend(token_to_text(t) for t in tokens)
    return "".join(parts)


def tokens_from_text(text: str, params: GroupParams):
    """Parse a file of concatenated token blocks.

    Returns a list of (zone_id, [tokens]) groups; tokens before any
    '# zone=' comment fall under zone id "all".
    """
    groups = []
    current_id = None
    block: list[str] = []

    def flush_block():
        if block:
            if not groups:
                groups.append(["all", []])
            groups[-1][1].append(token_from_text("\n".join(block), params))
            block.clear()

    for line in text.splitlines():
        if line.startswith("# zone="):
            flush_block()
            current_id = line[len("# zone="):].strip()
            groups.append([current_id, []])
        elif line.startswith("HVETOK"):
            flush_block()
            block.append(line)
        elif line.strip() and not line.startswith("#"):
            block.append(line)
    flush_block()
    return [(gid, toks) for gid, toks in groups if toks]


def ciphertext_to_text(c: Ciphertext) -> str:
    lines = [f"HVECTX v1 l={c.l}", f"Cp={c.c_prime.e}", f"C0={c.c0.e}"]
    for i in range(c.l):
        lines.append(f"C{i},1={c.c1[i].e}")
        lines.append(f"C{i},2={c.c2[i].e}")
    return "\n".join(lines) + "\n"


def ciphertext_from_text(text: str, params: GroupParams) -> Ciphertext:
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    head = lines[0].split()
    if head[:2] != ["HVECTX", "v1"]:
        raise ValueError("not a ciphertext file")
    l = int(dict(part.split("=", 1) for part in head[2:])["l"])
    c_prime = GTElem(int(_parse_kv(lines[1], "Cp")), params)
    c0 = GElem(int(_parse_kv(lines[2], "C0")), params)
    c1, c2 = [], []
    pos = 3
    for i in range(l):
        c1.append(GElem(int(_parse_kv(lines[pos], f"C{i},1")), params))
        c2.append(GElem(int(_parse_kv(lines[pos + 1], f"C{i},2")), params))
        pos += 2
    return Ciphertext(c_prime, c0, tuple(c1), tuple(c2))


def ciphertexts_from_text(text: str, params: GroupParams):
    """Parse concatenated ciphertext blocks; '# user=' comments carry ids."""
    out = []
    current_user = None
    block: list[str] = []
    counter = 0

    def flush():
        nonlocal current_user, counter
        if block:
            uid = current_user if current_user is not None else f"u{counter}"
            out.append((uid, ciphertext_from_text("\n".join(block), params)))
            counter += 1
            current_user = None
            block.clear()

    for line in text.splitlines():
        if line.startswith("# user="):
            flush()
            current_user = line[len("# user="):].strip()
        elif line.startswith("HVECTX"):
            flush()
            block.append(line)
        elif line.strip() and not line.startswith("#"):
            block.append(line)
    flush()
    return out
