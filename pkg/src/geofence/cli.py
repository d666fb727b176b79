"""Command-line driver: keygen | encrypt | tokengen | expand | match | bench.

Every subcommand is deterministic for a fixed seed; the GEOFENCE_SEED
environment variable overrides --seed.  Configuration errors exit with
status 2.
"""

from __future__ import annotations

import argparse
import os
import random
import sys

from . import bilinear, engine
from .bench import BenchConfig, ConfigError, run_bench, zone_cover
from .bilinear import GElem, GTElem, params_from_text, params_to_text
from .encoding import (
    AlertZone,
    GridSpec,
    baseline_index,
    cell_bits,
    cell_of_point,
    hve_width,
    zone_from_text,
    zone_to_text,
)
from .expansion import expand_zone
from .hve import (
    PublicKey,
    SecretKey,
    ciphertext_to_text,
    ciphertexts_from_text,
    encrypt,
    precompute_keys,
    setup,
    tokens_from_text,
    tokens_to_text,
)

CLI_MIN_BITS = 16


def _pk_to_text(pk: PublicKey, d: int, encoding: str) -> str:
    lines = [
        f"HVEPK v1 l={pk.l} d={d} encoding={encoding}",
        params_to_text(pk.params),
        f"gq={pk.gq.e}",
        f"V={pk.V.e}",
        f"A={pk.A.e}",
    ]
    for i in range(pk.l):
        lines.append(f"U{i}={pk.U[i].e}")
        lines.append(f"H{i}={pk.H[i].e}")
        lines.append(f"W{i}={pk.W[i].e}")
    return "\n".join(lines) + "\n"


def _sk_to_text(sk: SecretKey, d: int, encoding: str) -> str:
    lines = [
        f"HVESK v1 l={sk.l} d={d} encoding={encoding}",
        params_to_text(sk.params),
        f"gq={sk.gq.e}",
        f"a={sk.a}",
        f"g={sk.g.e}",
        f"v={sk.v.e}",
    ]
    for i in range(sk.l):
        lines.append(f"u{i}={sk.u[i].e}")
        lines.append(f"h{i}={sk.h[i].e}")
        lines.append(f"w{i}={sk.w[i].e}")
    return "\n".join(lines) + "\n"


def _parse_key_header(line: str, magic: str):
    head = line.split()
    if head[:2] != [magic, "v1"]:
        raise ValueError(f"not a {magic} file")
    fields = dict(part.split("=", 1) for part in head[2:])
    return int(fields["l"]), int(fields["d"]), fields["encoding"]


def _pk_from_text(text: str):
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    l, d, encoding = _parse_key_header(lines[0], "HVEPK")
    params = params_from_text(lines[1])
    vals = dict(ln.split("=", 1) for ln in lines[2:])
    pk = PublicKey(
        params,
        gq=GElem(int(vals["gq"]), params),
        V=GElem(int(vals["V"]), params),
        A=GTElem(int(vals["A"]), params),
        U=tuple(GElem(int(vals[f"U{i}"]), params) for i in range(l)),
        H=tuple(GElem(int(vals[f"H{i}"]), params) for i in range(l)),
        W=tuple(GElem(int(vals[f"W{i}"]), params) for i in range(l)),
    )
    return pk, d, encoding


def _sk_from_text(text: str):
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    l, d, encoding = _parse_key_header(lines[0], "HVESK")
    params = params_from_text(lines[1])
    vals = dict(ln.split("=", 1) for ln in lines[2:])
    sk = SecretKey(
        params,
        gq=GElem(int(vals["gq"]), params),
        a=int(vals["a"]),
        g=GElem(int(vals["g"]), params),
        v=GElem(int(vals["v"]), params),
        u=tuple(GElem(int(vals[f"u{i}"]), params) for i in range(l)),
        h=tuple(GElem(int(vals[f"h{i}"]), params) for i in range(l)),
        w=tuple(GElem(int(vals[f"w{i}"]), params) for i in range(l)),
    )
    return sk, d, encoding


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _effective_seed(args) -> int:
    env = os.environ.get("GEOFENCE_SEED")
    if env is not None:
        return int(env)
    return args.seed


def cmd_keygen(args) -> int:
    if args.bits < CLI_MIN_BITS:
        raise ConfigError(f"key bits must be >= {CLI_MIN_BITS}")
    grid = GridSpec(args.grid)
    width = hve_width(grid, args.encoding)
    seed = _effective_seed(args)
    rng = random.Random(seed)
    params = bilinear.gen_params(args.bits, rng.getrandbits(63))
    pk, sk = setup(width, params, rng)
    out = args.out or "geofence-key"
    _write(out + ".pub", _pk_to_text(pk, args.grid, args.encoding))
    _write(out + ".sec", _sk_to_text(sk, args.grid, args.encoding))
    print(f"wrote {out}.pub and {out}.sec (l={width}, bits={args.bits})")
    return 0


def cmd_encrypt(args) -> int:
    pk, d, encoding = _pk_from_text(_read(args.key))
    pk = precompute_keys(pk)
    grid = GridSpec(d)
    px, py = (float(v) for v in args.point.split(","))
    cell = cell_of_point(grid, px, py)
    index = (baseline_index(grid, cell) if encoding == "baseline"
             else cell_bits(grid, cell, encoding))
    rng = random.Random(_effective_seed(args))
    c = encrypt(pk, index, args.message, rng)
    _write(args.out, f"# user={args.user}\n" + ciphertext_to_text(c))
    return 0


def cmd_tokengen(args) -> int:
    sk, d, encoding = _sk_from_text(_read(args.key))
    grid_meta = GridSpec(d)
    zone_grid, zone = zone_from_text(_read(args.zone))
    if zone_grid.d != grid_meta.d:
        raise ConfigError("zone grid size does not match the key")
    patterns = zone_cover(zone_grid, zone, encoding)
    rng = random.Random(_effective_seed(args))
    tset = engine.build_zone_tokens(sk, args.zone_id, patterns, rng)
    _write(args.out, tokens_to_text(tset.tokens, args.zone_id))
    return 0


def cmd_expand(args) -> int:
    grid, zone = zone_from_text(_read(args.zone))
    result = expand_zone(args.alpha, zone, grid, args.encoding,
                         args.gain_mode)
    _write(args.out, zone_to_text(grid, AlertZone(result.cells, zone.shape)))
    report = (
        "cells_before,cells_added,alpha,budget_spent,"
        "pairings_before,pairings_after,improvement\n"
        f"{len(zone.cells)},{len(result.added)},{result.alpha!r},"
        f"{result.budget_spent},{result.pairings_before},"
        f"{result.pairings_after},{result.improvement!r}\n"
    )
    sys.stdout.write(report)
    return 0


def cmd_match(args) -> int:
    pk, _, _ = _pk_from_text(_read(args.key))
    params = pk.params
    zone_sets = [
        engine.ZoneTokenSet.from_tokens(zone_id, toks)
        for zone_id, toks in tokens_from_text(_read(args.tokens), params)
    ]
    ciphertexts = ciphertexts_from_text(_read(args.ctx), params)
    results = engine.match_all(ciphertexts, zone_sets, args.workers)
    _write(args.out, engine.results_to_csv(results))
    return 0


def cmd_bench(args) -> int:
    cfg = BenchConfig(
        d=args.grid,
        encoding=args.encoding,
        coverage=args.coverage,
        distribution=args.dist,
        shape=args.shape,
        alpha=args.alpha,
        workers=args.workers,
        seed=_effective_seed(args),
        bits=args.bits,
        users=args.users,
    )
    report = run_bench(cfg)
    _write(args.out, report.to_csv())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geofence",
        description="Private location alerts on encrypted grid cells.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, out_default=None):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=out_default)

    p = sub.add_parser("keygen", help="generate a key pair for a grid")
    p.add_argument("--grid", type=int, default=16)
    p.add_argument("--encoding", choices=("baseline", "hier", "gray"),
                   default="hier")
    p.add_argument("--bits", type=int, default=62)
    common(p, out_default="geofence-key")
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("encrypt", help="encrypt one location update")
    p.add_argument("--key", required=True, help="public key file (.pub)")
    p.add_argument("--point", required=True, help="px,py in [0,1)")
    p.add_argument("--message", type=int, default=1)
    p.add_argument("--user", default="u0")
    common(p)
    p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser("tokengen", help="issue tokens for an alert zone")
    p.add_argument("--key", required=True, help="secret key file (.sec)")
    p.add_argument("--zone", required=True, help="zone file")
    p.add_argument("--zone-id", default="z0")
    common(p)
    p.set_defaults(func=cmd_tokengen)

    p = sub.add_parser("expand", help="enlarge a zone to cut pairings")
    p.add_argument("--zone", required=True)
    p.add_argument("--alpha", type=float, default=0.10)
    p.add_argument("--encoding", choices=("hier", "gray"), default="gray")
    p.add_argument("--gain-mode", choices=("measured", "formula"),
                   default="measured")
    common(p)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("match", help="match ciphertexts against token sets")
    p.add_argument("--key", required=True, help="public key file (.pub)")
    p.add_argument("--tokens", required=True)
    p.add_argument("--ctx", required=True)
    p.add_argument("--workers", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("bench", help="run the benchmark protocol")
    p.add_argument("--grid", type=int, default=16)
    p.add_argument("--encoding", choices=("baseline", "hier", "gray"),
                   default="hier")
    p.add_argument("--coverage", type=float, default=0.04)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--bits", type=int, default=62)
    p.add_argument("--shape", choices=("square", "rect", "circle"),
                   default="square")
    p.add_argument("--dist", choices=("uniform", "gaussian"),
                   default="uniform")
    p.add_argument("--users", type=int, default=100)
    common(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
