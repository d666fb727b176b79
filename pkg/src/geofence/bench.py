"""Desk-scale benchmark protocol: data generation and the phase driver.

Wall-clock numbers depend on the machine; pairing, token and non-wildcard
counts do not, so the report carries both.  Alert-zone centers follow either
a uniform or a Gaussian distribution (mean at the domain center, sigma = d/8
per axis — recorded in the report header since it is a tunable choice).
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, fields

from . import bilinear, engine
from .encoding import (
    AlertZone,
    CellId,
    GridSpec,
    baseline_token,
    cell_of_point,
    baseline_index,
    cell_bits,
    hve_width,
    zone_to_cellset,
)
from .expansion import expand_zone
from .hve import encrypt, precompute_keys, setup
from .minimize import minimize

__all__ = [
    "ALPHAS",
    "ConfigError",
    "BenchConfig",
    "PhaseRow",
    "BenchReport",
    "gen_zones",
    "gen_users",
    "step_users",
    "square_zone",
    "rect_zone",
    "circle_zone",
    "zone_cover",
    "run_bench",
]

ALPHAS = (0.0, 0.02, 0.04, 0.06, 0.08, 0.10)
GAUSS_SIGMA_DIVISOR = 8  # sigma = d / 8
RECT_SKEW = 2.5


class ConfigError(ValueError):
    """Invalid benchmark configuration (CLI exits with code 2)."""


@dataclass(frozen=True)
class BenchConfig:
    d: int = 16
    encoding: str = "hier"
    coverage: float = 0.04
    distribution: str = "uniform"
    shape: str = "square"
    alpha: float = 0.0
    workers: int = 1
    seed: int = 0
    bits: int = 62
    users: int = 100

    def validate(self):
        if self.d < 2 or self.d > 1024 or self.d & (self.d - 1):
            raise ConfigError("grid size must be a power of two <= 1024")
        if self.encoding not in ("baseline", "hier", "gray"):
            raise ConfigError(f"unknown encoding {self.encoding!r}")
        if not 0.01 <= self.coverage <= 0.10:
            raise ConfigError("coverage must be within [0.01, 0.10]")
        if self.distribution not in ("uniform", "gaussian"):
            raise ConfigError(f"unknown distribution {self.distribution!r}")
        if self.shape not in ("square", "rect", "circle"):
            raise ConfigError(f"unknown shape {self.shape!r}")
        if not any(math.isclose(self.alpha, a, abs_tol=1e-9) for a in ALPHAS):
            raise ConfigError(f"alpha must be one of {ALPHAS}")
        if self.alpha > 0 and self.encoding == "baseline":
            raise ConfigError("zone expansion needs the hier or gray encoding")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.bits < 16:
            raise ConfigError("key bits must be >= 16")
        if self.users < 0:
            raise ConfigError("user count must be >= 0")
        return self


# ---------------------------------------------------------------------------
# Zone and user generation
# ---------------------------------------------------------------------------

def square_zone(grid: GridSpec, cx: int, cy: int, area: int) -> AlertZone:
    side = max(1, round(math.sqrt(area)))
    return _block_zone(grid, cx, cy, side, side, "square")


def rect_zone(grid: GridSpec, cx: int, cy: int, area: int,
              skew: float = RECT_SKEW) -> AlertZone:
    w = max(1, round(math.sqrt(area * skew)))
    h = max(1, round(w / skew))
    return _block_zone(grid, cx, cy, w, h, "rect")


def _block_zone(grid, cx, cy, w, h, shape) -> AlertZone:
    if w > grid.d or h > grid.d:
        raise ConfigError("zone larger than the grid; coverage unreachable")
    x0 = min(max(cx - w // 2, 0), grid.d - w)
    y0 = min(max(cy - h // 2, 0), grid.d - h)
    cells = frozenset(
        CellId(x, y, 0) for x in range(x0, x0 + w) for y in range(y0, y0 + h)
    )
    return AlertZone(cells, shape)


def circle_zone(grid: GridSpec, cx: int, cy: int, area: int) -> AlertZone:
    """Grid rasterization of a disk: cells whose center lies inside."""
    r = max(1.0, math.sqrt(area / math.pi))
    if 2 * r > grid.d:
        raise ConfigError("zone larger than the grid; coverage unreachable")
    cx = min(max(cx, math.ceil(r)), grid.d - math.ceil(r))
    cy = min(max(cy, math.ceil(r)), grid.d - math.ceil(r))
    cells = set()
    lo, hi = math.floor(-r - 1), math.ceil(r + 1)
    for dx in range(lo, hi + 1):
        for dy in range(lo, hi + 1):
            x, y = cx + dx, cy + dy
            if not (0 <= x < grid.d and 0 <= y < grid.d):
                continue
            if (x + 0.5 - cx) ** 2 + (y + 0.5 - cy) ** 2 <= r * r:
                cells.add(CellId(x, y, 0))
    if not cells:
        cells.add(CellId(cx, cy, 0))
    return AlertZone(frozenset(cells), "circle")


_SHAPES = {"square": square_zone, "rect": rect_zone, "circle": circle_zone}


def _draw_center(cfg: BenchConfig, rng: random.Random):
    if cfg.distribution == "gaussian":
        sigma = cfg.d / GAUSS_SIGMA_DIVISOR
        cx = round(rng.gauss(cfg.d / 2, sigma))
        cy = round(rng.gauss(cfg.d / 2, sigma))
    else:
        cx = rng.randrange(cfg.d)
        cy = rng.randrange(cfg.d)
    return min(max(cx, 0), cfg.d - 1), min(max(cy, 0), cfg.d - 1)


def gen_zones(cfg: BenchConfig, rng: random.Random):
    """Zones of the configured shape until the target coverage is reached.

    The total cell count lands within one zone's area of coverage * d*d.
    """
    grid = GridSpec(cfg.d)
    target = cfg.coverage * cfg.d * cfg.d
    nominal = max(4, round(target / 8))
    build = _SHAPES[cfg.shape]
    zones = []
    total = 0
    while total < target:
        cx, cy = _draw_center(cfg, rng)
        zone = build(grid, cx, cy, nominal)
        zones.append(zone)
        total += len(zone)
    return zones


def gen_users(n: int, rng: random.Random):
    """Uniform initial positions in the unit square."""
    if n < 0:
        raise ValueError("user count must be >= 0")
    return [(f"u{i}", (rng.random(), rng.random())) for i in range(n)]


def step_users(users, step: float, rng: random.Random):
    """One random-walk tick; each move has length at most `step`."""
    out = []
    for uid, (px, py) in users:
        angle = rng.random() * 2 * math.pi
        dist = rng.random() * step
        px = min(max(px + dist * math.cos(angle), 0.0), math.nextafter(1.0, 0.0))
        py = min(max(py + dist * math.sin(angle), 0.0), math.nextafter(1.0, 0.0))
        out.append((uid, (px, py)))
    return out


# ---------------------------------------------------------------------------
# Bench driver
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PhaseRow:
    phase: str
    wall_s: float
    pairings: int = 0
    tokens: int = 0
    nonwildcards: int = 0
    improvement: float | None = None


@dataclass
class BenchReport:
    config: BenchConfig
    rows: list

    def to_csv(self) -> str:
        cfg_fields = [f.name for f in fields(BenchConfig)]
        lines = [
            "# geofence bench report",
            f"# gauss_sigma=d/{GAUSS_SIGMA_DIVISOR} rect_skew={RECT_SKEW}",
            ",".join(cfg_fields) + ",phase,wall_s,pairings,tokens,"
            "nonwildcards,improvement",
        ]
        cfg_values = ",".join(repr(getattr(self.config, f)) for f in cfg_fields)
        for r in self.rows:
            imp = "" if r.improvement is None else repr(r.improvement)
            lines.append(
                f"{cfg_values},{r.phase},{r.wall_s!r},{r.pairings},"
                f"{r.tokens},{r.nonwildcards},{imp}"
            )
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "BenchReport":
        lines = [ln for ln in text.splitlines()
                 if ln.strip() and not ln.startswith("#")]
        header = lines[0].split(",")
        cfg_fields = {f.name: f.type for f in fields(BenchConfig)}
        rows = []
        config = None
        for line in lines[1:]:
            values = dict(zip(header, line.split(",")))
            kwargs = {}
            for name in cfg_fields:
                raw = values[name]
                kwargs[name] = (
                    raw.strip("'\"") if name in ("encoding", "distribution",
                                                 "shape")
                    else float(raw) if name in ("coverage", "alpha")
                    else int(raw)
                )
            config = BenchConfig(**kwargs)
            imp = values["improvement"]
            rows.append(PhaseRow(
                phase=values["phase"],
                wall_s=float(values["wall_s"]),
                pairings=int(values["pairings"]),
                tokens=int(values["tokens"]),
                nonwildcards=int(values["nonwildcards"]),
                improvement=None if imp == "" else float(imp),
            ))
        if config is None:
            raise ValueError("report holds no data rows")
        return cls(config, rows)


def zone_cover(grid: GridSpec, zone: AlertZone, encoding: str):
    """Patterns representing a zone under an encoding (list, sorted)."""
    if encoding == "baseline":
        return [baseline_token(grid, zone)]
    ids = zone_to_cellset(grid, zone, encoding)
    cover = minimize(ids, hve_width(grid, encoding))
    return list(cover.patterns)


def _index_of_cell(grid, cell, encoding):
    if encoding == "baseline":
        return baseline_index(grid, cell)
    return cell_bits(grid, cell, encoding)


def run_bench(cfg: BenchConfig) -> BenchReport:
    """Run the full protocol for one configuration and return the report."""
    cfg.validate()
    grid = GridSpec(cfg.d)
    base = random.Random(cfg.seed)
    zone_rng = random.Random(base.getrandbits(64))
    key_rng = random.Random(base.getrandbits(64))
    user_rng = random.Random(base.getrandbits(64))
    enc_rng = random.Random(base.getrandbits(64))
    tok_rng = random.Random(base.getrandbits(64))

    rows = []
    t0 = time.perf_counter()
    params = bilinear.gen_params(cfg.bits, key_rng.getrandbits(63))
    width = hve_width(grid, cfg.encoding)
    pk, sk = setup(width, params, key_rng)
    pk, sk = precompute_keys(pk, sk)
    rows.append(PhaseRow("keygen", time.perf_counter() - t0))

    zones = gen_zones(cfg, zone_rng)

    def tokensets_for(zone_list, rng):
        if cfg.encoding == "baseline":
            # one token covering every zone at once
            union = AlertZone(
                frozenset().union(*(z.cells for z in zone_list)), "freeform"
            )
            patterns_by_zone = {"all": [baseline_token(grid, union)]}
        else:
            patterns_by_zone = {
                f"z{i}": zone_cover(grid, z, cfg.encoding)
                for i, z in enumerate(zone_list)
            }
        sets = [
            engine.build_zone_tokens(sk, zid, pats, rng)
            for zid, pats in sorted(patterns_by_zone.items())
        ]
        ntokens = sum(len(s.tokens) for s in sets)
        nonwild = sum(
            len(t.pattern.J) for s in sets for t in s.tokens
        )
        budget = sum(s.pairing_budget for s in sets)
        return sets, ntokens, nonwild, budget

    t0 = time.perf_counter()
    token_sets, ntokens, nonwild, budget = tokensets_for(zones, tok_rng)
    rows.append(PhaseRow("tokengen", time.perf_counter() - t0,
                         pairings=budget, tokens=ntokens,
                         nonwildcards=nonwild))

    users = gen_users(cfg.users, user_rng)
    t0 = time.perf_counter()
    ciphertexts = []
    for uid, (px, py) in users:
        cell = cell_of_point(grid, px, py)
        index = _index_of_cell(grid, cell, cfg.encoding)
        ciphertexts.append((uid, encrypt(pk, index, 1 + len(ciphertexts),
                                         enc_rng)))
    rows.append(PhaseRow("encrypt", time.perf_counter() - t0))

    t0 = time.perf_counter()
    results = engine.match_all(ciphertexts, token_sets, cfg.workers)
    match_wall = time.perf_counter() - t0
    rows.append(PhaseRow("match", match_wall,
                         pairings=sum(r.pairings for r in results),
                         tokens=ntokens, nonwildcards=nonwild))

    if cfg.alpha > 0:
        t0 = time.perf_counter()
        expanded = [
            expand_zone(cfg.alpha, z, grid, cfg.encoding) for z in zones
        ]
        expand_wall = time.perf_counter() - t0
        exp_zones = [AlertZone(e.cells, z.shape)
                     for e, z in zip(expanded, zones)]
        exp_sets, exp_ntokens, exp_nonwild, _ = tokensets_for(
            exp_zones, random.Random(base.getrandbits(64))
        )
        t0 = time.perf_counter()
        exp_results = engine.match_all(ciphertexts, exp_sets, cfg.workers)
        exp_match_wall = time.perf_counter() - t0
        improvement = match_wall / exp_match_wall if exp_match_wall > 0 else 1.0
        rows.append(PhaseRow(
            "expansion", expand_wall,
            pairings=sum(r.pairings for r in exp_results),
            tokens=exp_ntokens, nonwildcards=exp_nonwild,
            improvement=improvement,
        ))
    else:
        rows.append(PhaseRow("expansion", 0.0, improvement=1.0))

    return BenchReport(cfg, rows)
