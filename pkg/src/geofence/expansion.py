"""Budgeted alert-zone enlargement.

Adding a few carefully chosen cells to a zone lets the pattern minimizer
merge more aggressively, so the zone needs fewer pairings to evaluate.  The
enlargement is capped at floor(alpha * |zone|) base cells.

The search walks the quadtree levels bottom-up.  At each level it scans the
even-aligned 2x2 blocks inside the zone's bounding rectangle, proposes
"patches" (non-zone cells of a block to attach), prices them
(cost = cells added, gain = non-wildcards saved), picks a best affordable
subset with a group-constrained knapsack, and accepts the level only if the
total pairing cost does not increase.  After acceptance the budget shrinks
by 4x and cell coordinates are halved: one cell of the next level covers
four cells of the current one.

Cells inside this module are plain (x, y) tuples at the current level.

Gains come in two flavours:
* measured (default) — the actual non-wildcard reduction of the block's
  local cover, computed with the minimizer under the active encoding;
* formula — a closed form: 1 for a 1+1 block, and for a filled block 2 when
  one cell was in the zone, 1 when two, 2*level when three.  The formula is
  0 for the three-cell case at level 0 even though filling the block there
  eliminates a whole token, which is why measured is the default.
"""

from __future__ import annotations

from dataclasses import dataclass

from .encoding import AlertZone, CellId, GridSpec, cell_bits
from .minimize import cover_cost, minimize

__all__ = [
    "Patch",
    "PatchGroup",
    "Budget",
    "ExpandedZone",
    "find_boundary",
    "mark_zone_cells",
    "patch_groups_inside_area",
    "recover_coord",
    "cost_gain",
    "knapsack_for_groups",
    "select_patches_level",
    "zone_pairing_cost",
    "expand_zone",
]

# spiral order inside a 2x2 block with origin (x, y):
# 0 -> (x, y), 1 -> (x+1, y), 2 -> (x+1, y+1), 3 -> (x, y+1)
_SPIRAL = ((0, 0), (1, 0), (1, 1), (0, 1))


@dataclass(frozen=True)
class Patch:
    """Cells to add (attached) next to zone cells (attaching), with price."""

    attached: frozenset
    attaching: frozenset
    cost: int = 0
    gain: int = 0

    def __post_init__(self):
        if self.attached & self.attaching:
            raise ValueError("attached and attaching cells must be disjoint")


@dataclass(frozen=True)
class PatchGroup:
    """Alternative patches for one block; at most one may be selected."""

    patches: tuple

    def __len__(self):
        return len(self.patches)


@dataclass(frozen=True)
class Budget:
    """Base-cell allowance: initial = floor(alpha * |zone|), never exceeded."""

    alpha: float
    initial: int
    spent: int = 0


@dataclass
class ExpandedZone:
    """Result of expansion: base cells, provenance and cost accounting."""

    cells: frozenset  # CellId at level 0
    origin: AlertZone
    budget: Budget
    pairings_before: int
    pairings_after: int
    levels_accepted: int

    @property
    def added(self):
        return self.cells - self.origin.cells

    @property
    def alpha(self) -> float:
        return self.budget.alpha

    @property
    def budget_initial(self) -> int:
        return self.budget.initial

    @property
    def budget_spent(self) -> int:
        return self.budget.spent

    @property
    def improvement(self) -> float:
        if self.pairings_after == 0:
            return 1.0
        return self.pairings_before / self.pairings_after


def find_boundary(d_k: int, cells):
    """Bounding rectangle of the cells, stretched to whole 2x2 blocks.

    Minima round down to even, maxima round up to odd, clamped to the grid.
    """
    if not cells:
        raise ValueError("empty cell set has no boundary")
    xs = [c[0] for c in cells]
    ys = [c[1] for c in cells]
    min_x = min(xs) & ~1
    min_y = min(ys) & ~1
    max_x = min(max(xs) | 1, d_k - 1)
    max_y = min(max(ys) | 1, d_k - 1)
    return min_x, max_x, min_y, max_y


def mark_zone_cells(zone_cells, x: int, y: int):
    """Spiral-order membership flags for the block with origin (x, y)."""
    if x % 2 or y % 2:
        raise ValueError("block origin must be even-aligned")
    return tuple((x + dx, y + dy) in zone_cells for dx, dy in _SPIRAL)


def recover_coord(i: int, x: int, y: int):
    """Level coordinates of spiral slot i within the block at (x, y)."""
    if not 0 <= i <= 3:
        raise ValueError("spiral index must be in 0..3")
    return (x + (1 if i in (1, 2) else 0), y + (1 if i in (2, 3) else 0))


def patch_groups_inside_area(marked):
    """Patch groups for one block, expressed in spiral indices.

    one zone cell   -> one group: each adjacent single cell, plus all three;
    two adjacent    -> one group with the one two-cell patch;
    two opposite    -> two groups, one single-cell patch each;
    three zone cells-> one group with the one single-cell patch.
    """
    zone = [i for i in range(4) if marked[i]]
    empty = [i for i in range(4) if not marked[i]]
    n = len(zone)
    if n in (0, 4):
        raise ValueError("block must contain 1..3 zone cells")

    def patch(attached, attaching):
        return Patch(frozenset(attached), frozenset(attaching))

    if n == 1:
        z = zone[0]
        group = PatchGroup((
            patch({(z + 1) % 4}, {z}),
            patch({(z - 1) % 4}, {z}),
            patch(set(empty), {z}),
        ))
        return [group]
    if n == 2:
        diff = (zone[1] - zone[0]) % 4
        if diff == 2:  # opposite corners
            return [
                PatchGroup((patch({empty[0]}, {zone[0]}),)),
                PatchGroup((patch({empty[1]}, {zone[1]}),)),
            ]
        return [PatchGroup((patch(set(empty), set(zone)),))]
    return [PatchGroup((patch(set(empty), set(zone)),))]


def _local_nonwild(cells, d_k: int, k: int, encoding: str) -> int:
    grid = GridSpec(d_k) if d_k >= 2 else None
    if grid is None:
        return 0
    ids = {cell_bits(grid, CellId(x, y, 0), encoding) for x, y in cells}
    cover = minimize(ids, 2 * grid.level_bits)
    return cover_cost(cover)[0]


def cost_gain(p: Patch, k: int, d_k: int = 0, block_zone=None,
              encoding: str = "gray", mode: str = "measured") -> Patch:
    """Price a patch: cost = cells added; gain = non-wildcards saved.

    Measured mode minimizes the block's zone cells with and without the
    attached cells and takes the difference (never below zero).
    """
    n1 = len(p.attaching)
    n2 = len(p.attached)
    cost = n2
    if mode == "formula":
        if n1 + n2 == 2:
            gain = 1
        elif n1 + n2 == 4:
            gain = 2 if n1 == 1 else (1 if n1 == 2 else 2 * k)
        else:
            gain = 0
    elif mode == "measured":
        if block_zone is None:
            block_zone = p.attaching
        before = _local_nonwild(block_zone, d_k, k, encoding)
        after = _local_nonwild(set(block_zone) | set(p.attached), d_k, k,
                               encoding)
        gain = max(0, before - after)
    else:
        raise ValueError(f"unknown gain mode {mode!r}")
    return Patch(p.attached, p.attaching, cost, gain)


def knapsack_for_groups(capacity: int, groups):
    """Pick at most one patch per group, total cost <= capacity, max gain.

    Dynamic program over (group, remaining capacity) with backtracking;
    returns the selected patches in group order.
    """
    if capacity < 0:
        raise ValueError("capacity must be non-negative")
    groups = list(groups)
    ng = len(groups)
    table = [[0] * (capacity + 1) for _ in range(ng + 1)]
    for gi in range(1, ng + 1):
        prev = table[gi - 1]
        row = table[gi]
        for w in range(capacity + 1):
            best = prev[w]
            for p in groups[gi - 1].patches:
                if p.cost <= w:
                    cand = p.gain + prev[w - p.cost]
                    if cand > best:
                        best = cand
            row[w] = best

    selected = []
    w = capacity
    for gi in range(ng, 0, -1):
        if table[gi][w] == 0:
            break
        if table[gi][w] == table[gi - 1][w]:
            continue
        for p in groups[gi - 1].patches:
            if p.cost <= w and table[gi][w] == p.gain + table[gi - 1][w - p.cost]:
                selected.append(p)
                w -= p.cost
                break
    selected.reverse()
    return selected


def select_patches_level(capacity: int, d_k: int, zone_cells, *, k: int = 0,
                         encoding: str = "gray", gain_mode: str = "measured"):
    """Patches worth buying at one level: scan blocks, price, knapsack.

    Only patches with positive gain enter the knapsack.
    """
    if capacity < 0:
        raise ValueError("capacity must be non-negative")
    if not zone_cells or d_k < 2:
        return []
    min_x, max_x, min_y, max_y = find_boundary(d_k, zone_cells)
    groups = []
    for x in range(min_x, max_x, 2):
        for y in range(min_y, max_y, 2):
            block = [(x + dx, y + dy) for dx, dy in _SPIRAL]
            c = sum(1 for cell in block if cell in zone_cells)
            if not 0 < c < 4:
                continue
            marked = mark_zone_cells(zone_cells, x, y)
            block_zone = {cell for cell in block if cell in zone_cells}
            for group in patch_groups_inside_area(marked):
                priced = []
                for p in group.patches:
                    real = Patch(
                        frozenset(recover_coord(i, x, y) for i in p.attached),
                        frozenset(recover_coord(i, x, y) for i in p.attaching),
                    )
                    real = cost_gain(real, k, d_k, block_zone, encoding,
                                     gain_mode)
                    if real.gain > 0:
                        priced.append(real)
                if priced:
                    groups.append(PatchGroup(tuple(priced)))
    return knapsack_for_groups(capacity, groups)


def _base_cells(x: int, y: int, k: int):
    """Level-0 cells covered by the level-k cell (x, y)."""
    size = 1 << k
    bx, by = x << k, y << k
    return {(bx + i, by + j) for i in range(size) for j in range(size)}


class _CoverCostCache:
    """Memoizes the pairing cost of a cell set under one encoding."""

    def __init__(self, grid: GridSpec, encoding: str):
        self.grid = grid
        self.encoding = encoding
        self.width = 2 * grid.level_bits
        self._cache: dict[frozenset, int] = {}

    def pairings(self, cells) -> int:
        key = frozenset(cells)
        hit = self._cache.get(key)
        if hit is None:
            ids = {
                cell_bits(self.grid, CellId(x, y, 0), self.encoding)
                for x, y in key
            }
            hit = cover_cost(minimize(ids, self.width))[1]
            self._cache[key] = hit
        return hit


def zone_pairing_cost(grid: GridSpec, cells, encoding: str) -> int:
    """Total pairings to evaluate a set of base cells after minimization."""
    return _CoverCostCache(grid, encoding).pairings(
        {(c.x, c.y) if isinstance(c, CellId) else c for c in cells}
    )


def expand_zone(alpha: float, zone: AlertZone, grid: GridSpec,
                encoding: str = "gray", gain_mode: str = "measured",
                budget: int | None = None) -> ExpandedZone:
    """Enlarge a level-0 zone by at most floor(alpha*|zone|) base cells.

    Walks levels upward while the budget lasts and each step keeps the
    pairing cost from rising; `budget` overrides the alpha-derived cap.
    """
    if alpha < 0:
        raise ValueError("expansion ratio must be non-negative")
    if zone.level != 0:
        raise ValueError("expansion starts from a level-0 zone")
    if encoding not in ("hier", "gray"):
        raise ValueError("expansion requires the hier or gray encoding")

    cache = _CoverCostCache(grid, encoding)
    origin = {(c.x, c.y) for c in zone.cells}
    capacity = int(alpha * len(origin)) if budget is None else budget
    initial_budget = capacity
    expanded = set(origin)
    crt = set(origin)
    pairings_before = cache.pairings(origin)
    current_cost = pairings_before
    levels_accepted = 0

    for k in range(grid.level_bits + 1):
        d_k = grid.d >> k
        pset = select_patches_level(capacity, d_k, crt, k=k,
                                    encoding=encoding, gain_mode=gain_mode)
        tentative = set(expanded)
        for p in pset:
            for (x, y) in p.attached:
                tentative |= _base_cells(x, y, k)
        tentative_cost = cache.pairings(tentative)
        if tentative_cost > current_cost:
            break  # the step would make matching more expensive
        expanded = tentative
        current_cost = tentative_cost
        levels_accepted += 1
        for p in pset:
            capacity -= p.cost
            crt |= p.attached
        capacity //= 4
        if capacity <= 0:
            break
        crt = {(x // 2, y // 2) for (x, y) in crt}

    return ExpandedZone(
        cells=frozenset(CellId(x, y, 0) for x, y in expanded),
        origin=zone,
        budget=Budget(alpha, initial_budget, len(expanded) - len(origin)),
        pairings_before=pairings_before,
        pairings_after=current_cost,
        levels_accepted=levels_accepted,
    )
