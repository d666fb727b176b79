"""Grid addressing and the three index encodings.

A d x d grid covers the unit square; cell (0, 0) is the top-left corner,
x grows rightward (columns), y grows downward (rows).

Three ways to express a cell as an HVE index:

* baseline  — one-hot over the row-major cell number 1..d*d (width d*d).
  The alert-zone token is a single pattern with '*' at every zone cell.
* hier      — recursive quadrant id, width 2*log2(d), coarsest pair first.
  Each level contributes (x-bit, y-bit): 00 top-left, 01 bottom-left,
  10 top-right, 11 bottom-right.
* gray      — per-axis reflected binary codes, width 2*log2(d), y code
  first then x code.  Neighboring rows/columns differ in exactly one bit,
  which helps pattern aggregation for contiguous zones.

hier and gray require d to be a power of two; the baseline works for any d.
"""

from __future__ import annotations

from dataclasses import dataclass

from .hve import Pattern

__all__ = [
    "ENCODINGS",
    "GridSpec",
    "CellId",
    "AlertZone",
    "hve_width",
    "cell_of_point",
    "cell_number",
    "baseline_index",
    "baseline_token",
    "hier_id",
    "hier_cell",
    "gray_code",
    "gray_decode",
    "gray_id",
    "gray_cell",
    "cell_bits",
    "zone_to_cellset",
    "zone_to_text",
    "zone_from_text",
]

ENCODINGS = ("baseline", "hier", "gray")

MAX_D = 1024


@dataclass(frozen=True)
class GridSpec:
    """d cells per side; hier/gray additionally need d to be a power of two."""

    d: int

    def __post_init__(self):
        if not 2 <= self.d <= MAX_D:
            raise ValueError(f"grid size must be in [2, {MAX_D}]")

    @property
    def is_power_of_two(self) -> bool:
        return self.d & (self.d - 1) == 0

    @property
    def level_bits(self) -> int:
        """log2(d); defined for power-of-two grids only."""
        if not self.is_power_of_two:
            raise ValueError("hierarchy requires a power-of-two grid size")
        return self.d.bit_length() - 1

    @property
    def levels(self) -> int:
        return 1 + self.level_bits


@dataclass(frozen=True)
class CellId:
    """Cell (x, y) at hierarchy level k; level 0 is the base grid."""

    x: int
    y: int
    k: int = 0


@dataclass(frozen=True)
class AlertZone:
    """Non-empty set of cells, all at the same level."""

    cells: frozenset
    shape: str = "freeform"

    def __post_init__(self):
        if not self.cells:
            raise ValueError("alert zone must be non-empty")
        levels = {c.k for c in self.cells}
        if len(levels) != 1:
            raise ValueError("alert zone cells must share one level")

    @property
    def level(self) -> int:
        return next(iter(self.cells)).k

    def __len__(self):
        return len(self.cells)


def _check_cell(grid: GridSpec, cell: CellId, level: int = 0):
    if cell.k != level:
        raise ValueError(f"expected a level-{level} cell")
    if not (0 <= cell.x < grid.d and 0 <= cell.y < grid.d):
        raise ValueError(f"cell {cell} out of bounds for d={grid.d}")


def hve_width(grid: GridSpec, encoding: str) -> int:
    """HVE width used by an encoding: d*d baseline, 2*log2(d) otherwise."""
    if encoding == "baseline":
        return grid.d * grid.d
    if encoding in ("hier", "gray"):
        return 2 * grid.level_bits
    raise ValueError(f"unknown encoding {encoding!r}")


def cell_of_point(grid: GridSpec, px: float, py: float) -> CellId:
    """Map a point of the half-open unit square to its base cell."""
    if not (0 <= px < 1 and 0 <= py < 1):
        raise ValueError("coordinates must lie in [0, 1)")
    return CellId(int(px * grid.d), int(py * grid.d), 0)


def cell_number(grid: GridSpec, cell: CellId) -> int:
    """Row-major cell number, 1 at the top-left, d*d at the bottom-right."""
    _check_cell(grid, cell)
    return cell.y * grid.d + cell.x + 1


def baseline_index(grid: GridSpec, cell: CellId) -> str:
    """One-hot index string of width d*d for a base cell."""
    p = cell_number(grid, cell)
    w = grid.d * grid.d
    return "0" * (p - 1) + "1" + "0" * (w - p)


def baseline_token(grid: GridSpec, zone: AlertZone) -> Pattern:
    """Single pattern with '*' exactly at the zone cells, '0' elsewhere."""
    w = grid.d * grid.d
    symbols = ["0"] * w
    for cell in zone.cells:
        symbols[cell_number(grid, cell) - 1] = "*"
    return Pattern("".join(symbols))


def hier_id(grid: GridSpec, cell: CellId) -> str:
    """Quadtree id of a base cell, two bits per level, coarsest first."""
    _check_cell(grid, cell)
    nbits = grid.level_bits
    out = []
    for lvl in range(nbits - 1, -1, -1):
        out.append("1" if cell.x >> lvl & 1 else "0")
        out.append("1" if cell.y >> lvl & 1 else "0")
    return "".join(out)


def hier_cell(grid: GridSpec, bits: str) -> CellId:
    """Inverse of hier_id."""
    nbits = grid.level_bits
    if len(bits) != 2 * nbits:
        raise ValueError("id width does not match the grid")
    x = y = 0
    for lvl in range(nbits):
        x = x << 1 | (bits[2 * lvl] == "1")
        y = y << 1 | (bits[2 * lvl + 1] == "1")
    return CellId(x, y, 0)


def gray_code(nbits: int, n: int) -> str:
    """n-th codeword of the width-`nbits` reflected binary code."""
    if not 0 <= n < (1 << nbits):
        raise ValueError("value out of range for the code width")
    return format(n ^ (n >> 1), f"0{nbits}b")


def gray_decode(bits: str) -> int:
    n = 0
    for b in bits:
        n = (n << 1) | ((n & 1) ^ (b == "1"))
    return n


def gray_id(grid: GridSpec, cell: CellId) -> str:
    """Per-axis reflected-code id: code(y) followed by code(x)."""
    _check_cell(grid, cell)
    nbits = grid.level_bits
    return gray_code(nbits, cell.y) + gray_code(nbits, cell.x)


def gray_cell(grid: GridSpec, bits: str) -> CellId:
    """Inverse of gray_id."""
    nbits = grid.level_bits
    if len(bits) != 2 * nbits:
        raise ValueError("id width does not match the grid")
    return CellId(gray_decode(bits[nbits:]), gray_decode(bits[:nbits]), 0)


def cell_bits(grid: GridSpec, cell: CellId, encoding: str) -> str:
    """Binary id of a base cell under hier or gray encoding."""
    if encoding == "hier":
        return hier_id(grid, cell)
    if encoding == "gray":
        return gray_id(grid, cell)
    raise ValueError(f"no binary cell id for encoding {encoding!r}")


def zone_to_cellset(grid: GridSpec, zone: AlertZone, encoding: str):
    """One binary id per zone cell (the aggregation input)."""
    if zone.level != 0:
        raise ValueError("expected a level-0 zone")
    return {cell_bits(grid, c, encoding) for c in zone.cells}


def zone_to_text(grid: GridSpec, zone: AlertZone) -> str:
    lines = [f"ZONE v1 d={grid.d} k={zone.level}"]
    if zone.shape:
        lines.append(f"# shape={zone.shape}")
    for cell in sorted(zone.cells, key=lambda c: (c.y, c.x)):
        lines.append(f"cell={cell.x},{cell.y}")
    return "\n".join(lines) + "\n"


def zone_from_text(text: str):
    """Parse a zone file; returns (GridSpec, AlertZone)."""
    lines = text.splitlines()
    head = lines[0].split()
    if head[:2] != ["ZONE", "v1"]:
        raise ValueError("not a zone file")
    fields = dict(part.split("=", 1) for part in head[2:])
    d = int(fields["d"])
    k = int(fields.get("k", "0"))
    shape = "freeform"
    cells = set()
    for line in lines[1:]:
        line = line.strip()
        if line.startswith("# shape="):
            shape = line[len("# shape="):].strip()
        elif line.startswith("cell="):
            x, y = line[len("cell="):].split(",")
            cells.add(CellId(int(x), int(y), k))
        elif line and not line.startswith("#"):
            raise ValueError(f"unexpected zone file line: {line!r}")
    grid = GridSpec(d)
    zone = AlertZone(frozenset(cells), shape)
    dk = d >> k
    for cell in cells:
        if not (0 <= cell.x < dk and 0 <= cell.y < dk):
            raise ValueError(f"cell {cell} out of bounds at level {k}")
    return grid, zone
