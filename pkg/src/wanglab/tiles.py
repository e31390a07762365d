"""Bicolor Wang tiles, tilesets, sparse tile patterns and vertex bit grids.

A tile is an int in 0..15 packing its four edge colors as bits in
(West, North, East, South) order, West being the most significant bit;
1 means black.  A tileset is a 16-bit mask over tile codes.  Cells live
on Z^2 with y increasing upward; the vertex (x, y) is the lower-left
corner of cell (x, y).
"""

from __future__ import annotations

import json
import random
from typing import Iterable, Iterator, Mapping

Cell = tuple[int, int]

WHITE = 0b0000
BLACK = 0b1111
HWIRE = 0b1010  # black west/east edges
VWIRE = 0b0101  # black north/south edges

ALL_TILES_MASK = 0xFFFF
EVEN_TILES = tuple(t for t in range(16) if bin(t).count("1") % 2 == 0)
EVEN_MASK = sum(1 << t for t in EVEN_TILES)
CORNER_TILES = (0b1100, 0b0110, 0b0011, 0b1001)
CORNER_MASK = sum(1 << t for t in CORNER_TILES)


def tile_edges(t: int) -> tuple[int, int, int, int]:
    """Edge colors of a tile in (west, north, east, south) order."""
    if not 0 <= t < 16:
        raise ValueError(f"tile code out of range: {t}")
    return (t >> 3) & 1, (t >> 2) & 1, (t >> 1) & 1, t & 1


def tile_from_edges(w: int, n: int, e: int, s: int) -> int:
    return (w << 3) | (n << 2) | (e << 1) | s


def tile_literal(t: int) -> str:
    return f"{t:04b}"


def tile_from_literal(lit: str) -> int:
    lit = lit.strip()
    if len(lit) != 4 or any(c not in "01" for c in lit):
        raise ValueError(f"bad tile literal {lit!r} (want 4 chars of 0/1, WNES order)")
    return int(lit, 2)


def is_even_tile(t: int) -> bool:
    return bin(t).count("1") % 2 == 0


def is_corner_tile(t: int) -> bool:
    return t in CORNER_TILES


def tileset_of(tiles: Iterable[int]) -> int:
    mask = 0
    for t in tiles:
        if not 0 <= t < 16:
            raise ValueError(f"tile code out of range: {t}")
        mask |= 1 << t
    return mask


def tiles_in(mask: int) -> list[int]:
    return [t for t in range(16) if mask >> t & 1]


def tileset_size(mask: int) -> int:
    return bin(mask & ALL_TILES_MASK).count("1")


def is_even_tileset(mask: int) -> bool:
    return mask & ~EVEN_MASK == 0


def corner_count(mask: int) -> int:
    return bin(mask & CORNER_MASK).count("1")


def tileset_literal(mask: int) -> str:
    return ",".join(tile_literal(t) for t in tiles_in(mask))


def tileset_from_literal(text: str) -> int:
    """Parse either a hex mask like 0x8001 or comma-separated tile literals."""
    text = text.strip()
    if text.lower().startswith("0x"):
        mask = int(text, 16)
        if not 0 < mask <= ALL_TILES_MASK:
            raise ValueError(f"tileset mask out of range: {text}")
        return mask
    return tileset_of(tile_from_literal(p) for p in text.split(","))


class TilePattern:
    """A finite, possibly sparse assignment of tiles to cells."""

    __slots__ = ("cells",)

    def __init__(self, cells: Mapping[Cell, int]):
        self.cells = dict(cells)

    def __len__(self) -> int:
        return len(self.cells)

    def __eq__(self, other) -> bool:
        return isinstance(other, TilePattern) and self.cells == other.cells

    def __repr__(self) -> str:
        return f"TilePattern({len(self.cells)} cells)"

    def domain(self) -> set[Cell]:
        return set(self.cells)

    def bounds(self) -> tuple[int, int, int, int]:
        """Bounding box (x0, y0, x1, y1), inclusive."""
        xs = [x for x, _ in self.cells]
        ys = [y for _, y in self.cells]
        return min(xs), min(ys), max(xs), max(ys)

    def is_rectangular(self) -> bool:
        if not self.cells:
            return False
        x0, y0, x1, y1 = self.bounds()
        return len(self.cells) == (x1 - x0 + 1) * (y1 - y0 + 1)

    def tiles_used(self) -> int:
        mask = 0
        for t in self.cells.values():
            mask |= 1 << t
        return mask

    def translate(self, dx: int, dy: int) -> "TilePattern":
        return TilePattern({(x + dx, y + dy): t for (x, y), t in self.cells.items()})

    def restrict(self, cells: Iterable[Cell]) -> "TilePattern":
        return TilePattern({c: self.cells[c] for c in cells if c in self.cells})

    def rows_text(self) -> str:
        """Human-readable dump, top row first; '....' for missing cells."""
        x0, y0, x1, y1 = self.bounds()
        lines = []
        for y in range(y1, y0 - 1, -1):
            lines.append(" ".join(
                tile_literal(self.cells[(x, y)]) if (x, y) in self.cells else "...."
                for x in range(x0, x1 + 1)))
        return "\n".join(lines)

    def to_json(self) -> str:
        cells = [[x, y, tile_literal(t)] for (x, y), t in sorted(self.cells.items())]
        return json.dumps({"kind": "tiles", "cells": cells})

    @staticmethod
    def from_json(text: str) -> "TilePattern":
        data = json.loads(text)
        if data.get("kind") != "tiles":
            raise ValueError("not a tile pattern file")
        return TilePattern({(int(x), int(y)): tile_from_literal(lit)
                            for x, y, lit in data["cells"]})

    @staticmethod
    def from_rows(rows: list[list[int]], x0: int = 0, y0: int = 0) -> "TilePattern":
        """Build a rectangle from rows listed top-first; y0 is the bottom row."""
        h = len(rows)
        cells = {}
        for j, row in enumerate(rows):
            y = y0 + h - 1 - j
            for i, t in enumerate(row):
                cells[(x0 + i, y)] = t
        return TilePattern(cells)


def pattern_is_locally_valid(p: TilePattern) -> bool:
    """True iff every pair of adjacent cells matches on the shared edge."""
    cells = p.cells
    for (x, y), t in cells.items():
        e = cells.get((x + 1, y))
        if e is not None and (t >> 1) & 1 != (e >> 3) & 1:
            return False
        n = cells.get((x, y + 1))
        if n is not None and (t >> 2) & 1 != n & 1:
            return False
    return True


class NotLiftable(Exception):
    """A tile pattern with no consistent vertex-bit preimage."""


class BitGrid:
    """Bits on a w x h rectangle of vertices with lower-left vertex (x0, y0).

    rows[j] holds the bits of vertex row y0+j; bit i of rows[j] is the
    vertex (x0+i, y0+j).
    """

    __slots__ = ("x0", "y0", "width", "height", "rows")

    def __init__(self, x0: int, y0: int, width: int, height: int, rows: list[int]):
        if len(rows) != height:
            raise ValueError("row count does not match height")
        self.x0, self.y0 = x0, y0
        self.width, self.height = width, height
        self.rows = list(rows)

    def __eq__(self, other) -> bool:
        return (isinstance(other, BitGrid)
                and (self.x0, self.y0, self.width, self.height) ==
                    (other.x0, other.y0, other.width, other.height)
                and self.rows == other.rows)

    def __repr__(self) -> str:
        return f"BitGrid({self.width}x{self.height} at ({self.x0},{self.y0}))"

    def get(self, x: int, y: int) -> int:
        i, j = x - self.x0, y - self.y0
        if not (0 <= i < self.width and 0 <= j < self.height):
            raise IndexError((x, y))
        return self.rows[j] >> i & 1

    def set(self, x: int, y: int, bit: int) -> None:
        i, j = x - self.x0, y - self.y0
        if bit:
            self.rows[j] |= 1 << i
        else:
            self.rows[j] &= ~(1 << i)

    def copy(self) -> "BitGrid":
        return BitGrid(self.x0, self.y0, self.width, self.height, self.rows)

    def complement(self) -> "BitGrid":
        full = (1 << self.width) - 1
        return BitGrid(self.x0, self.y0, self.width, self.height,
                       [r ^ full for r in self.rows])

    def row_strings(self) -> list[str]:
        """Rows bottom-first, each left-to-right."""
        return [format(r, f"0{self.width}b")[::-1] for r in self.rows]

    def to_json(self) -> str:
        return json.dumps({"kind": "bits", "x0": self.x0, "y0": self.y0,
                           "rows": self.row_strings()})

    @staticmethod
    def from_json(text: str) -> "BitGrid":
        data = json.loads(text)
        if data.get("kind") != "bits":
            raise ValueError("not a bit grid file")
        return BitGrid.from_rows(data["rows"], int(data.get("x0", 0)),
                                 int(data.get("y0", 0)))

    @staticmethod
    def from_rows(rows: list[str], x0: int = 0, y0: int = 0) -> "BitGrid":
        """rows[0] is the bottom vertex row, characters left-to-right."""
        if not rows:
            raise ValueError("empty grid")
        width = len(rows[0])
        vals = []
        for r in rows:
            if len(r) != width or any(c not in "01" for c in r):
                raise ValueError(f"bad bit row {r!r}")
            vals.append(int(r[::-1], 2))
        return BitGrid(x0, y0, width, len(rows), vals)

    @staticmethod
    def random(rng: random.Random, width: int, height: int,
               x0: int = 0, y0: int = 0) -> "BitGrid":
        return BitGrid(x0, y0, width, height,
                       [rng.getrandbits(width) for _ in range(height)])


def parity_tiles(g: BitGrid) -> TilePattern:
    """Color every edge with the XOR of its endpoint bits.

    The (n+1) x (m+1) vertex grid yields an n x m pattern of even tiles,
    locally valid by construction.
    """
    if g.width < 2 or g.height < 2:
        raise ValueError("need at least a 2x2 vertex grid")
    cells = {}
    for j in range(g.height - 1):
        lo, hi = g.rows[j], g.rows[j + 1]
        for i in range(g.width - 1):
            sw = lo >> i & 1
            se = lo >> (i + 1) & 1
            nw = hi >> i & 1
            ne = hi >> (i + 1) & 1
            t = ((sw ^ nw) << 3) | ((nw ^ ne) << 2) | ((se ^ ne) << 1) | (sw ^ se)
            cells[(g.x0 + i, g.y0 + j)] = t
    return TilePattern(cells)


def lift_to_bits(p: TilePattern) -> BitGrid:
    """Invert parity_tiles on a rectangular even pattern, top-left vertex 0.

    Unique up to global complement; raises NotLiftable when the pattern is
    not rectangular, uses an odd tile, or has mismatched edges.
    """
    if not p.cells or not p.is_rectangular():
        raise NotLiftable("pattern is not a non-empty rectangle")
    if any(not is_even_tile(t) for t in p.cells.values()):
        raise NotLiftable("pattern uses an odd tile")
    x0, y0, x1, y1 = p.bounds()
    w, h = x1 - x0 + 2, y1 - y0 + 2
    g = BitGrid(x0, y0, w, h, [0] * h)
    # top vertex row from the N edges of the top cell row, seeded with 0
    bit = 0
    g.set(x0, y1 + 1, 0)
    for x in range(x0, x1 + 1):
        bit ^= (p.cells[(x, y1)] >> 2) & 1
        g.set(x + 1, y1 + 1, bit)
    # walk down every column through W edges (and E for the last column)
    for x in range(x0, x1 + 1):
        bit = g.get(x, y1 + 1)
        for y in range(y1, y0 - 1, -1):
            bit ^= (p.cells[(x, y)] >> 3) & 1
            g.set(x, y, bit)
    bit = g.get(x1 + 1, y1 + 1)
    for y in range(y1, y0 - 1, -1):
        bit ^= (p.cells[(x1, y)] >> 1) & 1
        g.set(x1 + 1, y, bit)
    if parity_tiles(g) != p:
        raise NotLiftable("pattern edges are inconsistent")
    return g
