"""The order-32 symmetry group acting on bicolor tiles and tilesets.

Every element is a square symmetry (D4 permuting the four edges) followed
by a chromatic complement (K4: flip the colors of the horizontal and/or
vertical edges).  Elements are enumerated by brute-force closure from four
generators acting on the 16 tiles; the closure must stabilize at exactly
32 maps, which is asserted at build time.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .tiles import ALL_TILES_MASK, EVEN_MASK, tiles_in

# edge permutations of D4 as maps on (W,N,E,S) bit codes
def _rot90(t: int) -> int:
    # counterclockwise: new (W,N,E,S) = old (N,E,S,W)
    return ((t << 1) & 0xF) | (t >> 3)


def _flip_h(t: int) -> int:
    # reflect across the horizontal axis: swap N and S
    return (t & 0b1010) | ((t & 0b0100) >> 2) | ((t & 0b0001) << 2)


def _ch(t: int) -> int:
    # complement colors of the horizontal (N, S) edges
    return t ^ 0b0101


def _cv(t: int) -> int:
    # complement colors of the vertical (W, E) edges
    return t ^ 0b1010


_DIHEDRAL_NAMES = {
    "id": lambda t: t,
    "rot90": _rot90,
    "rot180": lambda t: _rot90(_rot90(t)),
    "rot270": lambda t: _rot90(_rot90(_rot90(t))),
    "flip_h": _flip_h,
    "flip_v": lambda t: _flip_h(_rot90(_rot90(t))),
    "flip_diag": lambda t: _flip_h(_rot90(t)),
    "flip_anti": lambda t: _flip_h(_rot90(_rot90(_rot90(t)))),
}


@dataclass(frozen=True)
class SymmetryElement:
    """One group element: dihedral edge permutation then chromatic flips."""

    dihedral: str
    ch: int
    cv: int
    table: tuple[int, ...]

    def __repr__(self) -> str:
        chrom = "".join(s for s, on in (("ch", self.ch), ("cv", self.cv)) if on)
        return f"<{self.dihedral}{'+' + chrom if chrom else ''}>"


def _compose(f: tuple[int, ...], g: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(f[g[t]] for t in range(16))


@lru_cache(maxsize=1)
def group() -> tuple[SymmetryElement, ...]:
    """All 32 elements, built by closure from the generators."""
    gens = [tuple(_rot90(t) for t in range(16)),
            tuple(_flip_h(t) for t in range(16)),
            tuple(_ch(t) for t in range(16)),
            tuple(_cv(t) for t in range(16))]
    seen = {tuple(range(16))}
    frontier = list(seen)
    while frontier:
        nxt = []
        for f in frontier:
            for g in gens:
                h = _compose(g, f)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    assert len(seen) == 32, f"group closure has {len(seen)} elements, expected 32"

    dihedrals = {tuple(fn(t) for t in range(16)): name
                 for name, fn in _DIHEDRAL_NAMES.items()}
    elements = []
    for table in sorted(seen):
        mask = table[0]  # image of the white tile reveals the chromatic part
        perm = tuple(table[t] ^ mask for t in range(16))
        name = dihedrals[perm]
        elements.append(SymmetryElement(name, (mask >> 2) & 1, (mask >> 3) & 1,
                                        table))
    return tuple(elements)


def act_on_tile(g: SymmetryElement, t: int) -> int:
    return g.table[t]


def act_on_tileset(g: SymmetryElement, mask: int) -> int:
    out = 0
    for t in tiles_in(mask):
        out |= 1 << g.table[t]
    return out


def orbit(mask: int) -> frozenset[int]:
    return frozenset(act_on_tileset(g, mask) for g in group())


@lru_cache(maxsize=1)
def _mask_tables() -> list[tuple[list[int], list[int]]]:
    # per element, the tileset image of the low and high mask bytes
    tables = []
    for g in group():
        lo = [0] * 256
        hi = [0] * 256
        for b in range(256):
            m = 0
            for t in range(8):
                if b >> t & 1:
                    m |= 1 << g.table[t]
            lo[b] = m
            m = 0
            for t in range(8):
                if b >> t & 1:
                    m |= 1 << g.table[t + 8]
            hi[b] = m
        tables.append((lo, hi))
    return tables


def canonical(mask: int) -> int:
    """Minimum tileset mask over the orbit; equal iff same orbit."""
    best = mask
    for lo, hi in _mask_tables():
        img = lo[mask & 0xFF] | hi[mask >> 8]
        if img < best:
            best = img
    return best


def orbit_count_and_sizes(universe: str) -> tuple[int, dict[int, int]]:
    """Orbit count and {canonical: orbit size} per universe.

    "even" covers the 255 non-empty even tilesets.  "all" covers every one
    of the 2**16 bicolor tilesets: the empty tileset forms a singleton class
    of its own, which is how the classic total of 2890 is reached (the
    65535 non-empty tilesets fall into 2889 classes).
    """
    if universe == "even":
        even = tiles_in(EVEN_MASK)
        masks = []
        for bits in range(1, 1 << len(even)):
            m = 0
            for i, t in enumerate(even):
                if bits >> i & 1:
                    m |= 1 << t
            masks.append(m)
    elif universe == "all":
        masks = range(ALL_TILES_MASK + 1)
    else:
        raise ValueError(f"unknown universe {universe!r}")
    sizes: dict[int, int] = {}
    tables = _mask_tables()
    for m in masks:
        lo_b, hi_b = m & 0xFF, m >> 8
        best = m
        for lo, hi in tables:
            img = lo[lo_b] | hi[hi_b]
            if img < best:
                best = img
        sizes[best] = sizes.get(best, 0) + 1
    return len(sizes), sizes


def count_orbits(universe: str) -> int:
    return orbit_count_and_sizes(universe)[0]
