"""Finite-window constraint solving for Wang tilesets.

One backtracking engine with arc-consistency on shared edge colors backs
everything here: window completion, forced cells, periodic (torus) tilings,
emptiness and unused-tile decisions, independence probes, grafts, and the
staircase ramification witnesses.

Search is deterministic: cells are scanned in reading order (top row first,
left to right) and tiles are tried in increasing code order unless an
explicit value order is supplied.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .tiles import (
    BLACK,
    Cell,
    HWIRE,
    TilePattern,
    VWIRE,
    WHITE,
    tile_literal,
    tiles_in,
)

# tiles grouped by the color of one edge: _W_IS[c] = tiles whose west edge is c
_W_IS = (0x00FF, 0xFF00)
_N_IS = (0x0F0F, 0xF0F0)
_E_IS = (0x3333, 0xCCCC)
_S_IS = (0x5555, 0xAAAA)
# tiles that tile their own row / column (east == west, north == south)
_SELF_H = sum(1 << t for t in range(16) if (t >> 1) & 1 == (t >> 3) & 1)
_SELF_V = sum(1 << t for t in range(16) if (t >> 2) & 1 == t & 1)

_DEFAULT_ORDER = tuple(range(16))


class Unsatisfiable(Exception):
    """No locally valid filling exists; carries the failed window."""

    def __init__(self, window):
        super().__init__("window has no locally valid filling")
        self.window = window


class Undecided(Exception):
    """Neither a witness nor a refutation was found within the bounds."""


def _east_allowed(d: int) -> int:
    m = 0
    if d & _E_IS[0]:
        m |= _W_IS[0]
    if d & _E_IS[1]:
        m |= _W_IS[1]
    return m


def _west_allowed(d: int) -> int:
    m = 0
    if d & _W_IS[0]:
        m |= _E_IS[0]
    if d & _W_IS[1]:
        m |= _E_IS[1]
    return m


def _north_allowed(d: int) -> int:
    m = 0
    if d & _N_IS[0]:
        m |= _S_IS[0]
    if d & _N_IS[1]:
        m |= _S_IS[1]
    return m


def _south_allowed(d: int) -> int:
    m = 0
    if d & _S_IS[0]:
        m |= _N_IS[0]
    if d & _S_IS[1]:
        m |= _N_IS[1]
    return m


class _Net:
    """Adjacency structure over an ordered set of cells."""

    __slots__ = ("cells", "east", "west", "north", "south")

    def __init__(self, cells: Iterable[Cell], east: dict, north: dict):
        self.cells = sorted(cells, key=lambda c: (-c[1], c[0]))
        self.east = east
        self.north = north
        self.west = {b: a for a, b in east.items()}
        self.south = {b: a for a, b in north.items()}


def _grid_net(cells: Iterable[Cell]) -> _Net:
    cset = set(cells)
    east = {}
    north = {}
    for (x, y) in cset:
        if (x + 1, y) in cset:
            east[(x, y)] = (x + 1, y)
        if (x, y + 1) in cset:
            north[(x, y)] = (x, y + 1)
    return _Net(cset, east, north)


def _block_net(a: int, b: int, h_mode: str, v_mode: str) -> tuple[_Net, dict]:
    """Net for an a x b block; each axis either wraps or absorbs (repeats).

    Returns the net plus unary masks for absorbing edges.
    """
    cells = [(i, j) for i in range(a) for j in range(b)]
    east = {}
    north = {}
    unary: dict[Cell, int] = {}
    for i in range(a):
        for j in range(b):
            if i + 1 < a:
                east[(i, j)] = (i + 1, j)
            elif h_mode == "wrap" and a > 1:
                east[(i, j)] = (0, j)
            if j + 1 < b:
                north[(i, j)] = (i, j + 1)
            elif v_mode == "wrap" and b > 1:
                north[(i, j)] = (i, 0)
    if h_mode == "wrap" and a == 1:
        for j in range(b):
            unary[(0, j)] = unary.get((0, j), 0xFFFF) & _SELF_H
    if v_mode == "wrap" and b == 1:
        for i in range(a):
            unary[(i, 0)] = unary.get((i, 0), 0xFFFF) & _SELF_V
    if h_mode == "absorb":
        for j in range(b):
            for i in (0, a - 1):
                unary[(i, j)] = unary.get((i, j), 0xFFFF) & _SELF_H
    if v_mode == "absorb":
        for i in range(a):
            for j in (0, b - 1):
                unary[(i, j)] = unary.get((i, j), 0xFFFF) & _SELF_V
    return _Net(cells, east, north), unary


def _propagate(net: _Net, dom: dict, queue: deque) -> bool:
    """AC over edge colors; False when some domain empties."""
    while queue:
        c = queue.popleft()
        d = dom[c]
        if d == 0:
            return False
        for other, allowed in (
            (net.east.get(c), _east_allowed(d)),
            (net.west.get(c), _west_allowed(d)),
            (net.north.get(c), _north_allowed(d)),
            (net.south.get(c), _south_allowed(d)),
        ):
            if other is None:
                continue
            nd = dom[other] & allowed
            if nd != dom[other]:
                if nd == 0:
                    return False
                dom[other] = nd
                queue.append(other)
    return True


def _solutions(net: _Net, dom: dict, value_order: Sequence[int] = _DEFAULT_ORDER,
               limit: int = 1) -> list[dict]:
    """Up to `limit` total assignments, exhaustively backtracked."""
    sols: list[dict] = []
    if any(d == 0 for d in dom.values()):
        return sols
    if not _propagate(net, dom, deque(net.cells)):
        return sols
    stack: list[tuple[dict, Cell, Iterator[int]]] = []
    cur = dom
    while True:
        branch = None
        for c in net.cells:
            d = cur[c]
            if d & (d - 1):
                branch = c
                break
        if branch is None:
            sols.append({c: cur[c].bit_length() - 1 for c in net.cells})
            if len(sols) >= limit:
                return sols
            cur = None
        else:
            vals = iter([v for v in value_order if cur[branch] >> v & 1])
            stack.append((cur, branch, vals))
            cur = None
        while cur is None:
            if not stack:
                return sols
            base, cell, vals = stack[-1]
            v = next(vals, None)
            if v is None:
                stack.pop()
                continue
            nd = dict(base)
            nd[cell] = 1 << v
            if _propagate(net, nd, deque([cell])):
                cur = nd


def _initial_domains(tileset: int, cells: Iterable[Cell], frozen: Mapping) -> dict:
    dom = {c: tileset for c in cells}
    for c, t in frozen.items():
        if c in dom:
            dom[c] &= 1 << t
    return dom


@dataclass(frozen=True)
class Window:
    """A finite region to fill: tileset, rectangle or explicit cells, pins."""

    tileset: int
    rect: tuple[int, int, int, int] | None = None
    frozen: Mapping[Cell, int] = field(default_factory=dict)
    cells: frozenset[Cell] | None = None

    def cell_set(self) -> set[Cell]:
        if self.cells is not None:
            return set(self.cells)
        if self.rect is None:
            raise ValueError("window needs a rect or an explicit cell set")
        x0, y0, x1, y1 = self.rect
        return {(x, y) for x in range(x0, x1 + 1) for y in range(y0, y1 + 1)}


def rect_window(tileset: int, x0: int, y0: int, x1: int, y1: int,
                frozen: Mapping[Cell, int] | None = None) -> Window:
    return Window(tileset, (x0, y0, x1, y1), dict(frozen or {}))


def try_complete(window: Window,
                 value_order: Sequence[int] = _DEFAULT_ORDER) -> TilePattern | None:
    cells = window.cell_set()
    for c in window.frozen:
        if c not in cells:
            raise ValueError(f"frozen cell {c} outside the window")
    net = _grid_net(cells)
    dom = _initial_domains(window.tileset, cells, window.frozen)
    sols = _solutions(net, dom, value_order)
    return TilePattern(sols[0]) if sols else None


def complete(window: Window,
             value_order: Sequence[int] = _DEFAULT_ORDER) -> TilePattern:
    got = try_complete(window, value_order)
    if got is None:
        raise Unsatisfiable(window)
    return got


def iter_completions(window: Window, limit: int = 1 << 30) -> list[TilePattern]:
    cells = window.cell_set()
    net = _grid_net(cells)
    dom = _initial_domains(window.tileset, cells, window.frozen)
    return [TilePattern(s) for s in _solutions(net, dom, limit=limit)]


def forced_cells(window: Window) -> dict[Cell, int]:
    """Cells whose tile is identical in every completion of the window.

    Decided by per-cell refutation: a cell is forced to t when every other
    candidate makes the window unsatisfiable.
    """
    base = try_complete(window)
    if base is None:
        raise Unsatisfiable(window)
    cells = window.cell_set()
    net = _grid_net(cells)
    dom0 = _initial_domains(window.tileset, cells, window.frozen)
    ac = dict(dom0)
    if not _propagate(net, ac, deque(net.cells)):
        raise Unsatisfiable(window)
    forced: dict[Cell, int] = {}
    for c in net.cells:
        if c in window.frozen:
            continue
        t0 = base.cells[c]
        alternatives = [t for t in tiles_in(ac[c]) if t != t0]
        open_cell = False
        for t in alternatives:
            dom = dict(dom0)
            dom[c] = 1 << t
            if _solutions(net, dom):
                open_cell = True
                break
        if not open_cell:
            forced[c] = t0
    return forced


# ---------------------------------------------------------------------------
# periodic tilings and block witnesses


@dataclass(frozen=True)
class PeriodicWitness:
    """An a x b block tiling the torus; periods (a, 0) and (0, b)."""

    a: int
    b: int
    block: tuple[tuple[int, ...], ...]  # block[j][i] = tile at (i, j)

    @property
    def periods(self) -> tuple[Cell, Cell]:
        return (self.a, 0), (0, self.b)

    def tile_at(self, x: int, y: int) -> int:
        return self.block[y % self.b][x % self.a]

    def verify(self, tileset: int) -> bool:
        for j in range(self.b):
            for i in range(self.a):
                t = self.block[j][i]
                if not tileset >> t & 1:
                    return False
                e = self.block[j][(i + 1) % self.a]
                if (t >> 1) & 1 != (e >> 3) & 1:
                    return False
                n = self.block[(j + 1) % self.b][i]
                if (t >> 2) & 1 != n & 1:
                    return False
        return True

    def pattern(self, width: int, height: int) -> TilePattern:
        return TilePattern({(x, y): self.tile_at(x, y)
                            for x in range(width) for y in range(height)})


def _solve_block(tileset: int, a: int, b: int, h_mode: str, v_mode: str,
                 frozen: Mapping[Cell, int] | None = None) -> dict | None:
    net, unary = _block_net(a, b, h_mode, v_mode)
    dom = _initial_domains(tileset, net.cells, frozen or {})
    for c, m in unary.items():
        dom[c] &= m
    sols = _solutions(net, dom)
    return sols[0] if sols else None


def _block_rows(sol: dict, a: int, b: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(sol[(i, j)] for i in range(a)) for j in range(b))


def find_periodic(tileset: int, max_a: int, max_b: int,
                  frozen: Mapping[Cell, int] | None = None) -> PeriodicWitness | None:
    """Smallest torus block within the bounds, scanning (a, b) in lex order."""
    for a in range(1, max_a + 1):
        for b in range(1, max_b + 1):
            sol = _solve_block(tileset, a, b, "wrap", "wrap", frozen)
            if sol is not None:
                return PeriodicWitness(a, b, _block_rows(sol, a, b))
    return None


@dataclass(frozen=True)
class Emptiness:
    empty: bool
    bound: int | None = None            # Q_k that refused to fill
    witness: PeriodicWitness | None = None


def is_empty(tileset: int, k_max: int = 6, period_bound: int = 4) -> Emptiness:
    """Resolve emptiness: a periodic witness or a refuted Q_k window."""
    w = find_periodic(tileset, period_bound, period_bound)
    if w is not None:
        return Emptiness(False, witness=w)
    for k in range(1, k_max + 1):
        if try_complete(rect_window(tileset, -k, -k, k, k)) is None:
            return Emptiness(True, bound=k)
    raise Undecided(f"tileset 0x{tileset:04x}: no periodic witness within "
                    f"{period_bound}, no refutation within Q_{k_max}")


# sound evidence that a tile occurs in some valid full-plane configuration;
# beyond tori, a block can repeat a boundary row/column verbatim ("absorb")
# or a 1D layer sequence can be laid along a diagonal.
@dataclass(frozen=True)
class UsageWitness:
    kind: str        # torus | v-strip | h-strip | cornered | diag | antidiag
    a: int
    b: int
    block: tuple[tuple[int, ...], ...] | tuple[int, ...]

    def verify(self, tileset: int, tile: int) -> bool:
        if self.kind in ("diag", "antidiag"):
            layers = self.block
            if tile not in layers:
                return False
            if any(not tileset >> t & 1 for t in layers):
                return False
            for t in (layers[0], layers[-1]):
                if (t >> 1) & 1 != (t >> 3) & 1 or (t >> 2) & 1 != t & 1:
                    return False
            for lo, hi in zip(layers, layers[1:]):
                if (lo >> 1) & 1 != (hi >> 3) & 1:
                    return False
                if self.kind == "diag":
                    if (lo >> 2) & 1 != hi & 1:      # hi sits above lo
                        return False
                else:
                    if (hi >> 2) & 1 != lo & 1:      # lo sits above hi
                        return False
            return True
        h_mode = "wrap" if self.kind in ("torus", "h-strip") else "absorb"
        v_mode = "wrap" if self.kind in ("torus", "v-strip") else "absorb"
        found = False
        for j in range(self.b):
            for i in range(self.a):
                t = self.block[j][i]
                found |= t == tile
                if not tileset >> t & 1:
                    return False
                if i + 1 < self.a or h_mode == "wrap":
                    e = self.block[j][(i + 1) % self.a]
                    if (t >> 1) & 1 != (e >> 3) & 1:
                        return False
                elif (t >> 1) & 1 != (t >> 3) & 1:
                    return False
                if i == 0 and h_mode == "absorb" and (t >> 1) & 1 != (t >> 3) & 1:
                    return False
                if j + 1 < self.b or v_mode == "wrap":
                    n = self.block[(j + 1) % self.b][i]
                    if (t >> 2) & 1 != n & 1:
                        return False
                elif (t >> 2) & 1 != t & 1:
                    return False
                if j == 0 and v_mode == "absorb" and (t >> 2) & 1 != t & 1:
                    return False
        return found


def _solve_layers(tileset: int, length: int, antidiag: bool,
                  frozen_mid: int) -> tuple[int, ...] | None:
    """A layer word g realizing x(i,j) = g(i+j) (or g(i-j)), constant tails."""
    tiles = tiles_in(tileset)
    self_ok = [t for t in tiles
               if (t >> 1) & 1 == (t >> 3) & 1 and (t >> 2) & 1 == t & 1]
    if not self_ok:
        return None
    mid = length // 2

    def fits(prev: int, cur: int) -> bool:
        if (prev >> 1) & 1 != (cur >> 3) & 1:
            return False
        if antidiag:
            return (cur >> 2) & 1 == prev & 1
        return (prev >> 2) & 1 == cur & 1

    out: list[int] = []

    def rec(i: int) -> bool:
        if i == length:
            return out[-1] in self_ok
        for t in ([frozen_mid] if i == mid else tiles):
            if i == 0 and t not in self_ok:
                continue
            if out and not fits(out[-1], t):
                continue
            out.append(t)
            if rec(i + 1):
                return True
            out.pop()
        return False

    return tuple(out) if rec(0) else None


def usage_witness(tileset: int, tile: int,
                  period_bound: int = 4) -> UsageWitness | None:
    """First verifiable occurrence certificate for `tile`, or None."""
    for a in range(1, period_bound + 1):
        for b in range(1, period_bound + 1):
            sol = _solve_block(tileset, a, b, "wrap", "wrap", {(0, 0): tile})
            if sol is not None:
                return UsageWitness("torus", a, b, _block_rows(sol, a, b))
    for wrap in range(1, period_bound + 1):
        for clip in range(2, 6):
            sol = _solve_block(tileset, clip, wrap, "absorb", "wrap",
                               {(clip // 2, 0): tile})
            if sol is not None:
                return UsageWitness("v-strip", clip, wrap,
                                    _block_rows(sol, clip, wrap))
            sol = _solve_block(tileset, wrap, clip, "wrap", "absorb",
                               {(0, clip // 2): tile})
            if sol is not None:
                return UsageWitness("h-strip", wrap, clip,
                                    _block_rows(sol, wrap, clip))
    for a in range(3, 7):
        for b in range(3, 7):
            sol = _solve_block(tileset, a, b, "absorb", "absorb",
                               {(a // 2, b // 2): tile})
            if sol is not None:
                return UsageWitness("cornered", a, b, _block_rows(sol, a, b))
    for length in (3, 5, 7, 9):
        for kind, anti in (("diag", False), ("antidiag", True)):
            layers = _solve_layers(tileset, length, anti, tile)
            if layers is not None:
                return UsageWitness(kind, length, 1, layers)
    return None


def unused_tiles(tileset: int, k_max: int = 6,
                 period_bound: int = 4) -> set[int]:
    """Tiles of the set that occur in no valid configuration."""
    unused: set[int] = set()
    for t in tiles_in(tileset):
        if usage_witness(tileset, t, period_bound) is not None:
            continue
        refuted = False
        for k in range(1, k_max + 1):
            w = rect_window(tileset, -k, -k, k, k, {(0, 0): t})
            if try_complete(w) is None:
                refuted = True
                break
        if not refuted:
            raise Undecided(
                f"tile {tile_literal(t)} in 0x{tileset:04x}: no usage witness "
                f"and no Q_{k_max} refutation")
        unused.add(t)
    return unused


# ---------------------------------------------------------------------------
# independence of two regions


def neighborhood(cells: Iterable[Cell], r: int) -> set[Cell]:
    out = set()
    for (x, y) in cells:
        for dx in range(-r, r + 1):
            for dy in range(-r, r + 1):
                out.add((x + dx, y + dy))
    return out


def enumerate_region_patterns(tileset: int, region: Sequence[Cell],
                              margin: int) -> list[dict[Cell, int]]:
    """All region patterns extendable to the margin neighborhood window."""
    window_cells = neighborhood(region, margin)
    net = _grid_net(window_cells)
    dom0 = _initial_domains(tileset, window_cells, {})
    if not _propagate(net, dom0, deque(net.cells)):
        return []
    region = sorted(region, key=lambda c: (-c[1], c[0]))
    out: list[dict[Cell, int]] = []

    def rec(i: int, dom: dict) -> None:
        if i == len(region):
            if _solutions(net, dict(dom)):
                out.append({c: dom[c].bit_length() - 1 for c in region})
            return
        c = region[i]
        for t in tiles_in(dom[c]):
            nd = dict(dom)
            nd[c] = 1 << t
            if _propagate(net, nd, deque([c])):
                rec(i + 1, nd)

    rec(0, dom0)
    return out


@dataclass
class IndependenceReport:
    verdict: str                     # independent | not-independent | unknown
    f_patterns: int
    g_patterns: int
    pairs_checked: int = 0
    pairs_extended: int = 0
    counterexample: tuple[dict, dict] | None = None
    witness: PeriodicWitness | None = None
    note: str = ""

    @property
    def all_pairs_extended(self) -> bool:
        total = self.f_patterns * self.g_patterns
        return total > 0 and self.pairs_extended == total


def _self_tiling_tiles(tileset: int) -> list[int]:
    return [t for t in tiles_in(tileset)
            if (t >> 1) & 1 == (t >> 3) & 1 and (t >> 2) & 1 == t & 1]


def _ring_cells(core: set[Cell]) -> set[Cell]:
    return neighborhood(core, 1) - core


def _ring_extension(tileset: int, pat: dict, region: Sequence[Cell],
                    radius: int, tau: int) -> dict | None:
    core = neighborhood(region, radius)
    ring = _ring_cells(core)
    cells = core | ring
    frozen = dict(pat)
    frozen.update({c: tau for c in ring})
    net = _grid_net(cells)
    dom = _initial_domains(tileset, cells, frozen)
    sols = _solutions(net, dom)
    return sols[0] if sols else None


def _strip_cells(region_bounds, direction: str, margin: int,
                 span: tuple[int, int, int, int]) -> tuple[set[Cell], set[Cell]]:
    """Cells of a boundary-padded strip through the region, plus its flanks."""
    rx0, ry0, rx1, ry1 = region_bounds
    sx0, sy0, sx1, sy1 = span
    cells: set[Cell] = set()
    flanks: set[Cell] = set()
    for x in range(sx0, sx1 + 1):
        for y in range(sy0, sy1 + 1):
            if direction == "h":
                lo, hi = ry0 - margin, ry1 + margin
                d = y
            elif direction == "v":
                lo, hi = rx0 - margin, rx1 + margin
                d = x
            elif direction == "diag":
                lo, hi = (rx0 - ry1) - margin, (rx1 - ry0) + margin
                d = x - y
            else:  # antidiag
                lo, hi = (rx0 + ry0) - margin, (rx1 + ry1) + margin
                d = x + y
            if lo <= d <= hi:
                cells.add((x, y))
            elif d in (lo - 1, hi + 1):
                flanks.add((x, y))
    return cells, flanks


def check_independence(tileset: int, region_f: Sequence[Cell],
                       region_g: Sequence[Cell], margin: int = 2, *,
                       ring_radius: int | None = None,
                       max_pairs: int = 40000) -> IndependenceReport:
    """Probe whether two disjoint regions are independent.

    Sound verdicts: "not-independent" exhibits a margin-valid pair whose
    joint window cannot be filled; "independent" requires every pattern to
    close inside a uniform ring, which assembles into a doubly periodic
    configuration for every pair.  Everything else is "unknown", with the
    count of pairs that jointly extended at finite scale.
    """
    region_f = [tuple(c) for c in region_f]
    region_g = [tuple(c) for c in region_g]
    if set(region_f) & set(region_g):
        raise ValueError("regions must be disjoint")
    f_pats = enumerate_region_patterns(tileset, region_f, margin)
    g_pats = enumerate_region_patterns(tileset, region_g, margin)
    report = IndependenceReport("unknown", len(f_pats), len(g_pats))
    if not f_pats or not g_pats:
        report.verdict = "independent"
        report.note = "one region admits no margin-valid pattern"
        return report

    joint = neighborhood(set(region_f) | set(region_g), margin)
    xs = [x for x, _ in joint]
    ys = [y for _, y in joint]
    span = (min(xs), min(ys), max(xs), max(ys))
    joint_rect = {(x, y) for x in range(span[0], span[2] + 1)
                  for y in range(span[1], span[3] + 1)}
    net = _grid_net(joint_rect)

    # fast refutation scan: freeze each F-pattern, see which G-values survive AC
    for fp in f_pats:
        dom = _initial_domains(tileset, joint_rect, fp)
        ok = _propagate(net, dom, deque(fp.keys()))
        for gp in g_pats:
            if not ok or any(not dom[c] >> t & 1 for c, t in gp.items()):
                report.verdict = "not-independent"
                report.counterexample = (fp, gp)
                return report

    # independence via uniform-ring closure of every pattern
    radius = ring_radius if ring_radius is not None else margin + 2
    fw = neighborhood(region_f, radius + 1)
    gw = neighborhood(region_g, radius + 1)
    if not fw & gw:
        for tau in _self_tiling_tiles(tileset):
            f_ext = [_ring_extension(tileset, p, region_f, radius, tau)
                     for p in f_pats]
            if any(e is None for e in f_ext):
                continue
            g_ext = [_ring_extension(tileset, p, region_g, radius, tau)
                     for p in g_pats]
            if any(e is None for e in g_ext):
                continue
            # assemble one pair on a torus as the shipped witness
            all_cells = set(f_ext[0]) | set(g_ext[0])
            axs = [x for x, _ in all_cells]
            ays = [y for _, y in all_cells]
            a = max(axs) - min(axs) + 2
            b = max(ays) - min(ays) + 2
            block = [[tau] * a for _ in range(b)]
            for ext in (f_ext[0], g_ext[0]):
                for (x, y), t in ext.items():
                    block[(y - min(ays)) % b][(x - min(axs)) % a] = t
            witness = PeriodicWitness(a, b, tuple(tuple(r) for r in block))
            if witness.verify(tileset):
                report.verdict = "independent"
                report.witness = witness
                report.pairs_extended = len(f_pats) * len(g_pats)
                report.pairs_checked = report.pairs_extended
                report.note = f"ring closure with {tile_literal(tau)}"
                return report

    # joint extension evidence per pair, via disjoint boundary-padded strips
    fb = (min(x for x, _ in region_f), min(y for _, y in region_f),
          max(x for x, _ in region_f), max(y for _, y in region_f))
    gb = (min(x for x, _ in region_g), min(y for _, y in region_g),
          max(x for x, _ in region_g), max(y for _, y in region_g))
    for tau in _self_tiling_tiles(tileset):
        for direction in ("h", "v", "diag", "antidiag"):
            fc, ff = _strip_cells(fb, direction, margin, span)
            gc, gf = _strip_cells(gb, direction, margin, span)
            if (fc | ff) & (gc | gf):
                continue
            f_ext = []
            for p in f_pats:
                frozen = dict(p)
                frozen.update({c: tau for c in ff})
                dom = _initial_domains(tileset, fc | ff, frozen)
                sols = _solutions(_grid_net(fc | ff), dom)
                if not sols:
                    break
                f_ext.append(sols[0])
            else:
                g_ext = []
                for p in g_pats:
                    frozen = dict(p)
                    frozen.update({c: tau for c in gf})
                    dom = _initial_domains(tileset, gc | gf, frozen)
                    sols = _solutions(_grid_net(gc | gf), dom)
                    if not sols:
                        break
                    g_ext.append(sols[0])
                else:
                    from .tiles import pattern_is_locally_valid
                    good = 0
                    for fe in f_ext:
                        for ge in g_ext:
                            cells = {c: tau for c in joint_rect}
                            cells.update(fe)
                            cells.update(ge)
                            if pattern_is_locally_valid(TilePattern(cells)):
                                good += 1
                    report.pairs_checked = len(f_pats) * len(g_pats)
                    if good == report.pairs_checked:
                        report.pairs_extended = good
                        report.note = (f"{direction}-strip assembly over "
                                       f"{tile_literal(tau)}")
                        return report

    # last resort: per-pair joint window completion
    total = len(f_pats) * len(g_pats)
    if total > max_pairs:
        report.note = f"budget exceeded ({total} pairs)"
        return report
    for fp in f_pats:
        for gp in g_pats:
            frozen = dict(fp)
            frozen.update(gp)
            dom = _initial_domains(tileset, joint_rect, frozen)
            report.pairs_checked += 1
            if _solutions(net, dom):
                report.pairs_extended += 1
            else:
                report.verdict = "not-independent"
                report.counterexample = (fp, gp)
                return report
    report.note = "all pairs extend on the joint window"
    return report


# ---------------------------------------------------------------------------
# grafts and ramification witnesses


@dataclass(frozen=True)
class GraftResult:
    ok: bool
    graft: TilePattern | None = None


def can_graft(x: TilePattern, tileset: int, fpattern: Mapping[Cell, int],
              p: Cell, r: int) -> GraftResult:
    """Search a valid y on dom(x) equal to x outside N(p+F, r) with the
    F-pattern planted at p.  An unsatisfiable window soundly refutes any
    full-plane graft."""
    domain = x.domain()
    target = {(p[0] + qx, p[1] + qy): t for (qx, qy), t in fpattern.items()}
    for c in target:
        if c not in domain:
            raise ValueError(f"graft target cell {c} outside the pattern")
    ball = neighborhood(target.keys(), r)
    frozen = {c: t for c, t in x.cells.items() if c not in ball}
    frozen.update(target)
    w = Window(tileset, frozen=frozen, cells=frozenset(domain))
    got = try_complete(w)
    return GraftResult(got is not None, got)


def verify_ramification(x: TilePattern, tileset: int, u: Cell, v: Cell,
                        f_region: Sequence[Cell], r: int,
                        lambdas: Sequence[int],
                        mus: Sequence[int]) -> bool:
    """True iff for every tested lambda and mu > 0 the F-pattern read off at
    mu*u + lambda*v cannot be r-grafted at lambda*v."""
    for lam in lambdas:
        pos = (lam * v[0], lam * v[1])
        for mu in mus:
            if mu <= 0:
                raise ValueError("mu must be positive")
            src = (mu * u[0] + lam * v[0], mu * u[1] + lam * v[1])
            fpattern = {}
            for (qx, qy) in f_region:
                c = (src[0] + qx, src[1] + qy)
                if c not in x.cells:
                    raise ValueError(f"witness does not cover source cell {c}")
                fpattern[(qx, qy)] = x.cells[c]
            if can_graft(x, tileset, fpattern, pos, r).ok:
                return False
    return True


@dataclass(frozen=True)
class StairWitness:
    """A staircase configuration with the graft-test bookkeeping attached."""

    pattern: TilePattern
    tilesets: tuple[int, ...]        # sets the witness is valid for
    u: Cell
    v: Cell
    f_region: tuple[Cell, ...]
    r: int
    lambdas: tuple[int, ...]
    mus: tuple[int, ...]

    def verify(self, tileset: int | None = None) -> bool:
        ts = tileset if tileset is not None else self.tilesets[0]
        return verify_ramification(self.pattern, ts, self.u, self.v,
                                   self.f_region, self.r, self.lambdas,
                                   self.mus)


def wire_stair_witness(r: int, lambdas: Sequence[int] = (0, 1, 2),
                       mus: Sequence[int] = (1, 2, 3),
                       n: int | None = None) -> StairWitness:
    """Stairs of horizontal-wire blocks, for the tilesets containing
    {white, 1010, 1100, 0011} but not 1001.

    Each gadget is a square of 1010 tiles whose main diagonal pins its
    bottom-right cell; the cells straight below stay white.  Gadgets are
    chained by staircase bridges so every wire continues or leaves the
    window.
    """
    ell = 2 * r + 1
    if n is None:
        n = 2 * ell + 2
    if n < 2 * ell + 2:
        raise ValueError(f"n must be at least {2 * ell + 2}")
    lam_max = max(lambdas)
    big = lam_max + 1
    depth = max(max(mus), r) + 1
    x0, x1 = -ell, big * n
    y0, y1 = -depth, big + ell
    cells = {(x, y): WHITE for x in range(x0, x1 + 1) for y in range(y0, y1 + 1)}
    for lam in range(big + 1):
        bx = lam * n
        for s in range(ell + 1):
            for t in range(ell + 1):
                cells[(bx - ell + s, lam + t)] = HWIRE
    for lam in range(big):
        bx = lam * n
        for y in range(lam, lam + ell + 1):
            c = bx + 1 + (lam + ell - y)
            for xx in range(bx + 1, c):
                cells[(xx, y)] = HWIRE
            cells[(c, y)] = 0b1100
            cells[(c, y + 1)] = 0b0011
            for xx in range(c + 1, bx + n - ell):
                cells[(xx, y + 1)] = HWIRE
    cells = {c: t for c, t in cells.items()
             if x0 <= c[0] <= x1 and y0 <= c[1] <= y1}
    ts = (1 << WHITE) | (1 << HWIRE) | (1 << 0b1100) | (1 << 0b0011)
    return StairWitness(TilePattern(cells), (ts,), (0, -1), (n, 1), ((0, 0),),
                        r, tuple(lambdas), tuple(mus))


def corner_stair_witness(r: int, lambdas: Sequence[int] = (0, 1, 2),
                         mus: Sequence[int] = (1, 2, 3),
                         n: int | None = None) -> StairWitness:
    """Stairs of corner-tile blocks for the tilesets with all four corners
    and the white tile (with or without the black tile).

    Each gadget is a checkered square of 1001/0110 whose 1001 main diagonal
    pins the bottom-right cell to 0110; the cells straight below stay white.
    Wires spill out in braided cables between gadgets; the remaining spills
    leave the (sparse) domain.
    """
    ell = 2 * r + 1
    if n is None:
        n = ell + 4
    if n < ell + 3 or (n - ell) % 2:
        raise ValueError(f"n must be >= {ell + 3} and have the parity of ell")
    lam_max = max(lambdas)
    big = lam_max + 1
    depth = max(max(mus), r) + 1
    cells: dict[Cell, int] = {}
    for lam in range(big + 1):
        bx = lam * n
        for s in range(ell + 1):
            for t in range(ell + 1):
                cells[(bx - ell + s, lam + t)] = 0b1001 if (s - t) % 2 == 0 else 0b0110
        cells[(bx - ell - 1, lam)] = 0b0011          # corner-loop, west side
        cells[(bx - ell - 1, lam - 1)] = 0b0110
        for s in range(ell):                          # under-row
            cells[(bx - ell + s, lam - 1)] = 0b1100 if s % 2 == 0 else 0b0011
        for d in range(1, depth + 1):                 # red column stays white
            cells[(bx, lam - d)] = WHITE
    for lam in range(big):
        bx = lam * n
        lo, hi = bx + 1, bx + n - ell - 1
        for k in range(1, (ell - 1) // 2 + 1):
            for col in range(lo, hi + 1):
                if (col - lo) % 2 == 0:
                    cells[(col, lam + 2 * k)] = 0b1100
                    cells[(col, lam + 2 * k + 1)] = 0b0011
                else:
                    cells[(col, lam + 2 * k)] = 0b0110
                    cells[(col, lam + 2 * k + 1)] = 0b1001
        for col in range(lo, hi - 1 + 1):
            cells[(col, lam + 1)] = WHITE
        for col in range(lo + 1, hi - 1 + 1):
            cells[(col, lam)] = WHITE
    corners = (1 << 0b1100) | (1 << 0b0110) | (1 << 0b0011) | (1 << 0b1001)
    t4 = corners | (1 << WHITE)
    t7 = t4 | (1 << BLACK)
    return StairWitness(TilePattern(cells), (t4, t7), (0, -1), (n, 1),
                        ((0, 0),), r, tuple(lambdas), tuple(mus))


def enumerate_valid_windows(tileset: int, width: int, height: int,
                            limit: int = 1 << 22) -> list[TilePattern]:
    """Every locally valid width x height filling, in deterministic order."""
    w = rect_window(tileset, 0, 0, width - 1, height - 1)
    return iter_completions(w, limit=limit)
