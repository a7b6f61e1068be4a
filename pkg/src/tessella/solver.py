"""Periodic tilings by exact cover, the 1D decider and the semi-decision procedure."""
from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache, reduce
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernels
from .abelian import GroupSpec, Lattice, QuotientGroup, lattices_of_index, quotient
from .cover import CoverProblem
from .errors import BudgetError, DimensionError, UnsupportedError
from .tiles import Tile, TileSystem, as_system, diam

DEFAULT_CAP = 10**6


# ---------------------------------------------------------------------------
# Periodic sets


@dataclass(frozen=True)
class PeriodicSet:
    """A = section(residues) + (lattice x {0}), with residues indexing G / lattice."""

    group: GroupSpec
    lattice: Lattice
    residues: frozenset[int]

    def __post_init__(self):
        if self.lattice.d != self.group.rank:
            raise DimensionError("lattice rank does not match the group")
        object.__setattr__(self, "residues", frozenset(int(r) for r in self.residues))
        size = self.quotient.size
        if any(r < 0 or r >= size for r in self.residues):
            raise DimensionError("residue index outside the quotient")

    @cached_property
    def quotient(self) -> QuotientGroup:
        return QuotientGroup(self.group, self.lattice)

    @classmethod
    def from_points(cls, group: GroupSpec, lattice: Lattice, points: Iterable[Sequence[int]]) -> PeriodicSet:
        pts = np.array([list(p) for p in points], dtype=np.int64).reshape(-1, group.width)
        q = QuotientGroup(group, lattice)
        return cls(group, lattice, frozenset(q.project(pts).tolist()))

    @classmethod
    def everything(cls, group: GroupSpec) -> PeriodicSet:
        lat = Lattice.identity(group.rank)
        return cls(group, lat, frozenset(range(QuotientGroup(group, lat).size)))

    def representatives(self) -> list[tuple[int, ...]]:
        reps = self.quotient.section(sorted(self.residues))
        return [tuple(int(x) for x in r) for r in reps]

    def contains(self, point: Sequence[int]) -> bool:
        return self.quotient.project_one(tuple(point)) in self.residues

    def contains_many(self, points) -> np.ndarray:
        idx = self.quotient.project(points)
        return np.isin(idx, np.fromiter(self.residues, dtype=np.int64, count=len(self.residues)))

    def indicator(self, q: QuotientGroup) -> np.ndarray:
        """Boolean membership over the classes of q, whose lattice must refine ours."""
        mask = np.zeros(self.quotient.size, dtype=bool)
        mask[list(self.residues)] = True
        return mask[self.quotient.project(q.representatives)]

    def refine(self, lattice: Lattice) -> PeriodicSet:
        if not lattice.is_sublattice_of(self.lattice):
            raise DimensionError(f"{lattice} does not refine {self.lattice}")
        q = QuotientGroup(self.group, lattice)
        return PeriodicSet(self.group, lattice, frozenset(np.flatnonzero(self.indicator(q)).tolist()))

    def translate(self, v: Sequence[int]) -> PeriodicSet:
        reps = np.array(self.representatives(), dtype=np.int64).reshape(-1, self.group.width)
        idx = self.quotient.project(reps + np.asarray(v, dtype=np.int64)[None, :])
        return PeriodicSet(self.group, self.lattice, frozenset(idx.tolist()))

    def negate(self) -> PeriodicSet:
        reps = np.array(self.representatives(), dtype=np.int64).reshape(-1, self.group.width)
        return PeriodicSet(self.group, self.lattice, frozenset(self.quotient.project(-reps).tolist()))

    @property
    def density(self) -> Fraction:
        return Fraction(len(self.residues), self.quotient.size)

    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            "lattice": self.lattice.to_json(),
            "residues": [list(r) for r in self.representatives()],
        }

    @classmethod
    def from_json(cls, obj) -> PeriodicSet:
        g = GroupSpec.from_json(obj["group"])
        return cls.from_points(g, Lattice.from_json(obj["lattice"]), obj["residues"])


@dataclass(frozen=True)
class PeriodicFunction:
    """An integer-valued lattice-periodic function on a group, one value per quotient class."""

    group: GroupSpec
    lattice: Lattice
    values: tuple[int, ...]

    @classmethod
    def constant(cls, group: GroupSpec, c: int) -> PeriodicFunction:
        lat = Lattice.identity(group.rank)
        return cls(group, lat, (int(c),) * QuotientGroup(group, lat).size)

    @classmethod
    def indicator(cls, A: PeriodicSet) -> PeriodicFunction:
        vals = [0] * A.quotient.size
        for r in A.residues:
            vals[r] = 1
        return cls(A.group, A.lattice, tuple(vals))

    def on(self, q: QuotientGroup) -> np.ndarray:
        own = QuotientGroup(self.group, self.lattice)
        return np.asarray(self.values, dtype=np.int64)[own.project(q.representatives)]


# ---------------------------------------------------------------------------
# Results


@dataclass(frozen=True)
class TilingCertificate:
    system: TileSystem
    solutions: tuple[PeriodicSet, ...]
    verified: bool

    @property
    def solution(self) -> PeriodicSet:
        """The tiling set of the first (for monotilings, the only) tile."""
        return self.solutions[0]

    @property
    def lattice(self) -> Lattice:
        return self.solutions[0].lattice

    def to_json(self) -> dict:
        return {
            "system": self.system.to_json(),
            "solutions": [s.to_json() for s in self.solutions],
            "verified": self.verified,
        }

    @classmethod
    def from_json(cls, obj) -> TilingCertificate:
        """Rebuild a certificate; ``verified`` is recomputed rather than trusted."""
        system = TileSystem.from_json(obj["system"])
        sols = tuple(PeriodicSet.from_json(s) for s in obj["solutions"])
        return cls(system, sols, check_tiling(system, list(sols)).ok)


@dataclass(frozen=True)
class Obstruction:
    """No exact cover of the box [-radius, radius]^d x G_0 exists, so the system does not tile."""

    system: TileSystem
    radius: int

    def to_json(self) -> dict:
        return {"system": self.system.to_json(), "radius": self.radius}

    @classmethod
    def from_json(cls, obj) -> Obstruction:
        return cls(TileSystem.from_json(obj["system"]), int(obj["radius"]))


@dataclass(frozen=True)
class Violation:
    point: tuple[int, ...]
    count: int
    expected: int

    def to_json(self) -> dict:
        return {"point": list(self.point), "count": self.count, "expected": self.expected}


@dataclass(frozen=True)
class CheckResult:
    violation: Violation | None = None

    @property
    def ok(self) -> bool:
        return self.violation is None

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "violation": None if self.ok else self.violation.to_json()}


@dataclass(frozen=True)
class Decision1D:
    tileable: bool
    universal_period: int | None = None
    witness: PeriodicSet | None = None
    stuck_prefix: frozenset[int] | None = None

    @property
    def period(self) -> int | None:
        return None if self.witness is None else self.witness.lattice.index

    def to_json(self) -> dict:
        out: dict = {"tileable": self.tileable}
        if self.tileable:
            out["period"] = self.period
            out["universal_period"] = self.universal_period
            out["witness"] = self.witness.to_json()
        else:
            out["stuck_prefix"] = sorted(self.stuck_prefix or ())
        return out


# ---------------------------------------------------------------------------
# Admissibility filters


def _reachable_sums(sizes: Sequence[int], limit: int) -> np.ndarray:
    ok = np.zeros(limit + 1, dtype=bool)
    ok[0] = True
    for s in sorted(set(sizes)):
        for t in range(s, limit + 1):
            if ok[t - s]:
                ok[t] = True
    return ok


def _quotient_arrays(q: QuotientGroup) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    return q._cols, q._mods, q._dims


def _injective_tiles(system: TileSystem, q: QuotientGroup) -> list[int]:
    """Indices of tiles whose points stay distinct modulo the lattice."""
    tiles, tlen = _screen_data(system)[:2]
    return [int(i) for i in np.flatnonzero(_kernels.injective(tiles, tlen, *_quotient_arrays(q), q.size))]


def _count_ok(sizes: Sequence[int], total: int, sums: np.ndarray | None) -> bool:
    if not sizes:
        return False
    if len(set(sizes)) == 1:
        return total % sizes[0] == 0
    if sums is None or len(sums) <= total:
        sums = _reachable_sums(sizes, total)
    return bool(sums[total])


def lattice_admissible(system: TileSystem, lattice: Lattice, sums: np.ndarray | None = None) -> bool:
    """Cheap necessary conditions for a lattice-periodic solution.

    The count level * |G/lattice| must be a sum of tile sizes. At level 1 a
    tile that collides with itself modulo the lattice can never be placed,
    so the count must be reachable with the remaining tiles alone.
    """
    g = system.group
    total = system.level * lattice.index * g.torsion_order
    sizes = [len(t) for t in system.tiles]
    if system.level == 1:
        usable = _injective_tiles(system, quotient(g, lattice))
        if len(usable) < len(sizes):
            sizes = [sizes[i] for i in usable]
            sums = None
    return _count_ok(sizes, total, sums)


# ---------------------------------------------------------------------------
# Periodic search


def _periodic_rows(system: TileSystem, q: QuotientGroup) -> np.ndarray:
    n = q.size
    width = max(len(t) for t in system.tiles)
    reps = q.representatives
    usable = _injective_tiles(system, q) if system.level == 1 else range(len(system.tiles))
    blocks = []
    for i, t in enumerate(system.tiles):
        if i not in usable:
            # a self-overlapping tile can never be placed at level 1
            blocks.append(np.full((n, width), -1, dtype=np.int64))
            continue
        pts = np.array(t.points, dtype=np.int64)
        cells = q.project((reps[:, None, :] + pts[None, :, :]).reshape(-1, q.group.width)).reshape(n, len(t))
        if len(t) < width:
            cells = np.hstack([cells, np.full((n, width - len(t)), -1, dtype=np.int64)])
        blocks.append(cells)
    return np.vstack(blocks)


@lru_cache(maxsize=1024)
def _rim(a: Tile) -> list[tuple[int, ...]]:
    """Unit neighbours of a that lie outside a."""
    g = a.group
    steps = [tuple(s if k == i else 0 for k in range(g.width)) for i in range(g.rank) for s in (1, -1)]
    cells = {g.canonical(tuple(x + y for x, y in zip(p, e))) for p in a.points for e in steps}
    return sorted(cells - set(a.points))


def _padded(groups: list[np.ndarray], width: int) -> tuple[np.ndarray, np.ndarray]:
    n = max((len(x) for x in groups), default=0) or 1
    out = np.zeros((len(groups), n, width), dtype=np.int64)
    for i, x in enumerate(groups):
        out[i, : len(x)] = x
    return out, np.array([len(x) for x in groups], dtype=np.int64)


@lru_cache(maxsize=4096)
def _differences(a: Tile, b: Tile) -> np.ndarray:
    """The distinct vectors x - y with x in a and y in b."""
    pa = np.array(a.points, dtype=np.int64)
    pb = np.array(b.points, dtype=np.int64)
    return np.unique((pa[:, None, :] - pb[None, :, :]).reshape(-1, a.group.width), axis=0)


@lru_cache(maxsize=256)
def _screen_data(system: TileSystem) -> tuple:
    """Lattice-independent arrays for the level-1 screen: tiles, pairwise differences, rims."""
    w = system.group.width
    pts = [np.array(t.points, dtype=np.int64) for t in system.tiles]
    tiles, tlen = _padded(pts, w)
    T = len(pts)
    dflat, dlen = _padded([_differences(a, b) for a in system.tiles for b in system.tiles], w)
    diffs = dflat.reshape(T, T, -1, w)
    rims, rlen = _padded([np.array(_rim(t), dtype=np.int64).reshape(-1, w) for t in system.tiles], w)
    return tiles, tlen, diffs, dlen.reshape(T, T), rims, rlen


def _screen(system: TileSystem, q: QuotientGroup) -> tuple[list[int], list[int]]:
    """Usable tiles (injective modulo the lattice) and viable tiles for residue 0 at level 1.

    Tile u fits at x exactly when x avoids (t - u) modulo the lattice. With t
    at residue 0, a residue that no fitting translate covers rules t out.
    Most lattices fail here, long before a cover problem would be built.
    """
    usable, start = _kernels.screen(*_screen_data(system), *_quotient_arrays(q), q.size)
    return [int(i) for i in np.flatnonzero(usable)], [int(i) for i in np.flatnonzero(start)]


def _periodic_problem(system: TileSystem, q: QuotientGroup, deadline=None, max_nodes=None) -> CoverProblem:
    return CoverProblem(
        q.size, _periodic_rows(system, q), level=system.level, deadline=deadline, max_nodes=max_nodes
    )


def _certificate(system: TileSystem, q: QuotientGroup, rows: np.ndarray) -> TilingCertificate:
    n = q.size
    sols = tuple(
        PeriodicSet(system.group, q.lattice, frozenset(int(r) - t * n for r in rows if t * n <= r < (t + 1) * n))
        for t in range(len(system.tiles))
    )
    verified = check_tiling(system, list(sols)).ok
    return TilingCertificate(system, sols, verified)


def solve_periodic(
    system: TileSystem | Tile,
    lattice: Lattice,
    cap: int = DEFAULT_CAP,
    deadline: float | None = None,
    max_nodes: int | None = None,
) -> TilingCertificate | None:
    """Search for a lattice-periodic (level-k, multi-tile) tiling; None if there is none."""
    system = as_system(system)
    g = system.group
    if lattice.d != g.rank:
        raise DimensionError(f"lattice of rank {lattice.d} for group of rank {g.rank}")
    size = lattice.index * g.torsion_order
    if size * system.level > cap:
        raise BudgetError(f"quotient of size {size} at level {system.level} exceeds the cap {cap}")
    q = quotient(g, lattice)
    starts = range(len(system.tiles))
    if system.level == 1:
        usable, starts = _screen(system, q)
        if not starts or not _count_ok([len(system.tiles[i]) for i in usable], size, None):
            return None
    elif not lattice_admissible(system, lattice):
        return None
    prob = _periodic_problem(system, q, deadline, max_nodes)
    # Any solution can be translated so that some tile sits at residue 0.
    # Branch over which tile that is; earlier choices are excluded after use.
    for t in range(len(system.tiles)):
        mark = prob.mark()
        if t in starts and prob.force(t * q.size):
            rows = prob.solve()
            if rows is not None:
                return _certificate(system, q, rows)
        prob.rollback(mark)
        prob.exclude([t * q.size])
    return None


def all_periodic_solutions(system: TileSystem | Tile, lattice: Lattice) -> list[tuple[PeriodicSet, ...]]:
    """Every lattice-periodic solution (no symmetry breaking); meant for small quotients."""
    system = as_system(system)
    q = QuotientGroup(system.group, lattice)
    prob = _periodic_problem(system, q)
    return [_certificate(system, q, rows).solutions for rows in prob.solutions()]


def check_tiling(system: TileSystem | Tile, sets: Sequence[PeriodicSet] | PeriodicSet) -> CheckResult:
    """Evaluate sum_t 1_{F_t} * 1_{A_t} on a fundamental domain of the common refinement."""
    system = as_system(system)
    if isinstance(sets, PeriodicSet):
        sets = [sets]
    if len(sets) != len(system.tiles):
        raise DimensionError(f"{len(sets)} tiling sets for {len(system.tiles)} tiles")
    g = system.group
    if any(A.group != g for A in sets):
        raise DimensionError("tiling sets live in a different group than the tiles")
    lat = reduce(Lattice.intersection, (A.lattice for A in sets))
    q = QuotientGroup(g, lat)
    counts = np.zeros(q.size, dtype=np.int64)
    for tile, A in zip(system.tiles, sets):
        ind = A.indicator(q).astype(np.int64)
        for f in tile.points:
            counts += ind[q.shift_table(tuple(-x for x in f))]
    return _first_violation(q, counts, np.full(q.size, system.level))


def _first_violation(q: QuotientGroup, counts: np.ndarray, expected: np.ndarray) -> CheckResult:
    bad = np.flatnonzero(counts != expected)
    if len(bad) == 0:
        return CheckResult()
    i = int(bad[0])
    return CheckResult(Violation(q.section_one(i), int(counts[i]), int(expected[i])))


def verify_soft_tiling(
    f: Mapping[tuple[int, ...], int], g: PeriodicFunction, A: PeriodicSet
) -> CheckResult:
    """Check f * 1_A = g, with f finitely supported and g periodic."""
    if g.group != A.group:
        raise UnsupportedError("g and A live on different groups")
    lat = A.lattice.intersection(g.lattice)
    q = QuotientGroup(A.group, lat)
    ind = A.indicator(q).astype(np.int64)
    conv = np.zeros(q.size, dtype=np.int64)
    for y, c in f.items():
        if c:
            conv += c * ind[q.shift_table(tuple(-x for x in y))]
    return _first_violation(q, conv, g.on(q))


# ---------------------------------------------------------------------------
# One dimension


def decide_1d(tile: Tile) -> Decision1D:
    """Complete decision for tiles of Z via the boundary-state graph.

    A state is the set of covered cells in the window [c, c + diam) ahead of
    the leftmost uncovered cell c (so bit 0 is always clear). Placing F at c
    is forced, which makes the graph functional. Every tiling of Z reads off
    a bi-infinite walk, hence lies on a cycle; the cycles give all tilings.
    """
    g = tile.group
    if g.rank != 1 or g.torsion:
        raise UnsupportedError("decide_1d needs a tile in Z")
    xs = sorted(p[0] for p in tile.points)
    xs = [x - xs[0] for x in xs]
    D = diam(tile)
    lat_g = GroupSpec(1)
    if D == 0:
        return Decision1D(True, 1, PeriodicSet(lat_g, Lattice.diagonal(1), frozenset({0})))
    fmask = sum(1 << x for x in xs)

    def step(m: int):
        if m & fmask:
            return None
        m2 = m | fmask
        s = (~m2 & (m2 + 1)).bit_length() - 1  # trailing ones
        return m2 >> s, s

    succ = {}
    for m in range(0, 1 << D, 2):
        succ[m] = step(m)

    # cycles of a functional graph
    color: dict[int, int] = {}
    cycles: list[list[int]] = []
    for start in succ:
        path = []
        m = start
        while m is not None and m not in color:
            color[m] = 1
            path.append(m)
            nxt = succ[m]
            m = None if nxt is None else nxt[0]
        if m is not None and color.get(m) == 1:
            cycles.append(path[path.index(m):])
        for p in path:
            color[p] = 2

    if not cycles:
        placed = []
        m, pos = 0, 0
        while succ[m] is not None:
            placed.append(pos)
            m, s = succ[m]
            pos += s
        return Decision1D(False, stuck_prefix=frozenset(placed))

    def period(cyc):
        return sum(succ[m][1] for m in cyc)

    periods = [period(c) for c in cycles]
    best = min(range(len(cycles)), key=lambda i: (periods[i], min(cycles[i])))
    cyc = cycles[best]
    start = min(cyc)
    T = periods[best]
    placed, m, pos = [], start, 0
    while True:
        placed.append(pos)
        m, s = succ[m]
        pos += s
        if m == start:
            break
    witness = PeriodicSet(lat_g, Lattice.diagonal(T), frozenset(p % T for p in placed))
    return Decision1D(True, math.lcm(*periods), witness)


def universal_bound(tile: Tile) -> int:
    return len(tile) * diam(tile) ** (len(tile) - 1)


# ---------------------------------------------------------------------------
# Obstructions and the semi-decision procedure


def _box_problem(system: TileSystem, radius: int, deadline=None, max_nodes=None) -> CoverProblem:
    g = system.group
    d = g.rank
    tiles = [np.array(t.points, dtype=np.int64) for t in system.tiles]
    lo = np.array([min(int(p[:, i].min()) for p in tiles) for i in range(d)], dtype=np.int64)
    hi = np.array([max(int(p[:, i].max()) for p in tiles) for i in range(d)], dtype=np.int64)
    ext = (hi - lo).astype(np.int64)
    # every cell touched by a translate meeting the box lies in [-R-ext, R+ext]
    big_lo = -radius - ext
    big_dims = tuple(int(x) for x in (2 * radius + 1 + 2 * ext)) + g.torsion
    box_dims = (2 * radius + 1,) * d + g.torsion
    n_box = math.prod(box_dims)
    n_big = math.prod(big_dims)
    big_coords = np.stack(np.unravel_index(np.arange(n_big), big_dims), axis=1).astype(np.int64)
    big_coords[:, :d] += big_lo
    inside = np.all(np.abs(big_coords[:, :d]) <= radius, axis=1)
    # primary ids: the box cells in order; secondary after
    ids = np.empty(n_big, dtype=np.int64)
    ids[inside] = np.arange(n_box)
    ids[~inside] = n_box + np.arange(n_big - n_box)

    box_pts = big_coords[inside]
    width = max(len(p) for p in tiles)
    mods = np.array(g.torsion, dtype=np.int64)

    def cell_ids(pts):
        pts = pts.copy()
        pts[..., :d] -= big_lo
        if len(mods):
            pts[..., d:] %= mods
        return ids[np.ravel_multi_index(tuple(np.moveaxis(pts, -1, 0)), big_dims)]

    def strides(dims):
        return np.array([math.prod(dims[i + 1 :]) for i in range(len(dims))], dtype=np.int64)

    blocks = []
    for p in tiles:
        if not len(mods):
            # no torsion: grid indices are linear in the coordinates, so shifts are offsets
            x_lo = -radius - p.max(axis=0)
            x_dims = tuple(int(v) for v in (2 * radius + 1 + p.max(axis=0) - p.min(axis=0)))
            xs = strides(x_dims)
            hit = np.zeros(math.prod(x_dims), dtype=bool)
            hit[((box_pts - x_lo) @ xs)[:, None] - (p @ xs)[None, :]] = True
            cand = np.stack(np.unravel_index(np.flatnonzero(hit), x_dims), axis=1).astype(np.int64) + x_lo
            bs = strides(big_dims)
            cells = ids[((cand - big_lo) @ bs)[:, None] + (p @ bs)[None, :]]
            if len(p) < width:
                cells = np.hstack([cells, np.full((len(cells), width - len(p)), -1, dtype=np.int64)])
            blocks.append(cells)
            continue
        # translates x with (x + p) meeting the box, marked on a grid instead of sorted
        x_lo = -radius - p[:, :d].max(axis=0)
        x_dims = tuple(int(v) for v in (2 * radius + 1 + p[:, :d].max(axis=0) - p[:, :d].min(axis=0))) + g.torsion
        hit = np.zeros(math.prod(x_dims), dtype=bool)
        for f in p:
            src = box_pts - f
            src[:, :d] -= x_lo
            if len(mods):
                src[:, d:] %= mods
            hit[np.ravel_multi_index(tuple(src.T), x_dims)] = True
        cand = np.stack(np.unravel_index(np.flatnonzero(hit), x_dims), axis=1).astype(np.int64)
        cand[:, :d] += x_lo
        cells = cell_ids(cand[:, None, :] + p[None, :, :])
        if len(p) < width:
            cells = np.hstack([cells, np.full((len(cells), width - len(p)), -1, dtype=np.int64)])
        blocks.append(cells)
    rows = np.vstack(blocks)
    return CoverProblem(n_box, rows, level=system.level, n_cells=n_big, deadline=deadline, max_nodes=max_nodes)


def box_obstruction(
    system: TileSystem | Tile, radius: int, deadline: float | None = None, max_nodes: int | None = None
) -> Obstruction | None:
    """An Obstruction if the centered box of the given radius cannot be covered, else None.

    Translates may overhang the box; cells outside are capped at the level.
    Each translate is used at most once, which keeps the search sound: a
    tiling of the whole group restricts to such a cover.
    """
    system = as_system(system)
    if radius < 0:
        raise ValueError("radius must be >= 0")
    prob = _box_problem(system, radius, deadline, max_nodes)
    if prob.solve() is None:
        return Obstruction(system, radius)
    return None


@dataclass(frozen=True)
class Budget:
    max_index: int = 256
    max_radius: int = 8
    cap: int = DEFAULT_CAP
    budget_ms: int | None = field(
        default_factory=lambda: int(os.environ["TESSELLA_BUDGET_MS"]) if os.environ.get("TESSELLA_BUDGET_MS") else None
    )


@dataclass(frozen=True)
class SemiDecision:
    outcome: str  # "tileable", "not_tileable" or "unknown"
    certificate: TilingCertificate | None = None
    obstruction: Obstruction | None = None
    lattices_tried: int = 0
    radii_tried: int = 0

    def to_json(self) -> dict:
        out: dict = {"outcome": self.outcome, "lattices_tried": self.lattices_tried, "radii_tried": self.radii_tried}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        if self.obstruction is not None:
            out["obstruction"] = self.obstruction.to_json()
        return out


def candidate_lattices(system: TileSystem, max_index: int) -> Iterable[Lattice]:
    """Lattices up to max_index that pass the admissibility filters, by index then HNF order."""
    g = system.group
    if g.rank == 0:
        yield Lattice(())
        return
    sums = _reachable_sums([len(t) for t in system.tiles], system.level * max_index * g.torsion_order)
    for n in range(1, max_index + 1):
        if not sums[system.level * n * g.torsion_order]:
            continue
        for lat in lattices_of_index(g.rank, n):
            if lattice_admissible(system, lat, sums):
                yield lat


def semi_decide(system: TileSystem | Tile, budget: Budget | None = None) -> SemiDecision:
    """Alternate one periodic attempt with one box-obstruction attempt until one succeeds."""
    system = as_system(system)
    budget = budget or Budget()
    if budget.max_index < 1 or budget.max_radius < 0:
        raise ValueError("budgets must be positive")
    deadline = None if budget.budget_ms is None else time.monotonic() + budget.budget_ms / 1000
    lattices = iter(candidate_lattices(system, budget.max_index))
    radius = 0
    tried = 0
    max_radius = budget.max_radius if system.group.rank else 0
    try:
        while True:
            lat = next(lattices, None)
            if lat is not None:
                tried += 1
                cert = solve_periodic(system, lat, cap=budget.cap, deadline=deadline)
                if cert is not None:
                    return SemiDecision("tileable", certificate=cert, lattices_tried=tried, radii_tried=radius)
            if radius <= max_radius:
                obs = box_obstruction(system, radius, deadline=deadline)
                radius += 1
                if obs is not None:
                    return SemiDecision("not_tileable", obstruction=obs, lattices_tried=tried, radii_tried=radius)
            if lat is None and radius > max_radius:
                return SemiDecision("unknown", lattices_tried=tried, radii_tried=radius)
            if deadline is not None and time.monotonic() > deadline:
                return SemiDecision("unknown", lattices_tried=tried, radii_tried=radius)
    except BudgetError:
        return SemiDecision("unknown", lattices_tried=tried, radii_tried=radius)
