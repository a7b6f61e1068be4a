"""Wang squares: matching rules, periodic search, and the encoding as polyomino tiles."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .abelian import GroupSpec, Lattice
from .errors import BudgetError, DecodeError, DegenerateError, DimensionError
from .solver import TilingCertificate
from .tiles import Tile, TileSystem

EAST, SOUTH, WEST, NORTH = range(4)


@dataclass(frozen=True)
class WangInstance:
    """Colors C and squares W, each square given as (east, south, west, north)."""

    colors: tuple[str, ...]
    squares: tuple[tuple[str, str, str, str], ...]

    def __post_init__(self):
        colors = tuple(self.colors)
        squares = tuple(tuple(s) for s in self.squares)
        if not colors or len(set(colors)) != len(colors):
            raise DegenerateError("colors must be nonempty and distinct")
        if not squares:
            raise DegenerateError("a Wang instance needs at least one square")
        for s in squares:
            if len(s) != 4 or any(c not in colors for c in s):
                raise DimensionError(f"square {s} does not use the declared colors")
        object.__setattr__(self, "colors", colors)
        object.__setattr__(self, "squares", squares)

    def color_index(self, c: str) -> int:
        return self.colors.index(c)

    @property
    def coded(self) -> np.ndarray:
        """Squares as an (n, 4) array of color indices."""
        return np.array([[self.colors.index(c) for c in s] for s in self.squares], dtype=np.int64)

    def to_json(self) -> dict:
        return {"colors": list(self.colors), "squares": [list(s) for s in self.squares]}

    @classmethod
    def from_json(cls, obj) -> WangInstance:
        return cls(tuple(obj["colors"]), tuple(tuple(s) for s in obj["squares"]))


@dataclass(frozen=True, eq=False)
class WangAssignment:
    """Square indices on a window or torus; grid[i, j] sits at (origin + (i, j))."""

    grid: np.ndarray
    origin: tuple[int, int] = (0, 0)
    torus: bool = False

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=np.int64)
        if grid.ndim != 2 or grid.size == 0:
            raise DegenerateError("assignment domain must be a nonempty rectangle")
        grid.setflags(write=False)
        object.__setattr__(self, "grid", grid)

    def __eq__(self, other):
        return (
            isinstance(other, WangAssignment)
            and self.origin == other.origin
            and self.torus == other.torus
            and np.array_equal(self.grid, other.grid)
        )

    @property
    def shape(self) -> tuple[int, int]:
        return self.grid.shape

    def at(self, n: int, m: int) -> int:
        i, j = n - self.origin[0], m - self.origin[1]
        if self.torus:
            i, j = i % self.shape[0], j % self.shape[1]
        return int(self.grid[i, j])

    def to_json(self) -> dict:
        return {"origin": list(self.origin), "torus": self.torus, "grid": self.grid.tolist()}

    @classmethod
    def from_json(cls, obj) -> WangAssignment:
        return cls(np.array(obj["grid"], dtype=np.int64), tuple(obj.get("origin", (0, 0))), bool(obj.get("torus", False)))


@dataclass(frozen=True)
class WangVerdict:
    ok: bool
    rule: int | None = None  # 1: unknown square, 2: mismatched edge
    cell: tuple[int, int] | None = None
    neighbor: tuple[int, int] | None = None

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "rule": self.rule,
            "cell": None if self.cell is None else list(self.cell),
            "neighbor": None if self.neighbor is None else list(self.neighbor),
        }


def wang_check(W: WangInstance, a: WangAssignment) -> WangVerdict:
    """Rule (1): every cell holds a square of W. Rule (2): shared edges agree."""
    grid = a.grid
    ox, oy = a.origin
    bad = np.argwhere((grid < 0) | (grid >= len(W.squares)))
    if len(bad):
        i, j = bad[0]
        return WangVerdict(False, 1, (ox + int(i), oy + int(j)))
    code = W.coded[grid]  # (w, h, 4)
    if a.torus:
        east_ok = code[:, :, EAST] == np.roll(code[:, :, WEST], -1, axis=0)
        north_ok = code[:, :, NORTH] == np.roll(code[:, :, SOUTH], -1, axis=1)
    else:
        east_ok = np.ones(grid.shape, dtype=bool)
        north_ok = np.ones(grid.shape, dtype=bool)
        east_ok[:-1] = code[:-1, :, EAST] == code[1:, :, WEST]
        north_ok[:, :-1] = code[:, :-1, NORTH] == code[:, 1:, SOUTH]
    for ok, step in ((east_ok, (1, 0)), (north_ok, (0, 1))):
        bad = np.argwhere(~ok)
        if len(bad):
            i, j = (int(x) for x in bad[0])
            return WangVerdict(False, 2, (ox + i, oy + j), (ox + i + step[0], oy + j + step[1]))
    return WangVerdict(True)


def wang_solve_periodic(W: WangInstance, period: tuple[int, int], cap: int = 10**4) -> WangAssignment | None:
    """Backtracking search for a torus assignment of the given period."""
    p1, p2 = period
    if p1 < 1 or p2 < 1:
        raise DimensionError("periods must be positive")
    if p1 * p2 > cap:
        raise BudgetError(f"torus {p1}x{p2} exceeds the cap {cap}")
    code = [tuple(int(x) for x in s) for s in W.coded]
    n = len(code)
    grid = [[-1] * p2 for _ in range(p1)]
    cells = [(i, j) for j in range(p2) for i in range(p1)]

    def fits(s, i, j):
        e, so, w, no = code[s]
        left = grid[(i - 1) % p1][j]
        if left >= 0 and code[left][EAST] != w:
            return False
        right = grid[(i + 1) % p1][j]
        if right >= 0 and code[right][WEST] != e:
            return False
        below = grid[i][(j - 1) % p2]
        if below >= 0 and code[below][NORTH] != so:
            return False
        above = grid[i][(j + 1) % p2]
        if above >= 0 and code[above][SOUTH] != no:
            return False
        return True

    def search(k):
        if k == len(cells):
            return True
        i, j = cells[k]
        for s in range(n):
            grid[i][j] = s
            if fits(s, i, j) and search(k + 1):
                return True
        grid[i][j] = -1
        return False

    if not search(0):
        return None
    return WangAssignment(np.array(grid, dtype=np.int64), torus=True)


def wang_tileable_upto(W: WangInstance, max_period: tuple[int, int] = (3, 3)) -> WangAssignment | None:
    for p1, p2 in itertools.product(range(1, max_period[0] + 1), range(1, max_period[1] + 1)):
        a = wang_solve_periodic(W, (p1, p2))
        if a is not None:
            return a
    return None


# ---------------------------------------------------------------------------
# Encoding as polyominoes


@dataclass(frozen=True)
class GolombCode:
    """Encoded tile system plus what is needed to read Wang assignments back."""

    instance: WangInstance
    K: int
    system: TileSystem


def square_polyomino(e: int, s: int, w: int, n: int, K: int) -> Tile:
    """K x K block with west/south notches and east/north bumps.

    Each side carries a key cell at offset 1 and a color cell at offset i + 2
    for color index i.
    """
    cells = {(x, y) for x in range(K) for y in range(K)}
    cells -= {(0, 1), (0, w + 2), (1, 0), (s + 2, 0)}
    cells |= {(K, 1), (K, e + 2), (1, K), (n + 2, K)}
    return Tile(GroupSpec(2), tuple(cells))


def golomb_encode(W: WangInstance) -> GolombCode:
    K = 2 * len(W.colors) + 6
    tiles = tuple(square_polyomino(*map(int, row), K) for row in W.coded)
    return GolombCode(W, K, TileSystem(tiles))


def decode_tiling(code: GolombCode, cert: TilingCertificate) -> WangAssignment:
    """Read a torus Wang assignment off a periodic tiling by the encoded polyominoes."""
    K = code.K
    sols = cert.solutions
    if len(sols) != len(code.system.tiles):
        raise DecodeError("certificate does not match the encoded system")
    lat = sols[0].lattice
    if any(s.lattice != lat for s in sols):
        raise DecodeError("tiling sets use different lattices")
    if any(x % K for c in lat.columns for x in c):
        raise DecodeError(f"period lattice {lat} is not contained in {K}Z^2")
    placements = [(t, p) for t, s in enumerate(sols) for p in s.representatives()]
    if not placements:
        raise DecodeError("empty tiling")
    offset = (placements[0][1][0] % K, placements[0][1][1] % K)
    coarse = Lattice.from_generators([[x // K for x in c] for c in lat.columns], 2)
    # a rectangular torus inside the coarse period lattice
    p1 = next(k for k in range(1, coarse.index + 1) if coarse.contains((k, 0)))
    p2 = next(k for k in range(1, coarse.index + 1) if coarse.contains((0, k)))
    grid = np.full((p1, p2), -1, dtype=np.int64)
    for t, (x, y) in placements:
        if (x % K, y % K) != offset:
            raise DecodeError(f"translate ({x}, {y}) is off the grid {offset} + {K}Z^2")
        cx, cy = (x - offset[0]) // K, (y - offset[1]) // K
        for i in range(p1):
            for j in range(p2):
                if not any(coarse.reduce((i - cx, j - cy))):
                    if grid[i, j] >= 0 and grid[i, j] != t:
                        raise DecodeError("two squares claim one grid cell")
                    grid[i, j] = t
    if (grid < 0).any():
        raise DecodeError("tiling leaves grid cells without a square")
    return WangAssignment(grid, torus=True)


def all_instances(max_squares: int = 3, max_colors: int = 2):
    """Every instance with colors c0..c{k-1} (k <= max_colors) and 1..max_squares distinct squares.

    Instances are generated once per color count, using all k colors in
    the declared alphabet (squares may leave some unused).
    """
    for k in range(1, max_colors + 1):
        colors = tuple(f"c{i}" for i in range(k))
        squares = list(itertools.product(colors, repeat=4))
        for size in range(1, max_squares + 1):
            for combo in itertools.combinations(squares, size):
                yield WangInstance(colors, combo)
