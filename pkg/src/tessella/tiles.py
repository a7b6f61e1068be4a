"""Finite tiles F in Z^d x G_0 and their transforms."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .abelian import GroupElement, GroupSpec, primitive_direction
from .errors import CollisionError, DegenerateError, DimensionError, UnsupportedError


@dataclass(frozen=True)
class Tile:
    """A finite nonempty subset of a group, as sorted flat point tuples.

    Construction does not translate the points; use ``normalized()`` (or
    ``Tile.of(..., normalize=True)``) for the canonical representative whose
    free coordinates have coordinatewise minimum zero.
    """

    group: GroupSpec
    points: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        pts = sorted({self.group.canonical(p) for p in self.points})
        if not pts:
            raise DegenerateError("a tile must be nonempty")
        object.__setattr__(self, "points", tuple(pts))

    @classmethod
    def of(cls, points: Iterable[Sequence[int]], group: GroupSpec | None = None, normalize=False) -> Tile:
        pts = [tuple(p) if not isinstance(p, int) else (p,) for p in points]
        if group is None:
            group = GroupSpec(len(pts[0]))
        t = cls(group, tuple(pts))
        return t.normalized() if normalize else t

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, p):
        return tuple(p) in set(self.points)

    def elements(self) -> list[GroupElement]:
        return [GroupElement.from_flat(self.group, p) for p in self.points]

    @property
    def free_points(self) -> list[tuple[int, ...]]:
        d = self.group.rank
        return [p[:d] for p in self.points]

    def translate(self, v: Sequence[int]) -> Tile:
        return Tile(self.group, tuple(tuple(a + b for a, b in zip(p, v)) for p in self.points))

    def normalized(self) -> Tile:
        d = self.group.rank
        if d == 0:
            return self
        mins = [min(p[i] for p in self.points) for i in range(d)]
        return self.translate(tuple(-m for m in mins) + (0,) * len(self.group.torsion))

    @property
    def is_normalized(self) -> bool:
        return self == self.normalized()

    def to_json(self) -> dict:
        return {"group": self.group.to_json(), "points": [list(p) for p in self.points]}

    @classmethod
    def from_json(cls, obj) -> Tile:
        g = GroupSpec.from_json(obj["group"])
        return cls(g, tuple(tuple(int(x) for x in p) for p in obj["points"]))


@dataclass(frozen=True)
class TileSystem:
    """Ordered tiles over one group, to be tiled at ``level`` (1 = ordinary tiling)."""

    tiles: tuple[Tile, ...]
    level: int = 1

    def __post_init__(self):
        object.__setattr__(self, "tiles", tuple(self.tiles))
        if not self.tiles:
            raise DegenerateError("a tile system needs at least one tile")
        if len({t.group for t in self.tiles}) != 1:
            raise DimensionError("all tiles must share one group")
        if self.level < 1:
            raise DegenerateError("level must be >= 1")

    @classmethod
    def single(cls, tile: Tile, level: int = 1) -> TileSystem:
        return cls((tile,), level)

    @property
    def group(self) -> GroupSpec:
        return self.tiles[0].group

    def to_json(self) -> dict:
        return {"level": self.level, "tiles": [t.to_json() for t in self.tiles]}

    @classmethod
    def from_json(cls, obj) -> TileSystem:
        return cls(tuple(Tile.from_json(t) for t in obj["tiles"]), int(obj.get("level", 1)))


def as_system(obj, level: int | None = None) -> TileSystem:
    if isinstance(obj, TileSystem):
        return obj if level is None else TileSystem(obj.tiles, level)
    return TileSystem.single(obj, level or 1)


@dataclass(frozen=True)
class SliceMap:
    """Slices F_x = F cap ({x} x G_0), keyed by free part x; ``support`` is S_F."""

    group: GroupSpec
    slices: dict

    @property
    def support(self) -> list[tuple[int, ...]]:
        return sorted(self.slices)

    def union(self) -> set:
        return {x + t for x, tors in self.slices.items() for t in tors}


def reflect(tile: Tile) -> Tile:
    return Tile(tile.group, tuple(tile.group.neg(p) for p in tile.points)).normalized()


def dilate(tile: Tile, r: int) -> Tile:
    """The set {r f : f in F}, not normalized."""
    if r == 0:
        raise DegenerateError("dilation by 0 collapses the tile")
    g = tile.group
    pts = {g.canonical([r * x for x in p]) for p in tile.points}
    if len(pts) != len(tile.points):
        raise CollisionError(
            f"dilation by {r} collides points; r must be coprime to the torsion exponent {g.exponent}"
        )
    return Tile(g, tuple(pts))


def slices(tile: Tile) -> SliceMap:
    d = tile.group.rank
    out: dict = {}
    for p in tile.points:
        out.setdefault(p[:d], set()).add(p[d:])
    return SliceMap(tile.group, {x: frozenset(v) for x, v in out.items()})


def direction_set(tile: Tile) -> list[tuple[int, ...]]:
    """Primitive sign-normalized directions of the nonzero vectors in S_F - S_F.

    Only contracted for rank 2, where distinct primitive directions are
    automatically pairwise independent. Sorted by ``direction_order``.
    """
    d = tile.group.rank
    if d < 2:
        raise UnsupportedError("direction sets need rank >= 2")
    support = slices(tile).support
    dirs = {
        primitive_direction([a - b for a, b in zip(x, y)])
        for x, y in itertools.combinations(support, 2)
    }
    return sorted(dirs, key=direction_order)


def direction_order(v: Sequence[int]):
    """Canonical order on directions: shorter first, then coordinate axes in order."""
    return (sum(abs(x) for x in v), tuple(-x for x in v))


def diam(tile: Tile) -> int:
    if tile.group.rank != 1:
        raise UnsupportedError("diam is defined here for rank-1 groups only")
    xs = [p[0] for p in tile.points]
    return max(xs) - min(xs)


def box_tiles(shape: Sequence[int], max_size: int, min_size: int = 1) -> list[Tile]:
    """All normalized tiles in Z^d contained in prod [0, shape_i) with min_size..max_size points."""
    cells = list(itertools.product(*(range(s) for s in shape)))
    g = GroupSpec(len(shape))
    out = []
    for k in range(min_size, max_size + 1):
        for combo in itertools.combinations(cells, k):
            if all(min(p[i] for p in combo) == 0 for i in range(len(shape))):
                out.append(Tile(g, combo))
    return out


def default_dilation_modulus(tile: Tile) -> int:
    """q = exponent(G_0) * |F|."""
    return tile.group.exponent * len(tile)

