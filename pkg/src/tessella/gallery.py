"""Closed-form tilings: square tilings with shifts, disconnected tilings, and A_alpha."""
from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Sequence

import numpy as np

from .abelian import GroupSpec, Lattice
from .errors import RangeError, TieError
from .solver import PeriodicSet
from .tiles import Tile, TileSystem, as_system

Box = tuple[tuple[int, int], ...]  # inclusive (lo, hi) per coordinate


@dataclass(frozen=True, eq=False)
class WindowSet:
    """A finite view of a subset of Z^d: a box and a boolean mask over it."""

    box: Box
    mask: np.ndarray

    def __post_init__(self):
        box = tuple((int(lo), int(hi)) for lo, hi in self.box)
        if not box or any(hi < lo for lo, hi in box):
            raise RangeError("window box must be nonempty")
        mask = np.asarray(self.mask, dtype=bool)
        if mask.shape != tuple(hi - lo + 1 for lo, hi in box):
            raise RangeError(f"mask shape {mask.shape} does not fit box {box}")
        mask.setflags(write=False)
        object.__setattr__(self, "box", box)
        object.__setattr__(self, "mask", mask)

    def __eq__(self, other):
        return isinstance(other, WindowSet) and self.box == other.box and np.array_equal(self.mask, other.mask)

    @classmethod
    def from_predicate(cls, box: Box, predicate: Callable[[np.ndarray], np.ndarray]) -> WindowSet:
        pts = box_points(box)
        shape = tuple(hi - lo + 1 for lo, hi in box)
        return cls(box, np.asarray(predicate(pts), dtype=bool).reshape(shape))

    @classmethod
    def from_points(cls, box: Box, points) -> WindowSet:
        shape = tuple(hi - lo + 1 for lo, hi in box)
        mask = np.zeros(shape, dtype=bool)
        for p in points:
            mask[tuple(x - lo for x, (lo, _) in zip(p, box))] = True
        return cls(box, mask)

    @property
    def d(self) -> int:
        return len(self.box)

    @property
    def group(self) -> GroupSpec:
        return GroupSpec(self.d)

    def inside(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=np.int64).reshape(-1, self.d)
        lo = np.array([b[0] for b in self.box])
        hi = np.array([b[1] for b in self.box])
        return np.all((pts >= lo) & (pts <= hi), axis=1)

    def contains_many(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=np.int64).reshape(-1, self.d)
        if not self.inside(pts).all():
            raise RangeError("query outside the window")
        lo = np.array([b[0] for b in self.box])
        return self.mask[tuple((pts - lo).T)]

    def contains(self, point) -> bool:
        return bool(self.contains_many([point])[0])

    def points(self) -> list[tuple[int, ...]]:
        lo = [b[0] for b in self.box]
        return [tuple(int(i + l) for i, l in zip(idx, lo)) for idx in zip(*np.nonzero(self.mask))]

    def __len__(self):
        return int(self.mask.sum())

    def to_json(self) -> dict:
        """Run-length rows: one row per setting of the trailing coordinates,
        each a list of [start, length] runs along the first coordinate."""
        x0 = self.box[0][0]
        lines = np.moveaxis(self.mask, 0, -1).reshape(-1, self.mask.shape[0])
        rows = []
        for line in lines:
            edges = np.diff(np.concatenate(([0], line.view(np.int8), [0])))
            starts, stops = np.flatnonzero(edges == 1), np.flatnonzero(edges == -1)
            rows.append([[int(a) + x0, int(b - a)] for a, b in zip(starts, stops)])
        return {"box": [list(b) for b in self.box], "rows": rows}

    @classmethod
    def from_json(cls, obj) -> WindowSet:
        box = tuple(tuple(int(x) for x in b) for b in obj["box"])
        if not box or any(len(b) != 2 or b[1] < b[0] for b in box):
            raise RangeError("window box must be nonempty")
        shape = tuple(hi - lo + 1 for lo, hi in box)
        rows = obj["rows"]
        tail = int(np.prod(shape[1:], dtype=np.int64))
        if len(rows) != tail:
            raise RangeError(f"expected {tail} rows, got {len(rows)}")
        lines = np.zeros((tail, shape[0]), dtype=bool)
        x0, x1 = box[0]
        for line, runs in zip(lines, rows):
            for start, length in runs:
                start, length = int(start), int(length)
                if length < 1 or start < x0 or start + length - 1 > x1:
                    raise RangeError(f"run [{start}, {length}] leaves the box")
                line[start - x0 : start - x0 + length] = True
        mask = np.moveaxis(lines.reshape(shape[1:] + shape[:1]), -1, 0)
        return cls(box, mask)


def box_points(box: Box) -> np.ndarray:
    shape = tuple(hi - lo + 1 for lo, hi in box)
    pts = np.stack(np.unravel_index(np.arange(math.prod(shape)), shape), axis=1).astype(np.int64)
    return pts + np.array([lo for lo, _ in box], dtype=np.int64)


def window_of(A: PeriodicSet, box: Box) -> WindowSet:
    return WindowSet.from_predicate(box, A.contains_many)


def _as_fn(a) -> Callable[[np.ndarray], np.ndarray]:
    if callable(a):
        return lambda n: np.array([int(a(int(x))) for x in n], dtype=np.int64)
    table = np.asarray(a, dtype=np.int64)
    return lambda n: table[np.mod(n, len(table))]


# ---------------------------------------------------------------------------
# Square tilings and disconnected tilings


def gen_square_tiling(a, orientation: str = "columns", window: Box | None = None):
    """A_a = {(2n, 2m + a(n))} (columns) or A^a = {(2n + a(m), 2m)} (rows).

    ``a`` is one period as a 0/1 sequence (giving a PeriodicSet), or any
    callable when a window is requested.
    """
    if orientation not in ("columns", "rows"):
        raise ValueError("orientation must be 'columns' or 'rows'")
    g = GroupSpec(2)
    if window is None:
        period = list(a)
        P = len(period)
        if orientation == "columns":
            return PeriodicSet.from_points(g, Lattice.diagonal(2 * P, 2), [(2 * n, period[n]) for n in range(P)])
        return PeriodicSet.from_points(g, Lattice.diagonal(2, 2 * P), [(period[m], 2 * m) for m in range(P)])
    fn = _as_fn(a)

    def member(pts):
        x, y = pts[:, 0], pts[:, 1]
        if orientation == "rows":
            x, y = y, x
        even = x % 2 == 0
        return even & ((y - fn(np.floor_divide(x, 2))) % 2 == 0)

    return WindowSet.from_predicate(window, member)


def gen_disconnected_tiling(a, b, window: Box | None = None):
    """{(4n, 2m + a(n))} union {(4n + 1 + 2 b(m), 2m)}, a tiling set for {0,2} x {0,1}."""
    g = GroupSpec(2)
    if window is None:
        pa, pb = list(a), list(b)
        lat = Lattice.diagonal(4 * len(pa), 2 * len(pb))
        pts = [(4 * n, 2 * m + pa[n]) for n in range(len(pa)) for m in range(len(pb))]
        pts += [(4 * n + 1 + 2 * pb[m], 2 * m) for n in range(len(pa)) for m in range(len(pb))]
        return PeriodicSet.from_points(g, lat, pts)
    fa, fb = _as_fn(a), _as_fn(b)

    def member(pts):
        x, y = pts[:, 0], pts[:, 1]
        first = (x % 4 == 0) & ((y - fa(np.floor_divide(x, 4))) % 2 == 0)
        ym = np.floor_divide(y, 2)
        second = (y % 2 == 0) & ((x - 1 - 2 * fb(ym)) % 4 == 0)
        return first | second

    return WindowSet.from_predicate(window, member)


# ---------------------------------------------------------------------------
# A_alpha


EXAMPLE6_TILE = Tile.of([(0, 0), (0, 2), (1, 0), (1, 2), (2, -2), (2, 0), (3, -2), (3, 0)])


def example6_system() -> TileSystem:
    return TileSystem.single(EXAMPLE6_TILE, 4)


def _alpha_member(p: int, q: int) -> Callable[[np.ndarray], np.ndarray]:
    def member(pts):
        n, m = pts[:, 0], pts[:, 1]
        s = (p * n) % q + (p * m) % q - (p * (n + m)) % q  # q * ({an} + {am} - {a(n+m)})
        val = 2 * s - q  # sign of ({an} + {am} - {a(n+m)} - 1/2)
        if (val == 0).any():
            raise TieError("A_alpha predicate is exactly zero")
        sign = np.where((np.floor_divide(m, 2) + n) % 2 == 0, 1, -1)
        return sign * val > 0

    return member


def gen_A_alpha(alpha, window: Box | None = None):
    """A_alpha = {(n, m) : (-1)^(floor(m/2) + n) ({alpha n} + {alpha m} - {alpha(n+m)} - 1/2) > 0}.

    Rational alpha gives a PeriodicSet (or its window view). Any other real
    is replaced by a continued-fraction convergent fine enough for the window,
    see ``convergent_for_window``; a window is then required.
    """
    if isinstance(alpha, numbers.Rational):
        a = Fraction(alpha)
        p, q = a.numerator % a.denominator, a.denominator
        member = _alpha_member(p, q)
        if window is not None:
            return WindowSet.from_predicate(window, member)
        lat = Lattice.diagonal(math.lcm(q, 2), math.lcm(q, 4))
        reps = box_points(((0, lat.diag[0] - 1), (0, lat.diag[1] - 1)))
        return PeriodicSet.from_points(GroupSpec(2), lat, reps[member(reps)])
    if window is None:
        raise ValueError("irrational alpha needs a window")
    return gen_A_alpha(convergent_for_window(alpha, window), window)


def continued_fraction(x, max_terms: int = 64) -> list[int]:
    """Partial quotients of x, treated as the exact rational value of its float or Fraction."""
    fr = Fraction(x)
    out = []
    while len(out) < max_terms:
        a = math.floor(fr)
        out.append(a)
        fr -= a
        if fr == 0:
            break
        fr = 1 / fr
    return out


def sqrt_continued_fraction(n: int, max_terms: int = 64) -> list[int]:
    """Exact partial quotients of sqrt(n) for a non-square n."""
    a0 = math.isqrt(n)
    if a0 * a0 == n:
        return [a0]
    out, m, d, a = [a0], 0, 1, a0
    while len(out) < max_terms:
        m = d * a - m
        d = (n - m * m) // d
        a = (a0 + m) // d
        out.append(a)
    return out


def convergents(terms: Sequence[int]) -> Iterator[Fraction]:
    h0, h1, k0, k1 = 1, terms[0], 0, 1
    yield Fraction(h1, k1)
    for a in terms[1:]:
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        yield Fraction(h1, k1)


def _window_radius(window: Box) -> int:
    return max(max(abs(lo), abs(hi)) for lo, hi in window)


def convergent_for_window(alpha, window: Box, skip: int = 0) -> Fraction:
    """First convergent of alpha whose denominator exceeds (4R + 1)^2 for the window radius R.

    ``skip`` moves that many convergents further along, for stability checks.
    """
    R = _window_radius(window)
    bound = (4 * R + 1) ** 2
    terms = alpha if isinstance(alpha, list) else continued_fraction(alpha)
    cs = list(convergents(terms))
    for i, c in enumerate(cs):
        if c.denominator > bound:
            if i + skip >= len(cs):
                raise RangeError("not enough continued-fraction terms for this window")
            return cs[i + skip]
    raise RangeError("not enough continued-fraction terms for this window")


# ---------------------------------------------------------------------------
# Window verification


@dataclass(frozen=True)
class WindowVerdict:
    status: str  # "ok", "violation" or "inconclusive"
    point: tuple[int, ...] | None = None
    count: int | None = None
    checked: int = 0

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "point": None if self.point is None else list(self.point),
            "count": self.count,
            "checked": self.checked,
        }


def window_verify(system: TileSystem | Tile, W: WindowSet | Sequence[WindowSet]) -> WindowVerdict:
    """Check coverage counts at every point whose covering translates all lie in the window."""
    system = as_system(system)
    windows = [W] if isinstance(W, WindowSet) else list(W)
    if len(windows) != len(system.tiles):
        raise ValueError(f"{len(windows)} windows for {len(system.tiles)} tiles")
    box = windows[0].box
    pts = box_points(box)
    determinable = np.ones(len(pts), dtype=bool)
    counts = np.zeros(len(pts), dtype=np.int64)
    for tile, win in zip(system.tiles, windows):
        for f in tile.points:
            src = pts - np.asarray(f, dtype=np.int64)
            ok = win.inside(src)
            determinable &= ok
            counts[ok] += win.contains_many(src[ok])
    checked = int(determinable.sum())
    if checked == 0:
        return WindowVerdict("inconclusive", tuple(int(x) for x in pts[0]))
    bad = np.flatnonzero(determinable & (counts != system.level))
    if len(bad):
        i = int(bad[0])
        return WindowVerdict("violation", tuple(int(x) for x in pts[i]), int(counts[i]), checked)
    return WindowVerdict("ok", checked=checked)
