"""Finitely generated abelian groups Z^d x G_0, sublattices of Z^d and finite quotients.

Points of a group are handled in two forms: ``GroupElement`` for the public
arithmetic API, and flat integer tuples ``(free..., tor...)`` everywhere
performance matters (tiles, quotients, the cover kernel).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterator, Sequence

import numpy as np

from . import _kernels
from .errors import DimensionError, RankError


@dataclass(frozen=True)
class GroupSpec:
    """The group Z^rank x Z/n_1 x ... x Z/n_k."""

    rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(n) for n in self.torsion))
        if self.rank < 0:
            raise DimensionError("rank must be non-negative")
        if self.rank + len(self.torsion) < 1:
            raise DimensionError("group needs at least one factor")
        if any(n < 2 for n in self.torsion):
            raise DimensionError(f"torsion moduli must be >= 2, got {self.torsion}")

    @property
    def width(self) -> int:
        return self.rank + len(self.torsion)

    @property
    def torsion_order(self) -> int:
        return math.prod(self.torsion)

    @property
    def exponent(self) -> int:
        """Exponent of G_0 (1 when G_0 is trivial)."""
        return math.lcm(*self.torsion) if self.torsion else 1

    def canonical(self, point: Sequence[int]) -> tuple[int, ...]:
        if len(point) != self.width:
            raise DimensionError(f"point {tuple(point)} does not have {self.width} coordinates")
        d = self.rank
        return tuple(int(x) for x in point[:d]) + tuple(
            int(x) % n for x, n in zip(point[d:], self.torsion)
        )

    def element(self, free=(), tor=()) -> GroupElement:
        return GroupElement(self, tuple(free), tuple(tor))

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.width

    def add(self, a, b) -> tuple[int, ...]:
        return self.canonical([x + y for x, y in zip(a, b)])

    def neg(self, a) -> tuple[int, ...]:
        return self.canonical([-x for x in a])

    def to_json(self) -> dict:
        return {"d": self.rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, obj) -> GroupSpec:
        return cls(int(obj["d"]), tuple(obj.get("torsion", ())))


def Z(d: int = 1, *torsion: int) -> GroupSpec:
    """Shorthand: ``Z(2, 3)`` is Z^2 x Z/3."""
    return GroupSpec(d, tuple(torsion))


@dataclass(frozen=True)
class GroupElement:
    group: GroupSpec
    free: tuple[int, ...]
    tor: tuple[int, ...] = ()

    def __post_init__(self):
        g = self.group
        if len(self.free) != g.rank or len(self.tor) != len(g.torsion):
            raise DimensionError(
                f"element ({self.free}, {self.tor}) does not fit group {g}"
            )
        object.__setattr__(self, "free", tuple(int(x) for x in self.free))
        object.__setattr__(
            self, "tor", tuple(int(x) % n for x, n in zip(self.tor, g.torsion))
        )

    @classmethod
    def from_flat(cls, group: GroupSpec, point) -> GroupElement:
        d = group.rank
        return cls(group, tuple(point[:d]), tuple(point[d:]))

    def flat(self) -> tuple[int, ...]:
        return self.free + self.tor

    def _check(self, other: GroupElement):
        if not isinstance(other, GroupElement) or other.group != self.group:
            raise DimensionError("operands belong to different groups")

    def __add__(self, other: GroupElement) -> GroupElement:
        self._check(other)
        return GroupElement(
            self.group,
            tuple(a + b for a, b in zip(self.free, other.free)),
            tuple(a + b for a, b in zip(self.tor, other.tor)),
        )

    def __neg__(self) -> GroupElement:
        return GroupElement(self.group, tuple(-a for a in self.free), tuple(-a for a in self.tor))

    def __sub__(self, other: GroupElement) -> GroupElement:
        return self + (-other)

    def scale(self, r: int) -> GroupElement:
        return GroupElement(self.group, tuple(r * a for a in self.free), tuple(r * a for a in self.tor))


def elem_op(kind: str, a: GroupElement, b: GroupElement | None = None, r: int | None = None) -> GroupElement:
    """Group arithmetic by name: ``add``, ``neg`` or ``scale``."""
    if kind == "add":
        if b is None:
            raise DimensionError("add takes two operands")
        return a + b
    if kind == "neg":
        return -a
    if kind == "scale":
        if r is None:
            raise DimensionError("scale needs a factor r")
        return a.scale(r)
    raise ValueError(f"unknown operation {kind!r}")


# ---------------------------------------------------------------------------
# Hermite normal form and lattices


def hermite_normal_form(generators: Sequence[Sequence[int]], d: int) -> tuple[tuple[int, ...], ...]:
    """Lower-triangular HNF of the lattice spanned by ``generators`` (vectors in Z^d).

    Returns the d x d matrix (row-major) whose columns form the canonical basis:
    column j is zero above row j, has a positive diagonal entry, and every
    entry left of a diagonal entry is reduced into ``[0, diagonal)``.
    Raises RankError if the generators do not span a full-rank lattice.
    """
    vecs = [list(map(int, v)) for v in generators if any(v)]
    for v in vecs:
        if len(v) != d:
            raise DimensionError(f"generator {v} is not in Z^{d}")
    basis = []
    for j in range(d):
        pivot = None
        rest = []
        for v in vecs:
            if v[j] == 0:
                rest.append(v)
            elif pivot is None:
                pivot = v
            else:
                # Euclid on coordinate j between pivot and v
                while v[j] != 0:
                    k = pivot[j] // v[j]
                    pivot = [x - k * y for x, y in zip(pivot, v)]
                    pivot, v = v, pivot
                if any(v):
                    rest.append(v)
        if pivot is None:
            raise RankError("generators do not span a finite-index lattice")
        if pivot[j] < 0:
            pivot = [-x for x in pivot]
        basis.append(pivot)
        vecs = [v for v in rest if any(v)]
    for j in range(d):
        for i in range(j + 1, d):
            k = basis[j][i] // basis[i][i]
            if k:
                basis[j] = [x - k * y for x, y in zip(basis[j], basis[i])]
    return tuple(tuple(basis[j][i] for j in range(d)) for i in range(d))


def _fraction_inverse(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    a = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def _dual_generators(matrix) -> list[list[Fraction]]:
    """Columns of the dual basis (M^{-T}) of a full-rank lattice basis M."""
    n = len(matrix)
    inv = _fraction_inverse([[Fraction(x) for x in row] for row in matrix])
    # columns of inv^T are the rows of inv
    return [inv[j] for j in range(n)]


@dataclass(frozen=True)
class Lattice:
    """A finite-index sublattice of Z^d, stored in Hermite normal form.

    ``basis`` is a row-major d x d matrix whose columns generate the lattice.
    Any generating matrix may be passed; it is canonicalized on construction,
    so equality is structural.
    """

    basis: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = [list(r) for r in self.basis]
        d = len(rows)
        if any(len(r) != d for r in rows):
            raise DimensionError("lattice basis must be square")
        cols = [[rows[i][j] for i in range(d)] for j in range(d)]
        object.__setattr__(self, "basis", hermite_normal_form(cols, d) if d else ())

    @classmethod
    def from_generators(cls, generators, d: int) -> Lattice:
        hnf = hermite_normal_form(generators, d)
        return cls(hnf)

    @classmethod
    def diagonal(cls, *entries: int) -> Lattice:
        d = len(entries)
        return cls(tuple(tuple(entries[i] if i == j else 0 for j in range(d)) for i in range(d)))

    @classmethod
    def identity(cls, d: int) -> Lattice:
        return cls.diagonal(*([1] * d))

    @classmethod
    def scaled(cls, d: int, k: int) -> Lattice:
        return cls.diagonal(*([k] * d))

    @property
    def d(self) -> int:
        return len(self.basis)

    @cached_property
    def diag(self) -> tuple[int, ...]:
        return tuple(self.basis[i][i] for i in range(self.d))

    @cached_property
    def index(self) -> int:
        return math.prod(self.diag)

    @cached_property
    def columns(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(self.basis[i][j] for i in range(self.d)) for j in range(self.d))

    def reduce(self, v: Sequence[int]) -> tuple[int, ...]:
        """Canonical representative of v + Lattice inside the box prod [0, diag_i)."""
        x = list(v)
        for j, col in enumerate(self.columns):
            k = x[j] // col[j]
            if k:
                x = [a - k * b for a, b in zip(x, col)]
        return tuple(x)

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def is_sublattice_of(self, other: Lattice) -> bool:
        return all(other.contains(c) for c in self.columns)

    def __add__(self, other: Lattice) -> Lattice:
        return Lattice.from_generators(self.columns + other.columns, self.d)

    def intersection(self, other: Lattice) -> Lattice:
        """Common refinement, computed as the dual of the sum of the duals."""
        if self.d != other.d:
            raise DimensionError("lattices of different dimension")
        if self.d == 0:
            return self
        if self.is_sublattice_of(other):
            return self
        if other.is_sublattice_of(self):
            return other
        gens = _dual_generators(self.basis) + _dual_generators(other.basis)
        den = math.lcm(*(x.denominator for g in gens for x in g))
        sum_hnf = hermite_normal_form([[int(x * den) for x in g] for g in gens], self.d)
        # lattice spanned by sum_hnf/den; its dual is den * sum_hnf^{-T}
        dual = _dual_generators(sum_hnf)
        return Lattice.from_generators([[int(x * den) for x in g] for g in dual], self.d)

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.basis]

    @classmethod
    def from_json(cls, rows) -> Lattice:
        return cls(tuple(tuple(int(x) for x in r) for r in rows))

    def __repr__(self):
        return f"Lattice({[list(r) for r in self.basis]})"


def lattices_of_index(d: int, n: int) -> list[Lattice]:
    """All HNF lattices of Z^d with the given index, in lexicographic order."""
    out = []

    def diagonals(k, remaining):
        if k == 1:
            yield (remaining,)
            return
        for a in range(1, remaining + 1):
            if remaining % a == 0:
                for rest in diagonals(k - 1, remaining // a):
                    yield (a,) + rest

    for diag in diagonals(d, n):
        slots = [(i, j) for i in range(d) for j in range(i)]
        ranges = [range(diag[i]) for i, _ in slots]
        for vals in itertools.product(*ranges):
            m = [[0] * d for _ in range(d)]
            for i in range(d):
                m[i][i] = diag[i]
            for (i, j), v in zip(slots, vals):
                m[i][j] = v
            out.append(tuple(tuple(r) for r in m))
    out.sort(key=lambda m: tuple(x for r in m for x in r))
    lattices = []
    for m in out:
        lat = object.__new__(Lattice)
        object.__setattr__(lat, "basis", m)  # already canonical
        lattices.append(lat)
    return lattices


def enumerate_lattices(d: int, max_index: int) -> Iterator[Lattice]:
    """Every finite-index sublattice of Z^d with index <= max_index, by index then HNF order."""
    if d < 1 or max_index < 1:
        raise DimensionError("need d >= 1 and max_index >= 1")
    for n in range(1, max_index + 1):
        yield from lattices_of_index(d, n)


@dataclass(frozen=True)
class SubgroupLine:
    """The rank-one subgroup <q v> of Z^d with v primitive."""

    v: tuple[int, ...]
    q: int = 1

    def __post_init__(self):
        object.__setattr__(self, "v", tuple(int(x) for x in self.v))
        if not any(self.v) or math.gcd(*self.v) != 1:
            raise DimensionError(f"{self.v} is not a primitive vector")
        if self.q < 1:
            raise DimensionError("q must be positive")

    @property
    def generator(self) -> tuple[int, ...]:
        return tuple(self.q * x for x in self.v)


def primitive_direction(v: Sequence[int]) -> tuple[int, ...]:
    """Primitive vector along v, signed so the first nonzero coordinate is positive."""
    g = math.gcd(*v)
    if g == 0:
        raise DimensionError("zero vector has no direction")
    w = [x // g for x in v]
    first = next(x for x in w if x)
    if first < 0:
        w = [-x for x in w]
    return tuple(w)


# ---------------------------------------------------------------------------
# Finite quotients G / (Lattice x {0})


class QuotientGroup:
    """The finite group G / (Lattice x {0}) with dense element indices 0..size-1.

    Representatives have free part in the box prod [0, diag_i) and canonical
    torsion part; indices are the row-major ravel of those coordinates.
    """

    def __init__(self, group: GroupSpec, lattice: Lattice):
        if lattice.d != group.rank:
            raise RankError(f"lattice of rank {lattice.d} for group of rank {group.rank}")
        self.group = group
        self.lattice = lattice
        self.dims = lattice.diag + group.torsion
        self.size = math.prod(self.dims)
        self._cols = np.array(lattice.columns, dtype=np.int64).reshape(group.rank, group.rank)
        self._mods = np.array(group.torsion, dtype=np.int64)
        self._dims = np.array(self.dims, dtype=np.int64)

    def __repr__(self):
        return f"QuotientGroup({self.group}, {self.lattice}, size={self.size})"

    def reduce(self, points) -> np.ndarray:
        x = np.array(points, dtype=np.int64, copy=True).reshape(-1, self.group.width)
        d = self.group.rank
        for j in range(d):
            col = self._cols[j]
            k = np.floor_divide(x[:, j], col[j])
            x[:, :d] -= k[:, None] * col[None, :]
        if len(self._mods):
            x[:, d:] %= self._mods
        return x

    def project(self, points) -> np.ndarray:
        """Indices of the classes of the given flat points (array of shape (m, width))."""
        x = np.ascontiguousarray(points, dtype=np.int64).reshape(-1, self.group.width)
        return _kernels.project(x, self._cols, self._mods, self._dims)

    def project_one(self, point) -> int:
        return int(self.project([point])[0])

    def section(self, indices) -> np.ndarray:
        idx = np.asarray(indices, dtype=np.int64).reshape(-1)
        if not self.dims:
            return np.zeros((len(idx), 0), dtype=np.int64)
        return np.stack(np.unravel_index(idx, self.dims), axis=1).astype(np.int64)

    def section_one(self, index: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.section([index])[0])

    @cached_property
    def representatives(self) -> np.ndarray:
        reps = self.section(np.arange(self.size))
        reps.setflags(write=False)
        return reps

    def shift_table(self, vector) -> np.ndarray:
        """Permutation i -> index of (section(i) + vector)."""
        return self.project(self.representatives + np.asarray(vector, dtype=np.int64)[None, :])

    def add(self, i: int, j: int) -> int:
        return self.project_one(tuple(a + b for a, b in zip(self.section_one(i), self.section_one(j))))

    def neg(self, i: int) -> int:
        return self.project_one(tuple(-a for a in self.section_one(i)))

    def free_representatives(self) -> np.ndarray:
        """Representatives of Z^d / Lattice (free part only)."""
        if self.group.rank == 0:
            return np.zeros((1, 0), dtype=np.int64)
        diag = self.lattice.diag
        return np.stack(np.unravel_index(np.arange(math.prod(diag)), diag), axis=1).astype(np.int64)


@lru_cache(maxsize=4096)
def quotient(group: GroupSpec, lattice: Lattice) -> QuotientGroup:
    """Shared, cached quotient; treat the result as read-only."""
    return QuotientGroup(group, lattice)

