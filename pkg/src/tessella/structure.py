"""Checks of the structural facts about tilings: dilation, density, weak periodicity."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import reduce
from typing import Mapping, Sequence

import numpy as np
from scipy.optimize import linprog

from .abelian import Lattice, QuotientGroup
from .cover import CoverProblem
from .errors import PreconditionError, ShapeError, UnsupportedError
from .solver import CheckResult, PeriodicSet, check_tiling
from .tiles import Tile, default_dilation_modulus, dilate, direction_set, direction_order, slices


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str | None = None
    point: tuple[int, ...] | None = None
    q: int | None = None

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        out = {"ok": self.ok, "reason": self.reason, "point": None if self.point is None else list(self.point)}
        if self.q is not None:
            out["q"] = self.q
        return out


# ---------------------------------------------------------------------------
# Dilation


@dataclass(frozen=True)
class DilationReport:
    q: int
    tested_r: tuple[int, ...]
    results: tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "tested_r": list(self.tested_r),
            "ok": [r.ok for r in self.results],
        }


def default_rs(q: int) -> tuple[int, ...]:
    return (1 + q, 1 + 2 * q, 1 - q, 1 + 5 * q)


def dilation_check(tile: Tile, A: PeriodicSet, q: int | None = None, rs: Sequence[int] | None = None) -> DilationReport:
    """Check that A still tiles with rF for each r = 1 mod q."""
    q = default_dilation_modulus(tile) if q is None else q
    rs = tuple(default_rs(q) if rs is None else rs)
    if q < 1:
        raise PreconditionError("q must be positive")
    if not check_tiling(tile, A).ok:
        raise PreconditionError("A does not tile with F at level 1")
    exp = tile.group.exponent
    for r in rs:
        if r % q != 1 % q:
            raise PreconditionError(f"r={r} is not 1 mod {q}")
        if math.gcd(r, exp) != 1:
            raise PreconditionError(f"r={r} is not coprime to the torsion exponent {exp}")
    return DilationReport(q, rs, tuple(check_tiling(dilate(tile, r), A) for r in rs))


# ---------------------------------------------------------------------------
# Periods and density


def min_period(A: PeriodicSet) -> Lattice:
    """The full lattice of periods of A (it always contains A's declared lattice)."""
    g = A.group
    if g.rank == 0:
        return A.lattice
    q = A.quotient
    if not A.residues:
        return Lattice.identity(g.rank)
    mask = np.zeros(q.size, dtype=bool)
    mask[list(A.residues)] = True
    r0 = q.section_one(min(A.residues))
    periods = [list(c) for c in A.lattice.columns]
    seen = set()
    for r in sorted(A.residues):
        t = q.section_one(r)
        shift = tuple(a - b for a, b in zip(t[: g.rank], r0[: g.rank])) + (0,) * len(g.torsion)
        key = A.lattice.reduce(shift[: g.rank])
        if key in seen:
            continue
        seen.add(key)
        if np.array_equal(mask[q.shift_table(shift)], mask):
            periods.append(list(key))
    return Lattice.from_generators(periods, g.rank)


@dataclass(frozen=True)
class DensityEstimate:
    windows: tuple[Fraction, ...]
    exact: Fraction | None = None

    def to_json(self) -> dict:
        return {"windows": [str(x) for x in self.windows], "exact": None if self.exact is None else str(self.exact)}


def _box(N: int, d: int, torsion: Sequence[int]) -> np.ndarray:
    dims = (2 * N + 1,) * d + tuple(torsion)
    pts = np.stack(np.unravel_index(np.arange(math.prod(dims)), dims), axis=1).astype(np.int64)
    pts[:, :d] -= N
    return pts


def density_estimate(A, Ns: Sequence[int]) -> DensityEstimate:
    """|A cap box_N| / |box_N| for the boxes [-N, N]^d x G_0.

    ``A`` is a PeriodicSet, anything with ``contains_many`` and ``group``, or
    a pair ``(d, predicate)`` where the predicate maps an (m, d) array to booleans.
    """
    if hasattr(A, "contains_many"):
        d, torsion, member = A.group.rank, A.group.torsion, A.contains_many
    else:
        d, member = A
        torsion = ()
    out = []
    for N in Ns:
        pts = _box(N, d, torsion)
        out.append(Fraction(int(np.count_nonzero(member(pts))), len(pts)))
    exact = A.density if isinstance(A, PeriodicSet) else None
    return DensityEstimate(tuple(out), exact)


# ---------------------------------------------------------------------------
# Weak periodicity in rank two


@dataclass(frozen=True)
class WeakDecomposition:
    q: int
    parts: Mapping[tuple[int, int], PeriodicSet]
    leftover: frozenset[int] = field(default_factory=frozenset)

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "parts": [{"v": list(v), "set": A.to_json()} for v, A in self.parts.items()],
            "leftover": sorted(self.leftover),
        }

    @classmethod
    def from_json(cls, obj) -> WeakDecomposition:
        parts = {tuple(p["v"]): PeriodicSet.from_json(p["set"]) for p in obj["parts"]}
        return cls(int(obj["q"]), parts, frozenset(obj.get("leftover", ())))


def _directions(tile: Tile) -> list[tuple[int, ...]]:
    if tile.group.rank != 2:
        raise UnsupportedError("weak periodicity is checked in rank 2 only")
    dirs = direction_set(tile)
    # a singleton tile has no directions; its tilings are periodic in every direction
    return dirs or [(1, 0)]


def _cycles(q: QuotientGroup, vector) -> np.ndarray:
    """Label each class of q by the cycle of translation by ``vector`` containing it."""
    perm = q.shift_table(vector)
    label = np.full(q.size, -1, dtype=np.int64)
    nxt = 0
    for i in range(q.size):
        if label[i] < 0:
            j = i
            while label[j] < 0:
                label[j] = nxt
                j = perm[j]
            nxt += 1
    return label


def _shift(tile: Tile, v, q: int) -> tuple[int, ...]:
    return tuple(q * x for x in v) + (0,) * len(tile.group.torsion)


def weak_periodic_decompose(tile: Tile, A: PeriodicSet, q: int | None = None) -> WeakDecomposition | None:
    """Split A into parts A_v, each invariant under q v, for v in the direction set of F.

    Works on the torus G / lattice(A): a part is a union of whole cycles of
    translation by q v inside A. A greedy pass over directions in canonical
    order is tried first, then an exact cover over (direction, cycle) rows.
    """
    q = default_dilation_modulus(tile) if q is None else q
    dirs = _directions(tile)
    Q = A.quotient
    in_a = np.zeros(Q.size, dtype=bool)
    in_a[list(A.residues)] = True
    cycles = []  # (direction index, member classes)
    for k, v in enumerate(dirs):
        label = _cycles(Q, _shift(tile, v, q))
        for c in np.unique(label):
            members = np.flatnonzero(label == c)
            if in_a[members].all():
                cycles.append((k, members))

    # greedy pass
    taken = np.zeros(Q.size, dtype=bool)
    chosen = []
    for k, members in cycles:
        if not taken[members].any():
            taken[members] = True
            chosen.append((k, members))
    if not np.array_equal(taken, in_a):
        residues = sorted(A.residues)
        pos = {r: i for i, r in enumerate(residues)}
        rows = [[pos[int(m)] for m in members] for _, members in cycles]
        sol = CoverProblem(len(residues), rows).solve() if rows else None
        if sol is None:
            return None
        chosen = [cycles[int(i)] for i in sol]

    parts: dict = {}
    for k, members in chosen:
        parts.setdefault(dirs[k], set()).update(int(m) for m in members)
    return WeakDecomposition(
        q,
        {v: PeriodicSet(A.group, A.lattice, frozenset(parts[v])) for v in sorted(parts, key=direction_order)},
    )


def decompose_with_retries(tile: Tile, A: PeriodicSet, q: int | None = None) -> WeakDecomposition | None:
    q = default_dilation_modulus(tile) if q is None else q
    for qq in (q, 2 * q, 4 * q):
        dec = weak_periodic_decompose(tile, A, qq)
        if dec is not None:
            return dec
    return None


@dataclass(frozen=True)
class DecompositionReport:
    ok: bool
    reason: str | None = None
    periods: Mapping[tuple[int, int], tuple[Lattice, ...]] = field(default_factory=dict)

    def __bool__(self):
        return self.ok

    @property
    def N(self) -> int | None:
        """Smallest n with n Z^2 inside every detected period lattice."""
        if not self.ok:
            return None
        return math.lcm(1, *(lattice_exponent(L) for ls in self.periods.values() for L in ls))

    @property
    def N_lattice(self) -> Lattice | None:
        return None if self.N is None else Lattice.scaled(2, self.N)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "reason": self.reason,
            "N": self.N,
            "periods": [{"v": list(v), "lattices": [L.to_json() for L in ls]} for v, ls in self.periods.items()],
        }


def lattice_exponent(L: Lattice) -> int:
    """Exponent of Z^d / L: the least n with n Z^d contained in L."""
    out = 1
    for i in range(L.d):
        e = [int(i == j) for j in range(L.d)]
        k = next(k for k in range(1, L.index + 1) if L.contains([k * x for x in e]))
        out = math.lcm(out, k)
    return out


def _line_classes(tile: Tile, v) -> list[list[tuple[int, ...]]]:
    vbar = (-v[1], v[0])
    classes: dict = {}
    for p in tile.points:
        classes.setdefault((p[0] * vbar[0] + p[1] * vbar[1],) + p[2:], []).append(p)
    return [classes[k] for k in sorted(classes)]


def verify_decomposition(
    tile: Tile, A: PeriodicSet, parts: Mapping[tuple[int, int], PeriodicSet], q: int
) -> DecompositionReport:
    """Check a decomposition A = disjoint union of q v-invariant parts A_v.

    For each part and each line class x + <v>, the sum (F cap (x + <v>)) + A_v
    must be direct; its full period lattice is recorded in ``periods``.
    """
    if not isinstance(parts, Mapping) or not parts:
        raise ShapeError("parts must be a nonempty mapping from directions to periodic sets")
    for v, P in parts.items():
        if len(v) != 2 or not isinstance(P, PeriodicSet) or P.group != A.group:
            raise ShapeError(f"malformed part for direction {v}")
    lat = reduce(Lattice.intersection, [A.lattice] + [P.lattice for P in parts.values()])
    Q = QuotientGroup(A.group, lat)
    total = np.zeros(Q.size, dtype=np.int64)
    for P in parts.values():
        total += P.indicator(Q)
    if (total > 1).any():
        return DecompositionReport(False, "parts are not disjoint")
    if not np.array_equal(total.astype(bool), A.indicator(Q)):
        return DecompositionReport(False, "parts do not union to A")
    periods = {}
    for v, P in parts.items():
        ind = P.indicator(Q)
        if not np.array_equal(ind[Q.shift_table(_shift(tile, v, q))], ind):
            return DecompositionReport(False, f"part {v} is not invariant under {q}*{v}")
        found = []
        for cls in _line_classes(tile, v):
            counts = np.zeros(Q.size, dtype=np.int64)
            for f in cls:
                counts += ind[Q.shift_table(tuple(-x for x in f))]
            if (counts > 1).any():
                return DecompositionReport(False, f"line sum along {v} is not direct")
            S = PeriodicSet(A.group, lat, frozenset(np.flatnonzero(counts).tolist()))
            found.append(min_period(S))
        periods[v] = tuple(found)
    return DecompositionReport(True, periods=periods)


# ---------------------------------------------------------------------------
# Slice decomposition consequence


def slice_convolutions(tile: Tile, A: PeriodicSet) -> tuple[QuotientGroup, dict]:
    """c_f = 1_{F_f} * 1_A on the torus of A, for each f in the support S_F."""
    Q = A.quotient
    ind = A.indicator(Q).astype(np.int64)
    out = {}
    for x, tors in slices(tile).slices.items():
        c = np.zeros(Q.size, dtype=np.int64)
        for t in tors:
            c += ind[Q.shift_table(tuple(-a for a in x + t))]
        out[x] = c
    return Q, out


def decomposition_feasible(
    Q: QuotientGroup, convs: Mapping, directions: Sequence[Sequence[int]], q: int
) -> Verdict:
    """Is every 1 - c_f a sum over v of q v-invariant functions with values in [0, 1]?

    Also requires the c_f to sum to 1 and take values in [0, 1]. Feasibility
    of the linear system is decided by an LP with a zero objective.
    """
    total = sum(convs.values())
    bad = np.flatnonzero(total != 1)
    if len(bad):
        return Verdict(False, "slice convolutions do not sum to 1", Q.section_one(int(bad[0])))
    ntor = len(Q.group.torsion)
    labels = [_cycles(Q, tuple(q * x for x in v) + (0,) * ntor) for v in directions]
    for f, c in convs.items():
        bad = np.flatnonzero((c < 0) | (c > 1))
        if len(bad):
            return Verdict(False, f"c_{f} leaves [0, 1]", Q.section_one(int(bad[0])))
        rhs = 1 - c
        if not rhs.any():
            continue
        offsets = np.cumsum([0] + [int(lab.max()) + 1 for lab in labels])
        n_var = int(offsets[-1])
        A_eq = np.zeros((Q.size, n_var))
        for k, lab in enumerate(labels):
            A_eq[np.arange(Q.size), offsets[k] + lab] = 1.0
        res = linprog(np.zeros(n_var), A_eq=A_eq, b_eq=rhs.astype(float), bounds=(0, 1), method="highs")
        if res.status != 0:
            return Verdict(False, f"1 - c_{f} has no invariant split over the directions")
    return Verdict(True)


def structure_consequence_check(tile: Tile, A: PeriodicSet, q: int | None = None) -> Verdict:
    """Slice-decomposition feasibility at a fixed q, or at the least working multiple of the default.

    Without ``q`` the multiples m q0 (q0 = exponent(G_0) |F|) are tried for
    m = 1, 2, ... up to the exponent of A's lattice, where every component is
    trivially invariant. The returned verdict records the q used.
    """
    if not check_tiling(tile, A).ok:
        raise PreconditionError("A does not tile with F at level 1")
    dirs = _directions(tile)
    Q, convs = slice_convolutions(tile, A)
    if q is not None:
        return replace(decomposition_feasible(Q, convs, dirs, q), q=q)
    q0 = default_dilation_modulus(tile)
    for m in range(1, lattice_exponent(A.lattice) + 1):
        v = decomposition_feasible(Q, convs, dirs, m * q0)
        if v.ok or v.reason is None or "invariant split" not in v.reason:
            return replace(v, q=m * q0)
    return replace(v, q=m * q0)
