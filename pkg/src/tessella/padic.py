"""The p-adic clock f_p, the class S_p, p-adic Sudoku boards and coloring instances."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import BoundExceededError, DimensionError, RangeError


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % k for k in range(2, math.isqrt(p) + 1))


@dataclass(frozen=True)
class PadicContext:
    p: int

    def __post_init__(self):
        if self.p < 3 or not _is_prime(self.p):
            raise DimensionError(f"p must be an odd prime, got {self.p}")

    @property
    def M(self) -> int:
        return self.p * self.p

    @property
    def sigma(self) -> tuple[int, ...]:
        return tuple(range(1, self.p))


def f_p(ctx: PadicContext | int, n: int) -> int:
    """n with all factors of p removed, reduced mod p; f_p(0) = 1."""
    p = ctx.p if isinstance(ctx, PadicContext) else ctx
    if n == 0:
        return 1
    while n % p == 0:
        n //= p
    return n % p


def f_p_array(p: int, n: np.ndarray) -> np.ndarray:
    n = np.asarray(n, dtype=np.int64).copy()
    zero = n == 0
    n[zero] = 1
    while True:
        div = n % p == 0
        if not div.any():
            break
        n[div] //= p
    return n % p


# ---------------------------------------------------------------------------
# S_p cutoffs


@dataclass(frozen=True)
class SpWitness:
    """Step h, plus per level the offset alpha and the exceptional coset c.

    At level k the word, reindexed as n = c_1 + p c_2 + ... + p^k n', equals
    alpha_k + h n' (mod p) off the coset n' = c_{k+1} (mod p).
    """

    h: int | None  # None for a constant word
    levels: tuple[tuple[int, int], ...] = ()

    def to_json(self) -> dict:
        return {"h": self.h, "levels": [list(x) for x in self.levels]}


@dataclass(frozen=True)
class SpResult:
    accepted: bool
    witness: SpWitness | None = None

    def __bool__(self):
        return self.accepted

    def to_json(self) -> dict:
        return {"accepted": self.accepted, "witness": None if self.witness is None else self.witness.to_json()}


def _fits(p: int, h: int, points: list[tuple[int, int]], depth: int, cap: int):
    """Levels (alpha, c) explaining ``points`` (pairs (n', value)), or None."""
    if len(points) <= 1 or depth > cap:
        return () if len(points) <= 1 else None
    h_inv = pow(h, -1, p)
    for alpha in range(p):
        c = (-alpha * h_inv) % p  # where alpha + h n' vanishes
        inner = []
        ok = True
        for n, v in points:
            if n % p == c:
                inner.append(((n - c) // p, v))
            elif (alpha + h * n) % p != v:
                ok = False
                break
        if not ok:
            continue
        rest = _fits(p, h, inner, depth + 1, cap)
        if rest is not None:
            return ((alpha, c),) + rest
    return None


def is_sp_cutoff(ctx: PadicContext, word: Sequence[int]) -> SpResult:
    """Does word (values at n = 1..len(word)) agree with a cutoff of some element of S_p?"""
    p = ctx.p
    vals = [int(v) for v in word]
    if any(v % p == 0 or not 0 < v < p for v in vals):
        raise DimensionError("word values must lie in 1..p-1")
    if len(set(vals)) <= 1:
        return SpResult(True, SpWitness(None))
    cap = max(1, math.ceil(math.log(max(len(vals), 2), p))) + 1
    points = list(enumerate(vals, start=1))
    for h in range(1, p):
        levels = _fits(p, h, points, 0, cap)
        if levels is not None:
            return SpResult(True, SpWitness(h, levels))
    return SpResult(False)


# ---------------------------------------------------------------------------
# Sudoku boards


@dataclass(frozen=True, eq=False)
class SudokuWindow:
    """Cells S(n, m) for n = 1..M and m0 <= m <= m1; ``cells[n - 1, m - m0]``."""

    ctx: PadicContext
    rows: tuple[int, int]
    cells: np.ndarray

    def __post_init__(self):
        cells = np.asarray(self.cells, dtype=np.int64)
        m0, m1 = self.rows
        if cells.shape != (self.ctx.M, m1 - m0 + 1):
            raise DimensionError(f"cells shape {cells.shape} does not match M={self.ctx.M}, rows {self.rows}")
        if ((cells < 1) | (cells >= self.ctx.p)).any():
            raise DimensionError("cell values must lie in 1..p-1")
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "rows", (int(m0), int(m1)))

    def __eq__(self, other):
        return (
            isinstance(other, SudokuWindow)
            and self.ctx == other.ctx
            and self.rows == other.rows
            and np.array_equal(self.cells, other.cells)
        )

    def at(self, n: int, m: int) -> int:
        m0, m1 = self.rows
        if not (1 <= n <= self.ctx.M and m0 <= m <= m1):
            raise RangeError(f"cell ({n}, {m}) is outside the window")
        return int(self.cells[n - 1, m - m0])

    def with_cell(self, n: int, m: int, value: int) -> SudokuWindow:
        cells = self.cells.copy()
        cells[n - 1, m - self.rows[0]] = value
        return SudokuWindow(self.ctx, self.rows, cells)

    def to_json(self) -> dict:
        return {"p": self.ctx.p, "rows": list(self.rows), "cells": self.cells.T.tolist()}

    @classmethod
    def from_json(cls, obj) -> SudokuWindow:
        return cls(PadicContext(int(obj["p"])), tuple(obj["rows"]), np.array(obj["cells"], dtype=np.int64).T)


def standard_solution(ctx: PadicContext, rows: tuple[int, int]) -> SudokuWindow:
    """S(n, m) = f_p(m) for every column n."""
    m0, m1 = rows
    col = f_p_array(ctx.p, np.arange(m0, m1 + 1))
    return SudokuWindow(ctx, rows, np.tile(col, (ctx.M, 1)))


@dataclass(frozen=True)
class SudokuReport:
    columns: tuple[str, ...]  # "satisfied" or "unconfirmed", per column n = 1..M
    lines: Mapping[tuple[int, int], SpResult]

    @property
    def ok(self) -> bool:
        """No definite violation: every requested line is an S_p cutoff."""
        return all(r.accepted for r in self.lines.values())

    @property
    def rejected(self) -> list[tuple[int, int]]:
        return [k for k, r in self.lines.items() if not r.accepted]

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "columns": list(self.columns),
            "rejected": [list(k) for k in self.rejected],
            "lines_checked": len(self.lines),
        }


def line_word(S: SudokuWindow, a: int, b: int) -> list[int]:
    """The word n -> S(n, a n + b) for n = 1..M."""
    return [S.at(n, a * n + b) for n in range(1, S.ctx.M + 1)]


def verify_sudoku_window(ctx: PadicContext, S: SudokuWindow, slopes: Sequence[tuple[int, int]]) -> SudokuReport:
    """Column non-constancy (three-valued on a window) and the S_p rule for each line (a, b)."""
    cols = tuple("satisfied" if len(set(row.tolist())) > 1 else "unconfirmed" for row in S.cells)
    lines = {}
    for a, b in slopes:
        lines[(a, b)] = is_sp_cutoff(ctx, line_word(S, a, b))
    return SudokuReport(cols, lines)


def lines_inside(S: SudokuWindow, max_a: int) -> list[tuple[int, int]]:
    """All lines (a, b) with |a| <= max_a that stay inside the window rows."""
    m0, m1 = S.rows
    M = S.ctx.M
    out = []
    for a in range(-max_a, max_a + 1):
        lo = m0 - min(a, a * M)
        hi = m1 - max(a, a * M)
        out.extend((a, b) for b in range(lo, hi + 1))
    return out


# ---------------------------------------------------------------------------
# Failures of periodicity


def vdw_violation(ctx: PadicContext, N: int, a: int, d: int) -> int:
    """Least j in [0, p^2 N] with f_p(a + j d) != f_p(a + (N + j) d)."""
    if N < 1 or d % N != 1 % N:
        raise DimensionError("need N >= 1 and d = 1 mod N")
    p = ctx.p
    for j in range(p * p * N + 1):
        if f_p(p, a + j * d) != f_p(p, a + (N + j) * d):
            return j
    raise BoundExceededError(f"no violation with j <= {p * p * N} for N={N}, a={a}, d={d}")


def nonperiodicity_witness(ctx: PadicContext, T: int, bound: int | None = None) -> int:
    """The n nearest zero (positive side first on ties) with f_p(n) != f_p(n + T)."""
    if T < 1:
        raise DimensionError("T must be positive")
    p = ctx.p
    bound = p * p * T if bound is None else bound
    for k in range(bound + 1):
        for n in (k, -k) if k else (0,):
            if f_p(p, n) != f_p(p, n + T):
                return n
    raise BoundExceededError(f"f_{p} looks {T}-periodic on [-{bound}, {bound}]")


# ---------------------------------------------------------------------------
# Coloring instances


@dataclass(frozen=True)
class Clock2D:
    offset: tuple[int, int] = (0, 0)

    def at(self, x: tuple[int, int], N: int) -> tuple[int, int]:
        return ((x[0] + self.offset[0]) % N, (x[1] + self.offset[1]) % N)


@dataclass(frozen=True, eq=False)
class ColoringInstance:
    """Directions V with chosen orthogonals vbar, clock modulus N, colors Sigma, allowed set Omega.

    ``omega`` is either a finite set of (colors tuple, clock pair) entries or a
    predicate on those two arguments. ``name`` and ``params`` identify
    predicate-backed instances for serialization.
    """

    V: tuple[tuple[int, int], ...]
    vbar: tuple[tuple[int, int], ...]
    N: int
    sigma: tuple
    omega: frozenset | Callable
    name: str | None = None
    params: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if len(self.V) != len(self.vbar):
            raise DimensionError("V and vbar must have the same length")
        for v, w in zip(self.V, self.vbar):
            if math.gcd(*v) != 1 or math.gcd(*w) != 1:
                raise DimensionError(f"{v} and {w} must be primitive")
            if v[0] * w[0] + v[1] * w[1] != 0:
                raise DimensionError(f"{w} is not orthogonal to {v}")
        if self.N < 1:
            raise DimensionError("N must be positive")

    def allows(self, colors: tuple, clock: tuple[int, int]) -> bool:
        if callable(self.omega):
            return bool(self.omega(colors, clock))
        return (colors, clock) in self.omega

    def to_json(self) -> dict:
        out = {"V": [list(v) for v in self.V], "vbar": [list(w) for w in self.vbar], "N": self.N}
        if callable(self.omega):
            out["omega"] = {"name": self.name, "params": dict(self.params)}
        else:
            out["sigma"] = list(self.sigma)
            out["omega"] = sorted([list(c), list(k)] for c, k in self.omega)
        return out

    @classmethod
    def from_json(cls, obj) -> ColoringInstance:
        omega = obj["omega"]
        if isinstance(omega, dict):
            return _named_instance(omega["name"], omega.get("params", {}))
        return cls(
            V=tuple(tuple(v) for v in obj["V"]),
            vbar=tuple(tuple(w) for w in obj["vbar"]),
            N=int(obj["N"]),
            sigma=tuple(obj["sigma"]),
            omega=frozenset((tuple(c), tuple(k)) for c, k in omega),
        )


@dataclass(frozen=True)
class ColoringTable:
    """A coloring C_v known on the interval start .. start + len(values) - 1."""

    start: int
    values: tuple

    def __call__(self, j: int):
        i = j - self.start
        if not 0 <= i < len(self.values):
            raise RangeError(f"coloring queried at {j}, outside its table")
        return self.values[i]

    @classmethod
    def from_function(cls, fn: Callable[[int], object], lo: int, hi: int) -> ColoringTable:
        return cls(lo, tuple(fn(j) for j in range(lo, hi + 1)))

    def to_json(self) -> dict:
        return {"start": self.start, "values": list(self.values)}

    @classmethod
    def from_json(cls, obj) -> ColoringTable:
        return cls(int(obj["start"]), tuple(obj["values"]))


@dataclass(frozen=True)
class ColoringVerdict:
    ok: bool
    point: tuple[int, int] | None = None
    clock: Clock2D | None = None

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "point": None if self.point is None else list(self.point),
            "clock": None if self.clock is None else list(self.clock.offset),
        }


def _check_clock(inst: ColoringInstance, C: Sequence[ColoringTable], clock: Clock2D, box) -> tuple[int, int] | None:
    (x0, x1), (y0, y1) = box
    for a in range(x0, x1 + 1):
        for b in range(y0, y1 + 1):
            colors = tuple(c(a * w[0] + b * w[1]) for c, w in zip(C, inst.vbar))
            if not inst.allows(colors, clock.at((a, b), inst.N)):
                return (a, b)
    return None


def coloring_check(
    inst: ColoringInstance, C: Sequence[ColoringTable], clock: Clock2D | None, box
) -> ColoringVerdict:
    """Check ((C_v(x . vbar))_v, sigma(x mod N)) in Omega for all x in the box.

    With ``clock=None`` every offset in (Z/N)^2 is tried; the verdict carries
    the first that works, or the violation found under offset (0, 0).
    """
    if len(C) != len(inst.V):
        raise DimensionError(f"{len(C)} colorings for {len(inst.V)} directions")
    if clock is not None:
        bad = _check_clock(inst, C, clock, box)
        return ColoringVerdict(bad is None, bad, clock)
    first_bad = None
    for off in itertools.product(range(inst.N), repeat=2):
        ck = Clock2D(off)
        bad = _check_clock(inst, C, ck, box)
        if bad is None:
            return ColoringVerdict(True, None, ck)
        first_bad = first_bad or bad
    return ColoringVerdict(False, first_bad)


def sum_coloring_instance(M: int) -> ColoringInstance:
    """Triples (r, g, h) with h(n + m) in r(n) + g(m) + {0, 1} mod M."""
    omega = frozenset(
        ((a, b, c), (0, 0)) for a in range(M) for b in range(M) for c in ((a + b) % M, (a + b + 1) % M)
    )
    return ColoringInstance(
        V=((0, 1), (1, 0), (1, -1)),
        vbar=((1, 0), (0, 1), (1, 1)),
        N=1,
        sigma=tuple(range(M)),
        omega=omega,
    )


def floor_coloring(alpha, M: int, lo: int, hi: int) -> ColoringTable:
    """j -> floor(alpha j) mod M on [lo, hi], in exact arithmetic."""
    a = Fraction(alpha)
    return ColoringTable.from_function(lambda j: math.floor(a * j) % M, lo, hi)


def sudoku_as_coloring(ctx: PadicContext) -> ColoringInstance:
    """The Sudoku rules as a coloring instance: V = {(1, -n)}, vbar = (n, 1), N = p.

    Omega is the S_p-cutoff test on the assembled M-word; the clock is
    unconstrained and column non-constancy stays a side condition.
    """
    M = ctx.M

    def omega(colors, clock):
        return is_sp_cutoff(ctx, colors).accepted

    return ColoringInstance(
        V=tuple((1, -n) for n in range(1, M + 1)),
        vbar=tuple((n, 1) for n in range(1, M + 1)),
        N=ctx.p,
        sigma=ctx.sigma,
        omega=omega,
        name="sudoku",
        params={"p": ctx.p},
    )


def sudoku_columns(S: SudokuWindow) -> list[ColoringTable]:
    """Columns of a Sudoku window as the colorings C_{(1, -n)}."""
    return [ColoringTable(S.rows[0], tuple(int(v) for v in row)) for row in S.cells]


def _named_instance(name: str, params: Mapping) -> ColoringInstance:
    if name == "sudoku":
        return sudoku_as_coloring(PadicContext(int(params["p"])))
    raise DimensionError(f"unknown coloring instance {name!r}")
