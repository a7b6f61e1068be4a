"""Exact cover with multiplicities.

Cells ``0..n_primary-1`` must each be covered exactly ``level`` times; cells
``n_primary..n_cells-1`` are secondary and may be covered at most ``level``
times. A row is a list of cells (a repeated cell counts with multiplicity)
and may be chosen at most once. Rows are only ever chosen to cover primary
cells, so a row made of secondary cells alone is never part of a solution.

The search is depth-first with least-slack cell selection: the uncovered cell
whose remaining coverage capacity exceeds its deficit by the least is
branched on. Branch i at a cell includes its i-th live row after excluding
rows 0..i-1, so every solution is produced exactly once. All state changes
go on a trail and are undone on backtrack; the loops are compiled (see
``_kernels``) and run in chunks so that deadlines can be checked.
"""
from __future__ import annotations

import time
from typing import Iterator, Sequence

import numpy as np

from . import _kernels as K
from .errors import BudgetError

_CHUNK = 1 << 14  # nodes between deadline checks


def _as_array(rows) -> np.ndarray:
    """Rows as a 2D integer array, padded with -1."""
    if isinstance(rows, np.ndarray) and rows.ndim == 2:
        return np.ascontiguousarray(rows, dtype=np.int64)
    rows = [list(r) for r in rows]
    width = max((len(r) for r in rows), default=0) or 1
    out = np.full((len(rows), width), -1, dtype=np.int64)
    for i, r in enumerate(rows):
        out[i, : len(r)] = r
    return out


class CoverProblem:
    def __init__(
        self,
        n_primary: int,
        rows: Sequence[Sequence[int]],
        level: int = 1,
        n_cells: int | None = None,
        deadline: float | None = None,
        max_nodes: int | None = None,
    ):
        n_cells = n_primary if n_cells is None else n_cells
        self.n_primary = n_primary
        self.n_cells = n_cells
        self.level = level
        self.deadline = deadline
        self.max_nodes = max_nodes

        self.row_cells, self.row_mult, self.row_np = K.pack(_as_array(rows), n_cells, n_primary)
        R = len(self.row_cells) - 1
        self.n_rows = R
        self.col_rows, self.col_deg = K.columns(self.row_cells, self.row_mult, n_cells)

        self.status = np.zeros(R + 1, dtype=np.int8)
        self.status[R] = 1  # padding row, never a candidate
        self.count = np.zeros(n_cells + 1, dtype=np.int64)
        self.live = np.bincount(
            self.row_cells[:R].ravel(), weights=self.row_mult[:R].ravel(), minlength=n_cells + 1
        ).astype(np.int64)
        self.trail = np.zeros(R + 1, dtype=np.int64)
        self.meta = np.zeros(4, dtype=np.int64)
        self.frames = np.zeros((4, R + 1), dtype=np.int64)
        # rows already infeasible on their own (multiplicity above level)
        self.exclude(np.flatnonzero((self.row_mult[:R] > level).any(axis=1)))

    @property
    def nodes(self) -> int:
        return int(self.meta[K.NODES])

    # -- state changes before a search ----------------------------------------

    def exclude(self, rows) -> None:
        """Rule rows out before searching."""
        for r in np.asarray(rows, dtype=np.int64).reshape(-1):
            K.exclude(int(r), self.row_cells, self.row_mult, self.row_np, self.status, self.live, self.trail, self.meta)

    def mark(self) -> int:
        return int(self.meta[K.TRAIL])

    def rollback(self, mark: int) -> None:
        K.undo(mark, self.row_cells, self.row_mult, self.row_np, self.status, self.count, self.live, self.trail, self.meta)

    def force(self, r: int) -> bool:
        """Include row r before searching; False if it is already excluded."""
        if self.status[r] != 0:
            return self.status[r] == 1
        K.include(
            r, self.row_cells, self.row_mult, self.row_np, self.col_rows, self.col_deg,
            self.status, self.count, self.live, self.trail, self.meta, self.level,
        )
        return True

    # -- search --------------------------------------------------------------

    def chosen(self) -> np.ndarray:
        return np.flatnonzero(self.status[: self.n_rows] == 1)

    def _run(self) -> int:
        while True:
            limit = self.nodes + _CHUNK
            if self.max_nodes is not None:
                limit = min(limit, self.max_nodes + 1)
            code = K.run(
                self.n_primary, self.level, self.row_cells, self.row_mult, self.row_np, self.col_rows, self.col_deg,
                self.status, self.count, self.live, self.trail, self.meta, *self.frames, limit,
            )
            if code != K.LIMIT:
                return code
            if self.max_nodes is not None and self.nodes > self.max_nodes:
                raise BudgetError(f"search exceeded {self.max_nodes} nodes")
            if self.deadline is not None and time.monotonic() > self.deadline:
                raise BudgetError("search exceeded its time budget")

    def solutions(self) -> Iterator[np.ndarray]:
        """Yield every solution as an array of chosen row indices."""
        self.meta[K.DEPTH] = 0
        self.meta[K.RESUME] = 0
        while self._run() == K.SOLVED:
            yield self.chosen()

    def solve(self) -> np.ndarray | None:
        return next(self.solutions(), None)
