"""Compiled inner loops: quotient projection, the periodic screen and the exact-cover search.

Everything here works on plain integer arrays so that numba can compile it;
the public wrappers live in ``cover`` and ``solver``.
"""
from __future__ import annotations

import numpy as np
from numba import njit

SOLVED = 0
EXHAUSTED = 1
LIMIT = 2

# meta slots of the search state
TRAIL, DEPTH, NODES, RESUME = 0, 1, 2, 3


@njit(cache=True)
def _index(x, cols, mods, dims, tmp):
    """Dense index of the class of point x modulo the HNF lattice (columns in ``cols``) and torsion."""
    d = cols.shape[0]
    w = x.shape[0]
    for i in range(w):
        tmp[i] = x[i]
    for j in range(d):
        k = tmp[j] // cols[j, j]
        if k != 0:
            for i in range(j, d):
                tmp[i] -= k * cols[j, i]
    for i in range(d, w):
        tmp[i] %= mods[i - d]
    idx = 0
    for i in range(w):
        idx = idx * dims[i] + tmp[i]
    return idx


@njit(cache=True)
def project(pts, cols, mods, dims):
    m, w = pts.shape
    out = np.empty(m, dtype=np.int64)
    tmp = np.empty(w, dtype=np.int64)
    for i in range(m):
        out[i] = _index(pts[i], cols, mods, dims, tmp)
    return out


@njit(cache=True)
def _section(idx, dims, out):
    for i in range(dims.shape[0] - 1, -1, -1):
        out[i] = idx % dims[i]
        idx //= dims[i]


@njit(cache=True)
def injective(tiles, tlen, cols, mods, dims, n):
    """For each tile, whether its points stay distinct modulo the lattice."""
    T = tiles.shape[0]
    tmp = np.empty(tiles.shape[2], dtype=np.int64)
    out = np.zeros(T, dtype=np.bool_)
    seen = np.zeros(n, dtype=np.int64)
    for t in range(T):
        ok = True
        for k in range(tlen[t]):
            i = _index(tiles[t, k], cols, mods, dims, tmp)
            if seen[i] == t + 1:
                ok = False
                break
            seen[i] = t + 1
        out[t] = ok
    return out


@njit(cache=True)
def screen(tiles, tlen, diffs, dlen, rims, rlen, cols, mods, dims, n):
    """Level-1 screen of one lattice.

    Returns (usable, start): usable[t] says tile t is injective modulo the
    lattice; start[t] says tile t at residue 0 leaves every residue coverable
    by some translate that avoids it.
    """
    T = tiles.shape[0]
    w = tiles.shape[2]
    tmp = np.empty(w, dtype=np.int64)
    pt = np.empty(w, dtype=np.int64)
    usable = injective(tiles, tlen, cols, mods, dims, n)
    start = np.zeros(T, dtype=np.bool_)

    blocked = np.zeros((T, n), dtype=np.bool_)
    covered = np.zeros(n, dtype=np.bool_)
    for t in range(T):
        if not usable[t]:
            continue
        covered[:] = False
        for k in range(tlen[t]):
            covered[_index(tiles[t, k], cols, mods, dims, tmp)] = True
        for u in range(T):
            blocked[u, :] = False
            if usable[u]:
                for k in range(dlen[t, u]):
                    blocked[u, _index(diffs[t, u, k], cols, mods, dims, tmp)] = True
        # cells next to t first: cheap and usually decisive
        dead = False
        for r in range(rlen[t]):
            if covered[_index(rims[t, r], cols, mods, dims, tmp)]:
                continue
            ok = False
            for u in range(T):
                if not usable[u]:
                    continue
                for k in range(tlen[u]):
                    for i in range(w):
                        pt[i] = rims[t, r, i] - tiles[u, k, i]
                    if not blocked[u, _index(pt, cols, mods, dims, tmp)]:
                        ok = True
                        break
                if ok:
                    break
            if not ok:
                dead = True
                break
        if dead:
            continue
        rep = np.empty(w, dtype=np.int64)
        for u in range(T):
            if not usable[u]:
                continue
            for x in range(n):
                if blocked[u, x]:
                    continue
                _section(x, dims, rep)
                for k in range(tlen[u]):
                    for i in range(w):
                        pt[i] = rep[i] + tiles[u, k, i]
                    covered[_index(pt, cols, mods, dims, tmp)] = True
        start[t] = covered.all()
    return usable, start


# ---------------------------------------------------------------------------
# Exact cover with multiplicities


@njit(cache=True)
def pack(rows, n_cells, n_primary):
    """Padded rows (negative = padding) to (cells, mult, n_primary_in_row) plus one empty row.

    Repeated cells merge into one entry with multiplicity; primary cells are
    moved to the front of each row.
    """
    R, W = rows.shape
    cells = np.full((R + 1, W), n_cells, dtype=np.int64)
    mult = np.zeros((R + 1, W), dtype=np.int64)
    row_np = np.zeros(R + 1, dtype=np.int64)
    stamp = np.full(n_cells, -1, dtype=np.int64)
    where = np.zeros(n_cells, dtype=np.int64)
    for r in range(R):
        m = 0
        for k in range(W):
            c = rows[r, k]
            if c < 0:
                continue
            if stamp[c] == r:
                mult[r, where[c]] += 1
                continue
            stamp[c] = r
            where[c] = m
            cells[r, m] = c
            mult[r, m] = 1
            m += 1
        lo = 0
        for k in range(m):
            if cells[r, k] < n_primary:
                cells[r, lo], cells[r, k] = cells[r, k], cells[r, lo]
                mult[r, lo], mult[r, k] = mult[r, k], mult[r, lo]
                lo += 1
        row_np[r] = lo
    return cells, mult, row_np


@njit(cache=True)
def columns(row_cells, row_mult, n_cells):
    """Per cell, the rows containing it in increasing order, padded with the empty row."""
    R = row_cells.shape[0] - 1
    deg = np.zeros(n_cells + 1, dtype=np.int64)
    for r in range(R):
        for k in range(row_cells.shape[1]):
            if row_mult[r, k] > 0:
                deg[row_cells[r, k]] += 1
    maxdeg = max(1, deg.max())
    col_rows = np.full((n_cells + 1, maxdeg), R, dtype=np.int64)
    fill = np.zeros(n_cells + 1, dtype=np.int64)
    for r in range(R):
        for k in range(row_cells.shape[1]):
            if row_mult[r, k] > 0:
                c = row_cells[r, k]
                col_rows[c, fill[c]] = r
                fill[c] += 1
    return col_rows, deg


@njit(cache=True)
def _exclude(r, row_cells, row_mult, row_np, status, live, trail, meta):
    # live counts matter only on primary cells, which come first in each row
    status[r] = -1
    for k in range(row_np[r]):
        live[row_cells[r, k]] -= row_mult[r, k]
    trail[meta[TRAIL]] = r
    meta[TRAIL] += 1


@njit(cache=True)
def include(r, row_cells, row_mult, row_np, col_rows, col_deg, status, count, live, trail, meta, level):
    status[r] = 1
    W = row_cells.shape[1]
    for k in range(W):
        count[row_cells[r, k]] += row_mult[r, k]
    for k in range(row_np[r]):
        live[row_cells[r, k]] -= row_mult[r, k]
    trail[meta[TRAIL]] = r
    meta[TRAIL] += 1
    for k in range(W):
        if row_mult[r, k] == 0:
            continue
        c = row_cells[r, k]
        for j in range(col_deg[c]):
            s = col_rows[c, j]
            if status[s] != 0:
                continue
            if level == 1:
                _exclude(s, row_cells, row_mult, row_np, status, live, trail, meta)
            else:
                for kk in range(W):
                    m = row_mult[s, kk]
                    if m > 0 and count[row_cells[s, kk]] + m > level:
                        _exclude(s, row_cells, row_mult, row_np, status, live, trail, meta)
                        break


@njit(cache=True)
def exclude(r, row_cells, row_mult, row_np, status, live, trail, meta):
    if status[r] == 0:
        _exclude(r, row_cells, row_mult, row_np, status, live, trail, meta)


@njit(cache=True)
def undo(mark, row_cells, row_mult, row_np, status, count, live, trail, meta):
    W = row_cells.shape[1]
    while meta[TRAIL] > mark:
        meta[TRAIL] -= 1
        r = trail[meta[TRAIL]]
        if status[r] == 1:
            for k in range(W):
                count[row_cells[r, k]] -= row_mult[r, k]
        for k in range(row_np[r]):
            live[row_cells[r, k]] += row_mult[r, k]
        status[r] = 0


@njit(cache=True)
def _select(n_primary, level, count, live):
    """Least-slack uncovered primary cell; -1 if all are covered, -2 on a dead cell."""
    best = -1
    best_slack = 0
    for c in range(n_primary):
        need = level - count[c]
        if need <= 0:
            continue
        slack = live[c] - need
        if slack < 0:
            return -2
        if best < 0 or slack < best_slack:
            best = c
            best_slack = slack
    return best


@njit(cache=True)
def _next_live(c, start, col_rows, col_deg, status):
    for j in range(start, col_deg[c]):
        if status[col_rows[c, j]] == 0:
            return j
    return -1


@njit(cache=True)
def run(
    n_primary, level, row_cells, row_mult, row_np, col_rows, col_deg,
    status, count, live, trail, meta, f_cell, f_pos, f_base, f_mark, node_limit,
):
    """Depth-first search, resumable: returns SOLVED, EXHAUSTED or LIMIT.

    A frame branches on one cell; it tries the cell's live rows in order,
    excluding each one after it has been explored.
    """
    backtrack = meta[RESUME] == 1
    meta[RESUME] = 0
    while True:
        if not backtrack:
            if meta[NODES] >= node_limit:
                return LIMIT
            c = _select(n_primary, level, count, live)
            if c == -1:
                meta[RESUME] = 1
                return SOLVED
            if c >= 0:
                j = _next_live(c, 0, col_rows, col_deg, status)
                if j >= 0:
                    d = meta[DEPTH]
                    f_cell[d] = c
                    f_pos[d] = j
                    f_base[d] = meta[TRAIL]
                    f_mark[d] = meta[TRAIL]
                    meta[DEPTH] += 1
                    meta[NODES] += 1
                    include(col_rows[c, j], row_cells, row_mult, row_np, col_rows, col_deg, status, count, live, trail, meta, level)
                    continue
        backtrack = False
        advanced = False
        while meta[DEPTH] > 0:
            d = meta[DEPTH] - 1
            c = f_cell[d]
            undo(f_mark[d], row_cells, row_mult, row_np, status, count, live, trail, meta)
            _exclude(col_rows[c, f_pos[d]], row_cells, row_mult, row_np, status, live, trail, meta)
            f_mark[d] = meta[TRAIL]
            j = _next_live(c, f_pos[d] + 1, col_rows, col_deg, status)
            if j >= 0:
                f_pos[d] = j
                meta[NODES] += 1
                include(col_rows[c, j], row_cells, row_mult, row_np, col_rows, col_deg, status, count, live, trail, meta, level)
                advanced = True
                break
            undo(f_base[d], row_cells, row_mult, row_np, status, count, live, trail, meta)
            meta[DEPTH] -= 1
        if not advanced:
            return EXHAUSTED
