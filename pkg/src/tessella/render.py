"""SVG and ASCII pictures of windows, periodic sets, Sudoku boards and Wang assignments.

A point x of Z^2 is drawn as the unit square x + [0, 1]^2, with y growing
upwards. Output depends only on the input, so it can be diffed.
"""
from __future__ import annotations

import string
from typing import Sequence


from .errors import UnsupportedError
from .gallery import Box, WindowSet, window_of
from .padic import SudokuWindow
from .solver import PeriodicSet, TilingCertificate
from .wang import EAST, NORTH, SOUTH, WEST, WangAssignment, WangInstance

SCALE = 20
PALETTE = (
    "#4477aa", "#ee6677", "#228833", "#ccbb44", "#66ccee", "#aa3377",
    "#bbbbbb", "#ee8866", "#44bb99", "#99ddff", "#ffaabb", "#eedd88",
)
GLYPHS = string.ascii_uppercase + string.ascii_lowercase


def _fill(k: int) -> str:
    return PALETTE[k % len(PALETTE)]


def _glyph(k: int) -> str:
    return GLYPHS[k % len(GLYPHS)]


class _Canvas:
    """Unit-cell layer over the box [x0, x1] x [y0, y1], y flipped for SVG."""

    def __init__(self, x0: int, x1: int, y0: int, y1: int):
        self.x0, self.x1, self.y0, self.y1 = x0, x1, y0, y1
        self.parts: list[str] = []

    def _xy(self, x: int, y: int) -> tuple[int, int]:
        return (x - self.x0) * SCALE, (self.y1 - y) * SCALE

    def square(self, x: int, y: int, fill: str, label: str | None = None) -> None:
        px, py = self._xy(x, y)
        self.parts.append(
            f'<rect x="{px}" y="{py}" width="{SCALE}" height="{SCALE}" fill="{fill}" stroke="#000000" stroke-width="0.5"/>'
        )
        if label is not None:
            self.parts.append(
                f'<text x="{px + SCALE // 2}" y="{py + SCALE * 3 // 4}" font-size="{SCALE * 3 // 5}" '
                f'text-anchor="middle" font-family="monospace">{label}</text>'
            )

    def wang(self, x: int, y: int, fills: Sequence[str]) -> None:
        px, py = self._xy(x, y)
        c = (px + SCALE / 2, py + SCALE / 2)
        corners = {  # screen coordinates of each side's endpoints
            EAST: ((px + SCALE, py), (px + SCALE, py + SCALE)),
            SOUTH: ((px + SCALE, py + SCALE), (px, py + SCALE)),
            WEST: ((px, py + SCALE), (px, py)),
            NORTH: ((px, py), (px + SCALE, py)),
        }
        for side in (EAST, SOUTH, WEST, NORTH):
            (ax, ay), (bx, by) = corners[side]
            self.parts.append(
                f'<polygon points="{ax},{ay} {bx},{by} {c[0]:g},{c[1]:g}" fill="{fills[side]}" '
                'stroke="#000000" stroke-width="0.5"/>'
            )

    def svg(self) -> str:
        w = (self.x1 - self.x0 + 1) * SCALE
        h = (self.y1 - self.y0 + 1) * SCALE
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">\n'
            f'<rect x="0" y="0" width="{w}" height="{h}" fill="#ffffff"/>\n'
        )
        return head + "".join(p + "\n" for p in self.parts) + "</svg>\n"


def _planar(box: Box) -> tuple[int, int, int, int]:
    if len(box) == 1:
        return box[0][0], box[0][1], 0, 0
    if len(box) == 2:
        return box[0][0], box[0][1], box[1][0], box[1][1]
    raise UnsupportedError("only one- and two-dimensional windows can be drawn")


def _layers(windows: Sequence[WindowSet], fmt: str) -> str:
    """Draw each window's members with the fill (or glyph) of its position."""
    x0, x1, y0, y1 = _planar(windows[0].box)
    members = []
    for k, win in enumerate(windows):
        for p in win.points():
            members.append((k, p[0], p[1] if len(p) > 1 else 0))
    if fmt == "svg":
        canvas = _Canvas(x0, x1, y0, y1)
        for k, x, y in members:
            canvas.square(x, y, _fill(k))
        return canvas.svg()
    # '*' marks a point claimed by two tiles
    grid = [["."] * (x1 - x0 + 1) for _ in range(y1 - y0 + 1)]
    for k, x, y in members:
        glyph = "#" if len(windows) == 1 else _glyph(k)
        grid[y1 - y][x - x0] = glyph if grid[y1 - y][x - x0] == "." else "*"
    return "".join("".join(row) + "\n" for row in grid)


def _sudoku(S: SudokuWindow, fmt: str) -> str:
    # columns n = 1..M run left to right, rows m upwards
    M = S.ctx.M
    m0, m1 = S.rows
    if fmt == "svg":
        canvas = _Canvas(1, M, m0, m1)
        for n in range(1, M + 1):
            for m in range(m0, m1 + 1):
                v = S.at(n, m)
                canvas.square(n, m, _fill(v - 1), str(v))
        return canvas.svg()
    width = len(str(S.ctx.p - 1))
    lines = []
    for m in range(m1, m0 - 1, -1):
        lines.append(" ".join(str(S.at(n, m)).rjust(width) for n in range(1, M + 1)))
    return "".join(line + "\n" for line in lines)


def _wang(a: WangAssignment, W: WangInstance | None, fmt: str) -> str:
    w, h = a.shape
    ox, oy = a.origin
    if fmt == "svg":
        canvas = _Canvas(ox, ox + w - 1, oy, oy + h - 1)
        code = None if W is None else W.coded
        for i in range(w):
            for j in range(h):
                s = int(a.grid[i, j])
                if code is None or not 0 <= s < len(code):
                    canvas.square(ox + i, oy + j, _fill(s), str(s))
                else:
                    canvas.wang(ox + i, oy + j, [_fill(int(c)) for c in code[s]])
        return canvas.svg()
    return "".join(
        "".join(_glyph(int(a.grid[i, j])) for i in range(w)) + "\n" for j in range(h - 1, -1, -1)
    )


def render(payload, fmt: str = "svg", window: Box | None = None, instance: WangInstance | None = None) -> str:
    """Picture of a WindowSet, PeriodicSet(s), TilingCertificate, SudokuWindow or WangAssignment.

    Periodic sets need ``window``; multi-tile payloads give each tile its own
    fill (SVG) or letter (ASCII).
    """
    if fmt not in ("svg", "ascii"):
        raise UnsupportedError(f"unknown format {fmt!r}")
    if isinstance(payload, TilingCertificate):
        payload = list(payload.solutions)
    if isinstance(payload, PeriodicSet):
        payload = [payload]
    if isinstance(payload, WindowSet):
        return _layers([payload], fmt)
    if isinstance(payload, SudokuWindow):
        return _sudoku(payload, fmt)
    if isinstance(payload, WangAssignment):
        return _wang(payload, instance, fmt)
    if isinstance(payload, (list, tuple)) and payload and all(isinstance(s, PeriodicSet) for s in payload):
        if window is None:
            raise UnsupportedError("periodic sets are drawn on a window; pass one")
        if any(s.group.torsion for s in payload):
            raise UnsupportedError("sets with a torsion part cannot be drawn in the plane")
        return _layers([window_of(s, window) for s in payload], fmt)
    if isinstance(payload, (list, tuple)) and payload and all(isinstance(s, WindowSet) for s in payload):
        return _layers(list(payload), fmt)
    raise UnsupportedError(f"cannot render {type(payload).__name__}")


def count_squares(svg: str) -> int:
    """Member squares in an SVG produced here (the background is not counted)."""
    return svg.count("<rect") - 1 + svg.count("<polygon") // 4


__all__ = ["render", "count_squares", "PALETTE", "SCALE"]
