"""Command-line front end.

Manifests are read from the files named on the command line (standard input
when there are none); result manifests go to standard output in one write and
a short summary goes to standard error.

Exit codes: 0 positive, 1 negative, 2 unknown or out of budget,
64 usage error, 65 malformed input.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import gallery, padic, structure, wang
from .abelian import Lattice
from .errors import BoundExceededError, BudgetError, FormatError, TessellaError, UnsupportedError
from .manifest import Manifest, parse, report, serialize
from .render import render
from .solver import (
    Budget,
    PeriodicSet,
    TilingCertificate,
    candidate_lattices,
    check_tiling,
    decide_1d,
    semi_decide,
    solve_periodic,
)
from .tiles import Tile, TileSystem, as_system

OK, NEGATIVE, UNKNOWN, USAGE, BAD_INPUT = 0, 1, 2, 64, 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(USAGE)


@dataclass
class Outcome:
    code: int
    summary: str
    manifests: list[Manifest] = field(default_factory=list)
    text: str | None = None  # raw output (render) instead of manifests


# ---------------------------------------------------------------------------
# Argument helpers


def _ints(text: str, what: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"{what} must be comma-separated integers, got {text!r}") from None


def _window(text: str | None):
    if text is None:
        return None
    v = _ints(text, "--window")
    if len(v) not in (2, 4):
        raise UsageError("--window takes x0,x1 or x0,x1,y0,y1")
    return tuple((v[i], v[i + 1]) for i in range(0, len(v), 2))


def _lattice(text: str, d: int) -> Lattice:
    """'a,b' is the diagonal lattice; 'r1;r2' gives generator rows."""
    if ";" in text:
        return Lattice.from_generators([_ints(r, "--period") for r in text.split(";")], d)
    v = _ints(text, "--period")
    if len(v) != d:
        raise UsageError(f"--period needs {d} entries for rank {d}")
    return Lattice.diagonal(*v)


def _alpha(text: str):
    if text.startswith("sqrt"):
        n = int(text[4:].strip(":()"))
        if math.isqrt(n) ** 2 == n:
            return Fraction(math.isqrt(n))
        return math.sqrt(n)
    return Fraction(text)


def _deadline() -> float | None:
    ms = os.environ.get("TESSELLA_BUDGET_MS")
    return time.monotonic() + int(ms) / 1000 if ms else None


# ---------------------------------------------------------------------------
# Input gathering


@dataclass
class Inputs:
    tiles: list[Tile] = field(default_factory=list)
    systems: list[TileSystem] = field(default_factory=list)
    sets: list[PeriodicSet] = field(default_factory=list)
    windows: list[gallery.WindowSet] = field(default_factory=list)
    wang_instances: list[wang.WangInstance] = field(default_factory=list)
    wang_assignments: list[wang.WangAssignment] = field(default_factory=list)
    sudoku: list[padic.SudokuWindow] = field(default_factory=list)
    colorings: list[tuple] = field(default_factory=list)
    certificates: list[TilingCertificate] = field(default_factory=list)
    reports: list[dict] = field(default_factory=list)

    def system(self, level: int | None = None) -> TileSystem:
        if self.systems:
            return as_system(self.systems[0], level)
        if self.tiles:
            return as_system(self.tiles[0] if len(self.tiles) == 1 else TileSystem(tuple(self.tiles)), level)
        if self.certificates:
            return as_system(self.certificates[0].system, level)
        raise UsageError("expected a tile or system manifest")

    def tile(self) -> Tile:
        if self.tiles:
            return self.tiles[0]
        sys_ = self.system()
        if len(sys_.tiles) != 1:
            raise UsageError("expected a single tile")
        return sys_.tiles[0]

    def solution_sets(self) -> list[PeriodicSet]:
        if self.sets:
            return self.sets
        if self.certificates:
            return list(self.certificates[0].solutions)
        raise UsageError("expected periodic_set manifests or a certificate")


def _read(paths: list[str]) -> list[tuple[str, str]]:
    if not paths:
        return [("<stdin>", sys.stdin.read())]
    out = []
    for p in paths:
        if p == "-":
            out.append(("<stdin>", sys.stdin.read()))
            continue
        try:
            with open(p, encoding="utf-8") as fh:
                out.append((p, fh.read()))
        except OSError as exc:
            raise UsageError(f"cannot read {p}: {exc.strerror}") from None
    return out


def _gather(paths: list[str]) -> Inputs:
    inp = Inputs()
    for name, text in _read(paths):
        try:
            manifests = parse(text)
        except FormatError as exc:
            exc.source = name
            raise
        lines = [i for i, line in enumerate(text.splitlines(), start=1) if line.strip()]
        for line, m in zip(lines, manifests):
            try:
                _add(inp, m)
            except FormatError as exc:
                raise FormatError(exc.msg, line, 1, source=name) from None
    return inp


def _add(inp: Inputs, m: Manifest) -> None:
    obj = m.decode()
    if m.kind == "tile":
        inp.tiles.append(obj)
    elif m.kind == "system":
        inp.systems.append(obj)
    elif m.kind == "periodic_set":
        inp.sets.append(obj)
    elif m.kind == "window":
        inp.windows.append(obj)
    elif m.kind == "wang":
        for o in obj if isinstance(obj, tuple) else (obj,):
            if isinstance(o, wang.WangInstance):
                inp.wang_instances.append(o)
            else:
                inp.wang_assignments.append(o)
    elif m.kind == "sudoku":
        inp.sudoku.append(obj)
    elif m.kind == "coloring":
        inp.colorings.append(obj if isinstance(obj, tuple) else (obj, None))
    elif m.payload.get("type") == "certificate":
        try:
            inp.certificates.append(TilingCertificate.from_json(m.payload))
        except (KeyError, TypeError, ValueError, TessellaError) as exc:
            raise FormatError(f"bad certificate report: {exc}") from exc
    else:
        inp.reports.append(obj)


def _certificate_report(cert: TilingCertificate, **extra) -> Manifest:
    return report("certificate", **cert.to_json(), **extra)


# ---------------------------------------------------------------------------
# Commands


def cmd_solve(args, inp: Inputs) -> Outcome:
    system = inp.system(args.level)
    deadline = _deadline()
    if args.period:
        lattices = [_lattice(args.period, system.group.rank)]
    else:
        lattices = candidate_lattices(system, args.max_index)
    tried = 0
    for lat in lattices:
        tried += 1
        cert = solve_periodic(system, lat, deadline=deadline)
        if cert is not None:
            return Outcome(OK, f"solve: tiling with lattice {lat.to_json()} (index {lat.index})", [_certificate_report(cert)])
    if args.period:
        return Outcome(NEGATIVE, f"solve: no tiling periodic under {args.period}", [report("no_solution", lattices_tried=tried)])
    return Outcome(
        UNKNOWN,
        f"solve: no periodic tiling up to index {args.max_index}",
        [report("no_solution", lattices_tried=tried, max_index=args.max_index)],
    )


def cmd_decide1d(args, inp: Inputs) -> Outcome:
    dec = decide_1d(inp.tile())
    m = report("decide1d", **dec.to_json())
    if dec.tileable:
        return Outcome(OK, f"decide1d: tileable with period {dec.period}", [m])
    return Outcome(NEGATIVE, "decide1d: not tileable", [m])


def _budget(args) -> Budget:
    return Budget(max_index=args.max_index, max_radius=args.max_radius)


def cmd_semidecide(args, inp: Inputs) -> Outcome:
    res = semi_decide(inp.system(args.level), _budget(args))
    m = report("semidecision", **res.to_json())
    code = {"tileable": OK, "not_tileable": NEGATIVE}.get(res.outcome, UNKNOWN)
    detail = ""
    if res.certificate is not None:
        detail = f" (lattice {res.certificate.lattice.to_json()})"
    elif res.obstruction is not None:
        detail = f" (box radius {res.obstruction.radius})"
    return Outcome(code, f"semidecide: {res.outcome}{detail}", [m])


def cmd_verify(args, inp: Inputs) -> Outcome:
    system = inp.system(args.level)
    if inp.windows:
        v = gallery.window_verify(system, inp.windows)
        code = {"ok": OK, "violation": NEGATIVE}.get(v.status, UNKNOWN)
        return Outcome(code, f"verify: window {v.status} ({v.checked} points checked)", [report("window_check", **v.to_json())])
    res = check_tiling(system, inp.solution_sets())
    m = report("check", **res.to_json())
    if res.ok:
        return Outcome(OK, "verify: tiling ok", [m])
    v = res.violation
    return Outcome(NEGATIVE, f"verify: point {list(v.point)} covered {v.count} times, expected {v.expected}", [m])


def _tile_and_set(args, inp: Inputs) -> tuple[Tile, PeriodicSet]:
    tile = inp.tile()
    if inp.sets or inp.certificates:
        return tile, inp.solution_sets()[0]
    res = semi_decide(tile, _budget(args))
    if res.certificate is None:
        raise _Early(Outcome(NEGATIVE if res.outcome == "not_tileable" else UNKNOWN, f"no tiling set to work with ({res.outcome})"))
    return tile, res.certificate.solution


class _Early(Exception):
    def __init__(self, outcome: Outcome):
        self.outcome = outcome


def cmd_dilate(args, inp: Inputs) -> Outcome:
    tile, A = _tile_and_set(args, inp)
    rep = structure.dilation_check(tile, A, args.q)
    code = OK if rep.ok else NEGATIVE
    return Outcome(code, f"dilate: q={rep.q}, r in {list(rep.tested_r)}: {'ok' if rep.ok else 'failed'}", [report("dilation", **rep.to_json())])


def cmd_density(args, inp: Inputs) -> Outcome:
    if inp.windows:
        w = inp.windows[0]
        dens = Fraction(len(w), w.mask.size)
        return Outcome(OK, f"density: {dens} on the window", [report("density", window=str(dens))])
    A = inp.solution_sets()[0]
    Ns = tuple(range(1, args.max_radius + 1))
    est = structure.density_estimate(A, Ns)
    return Outcome(OK, f"density: {est.exact}", [report("density", **est.to_json())])


def cmd_decompose(args, inp: Inputs) -> Outcome:
    tile, A = _tile_and_set(args, inp)
    if args.q is not None:
        dec = structure.weak_periodic_decompose(tile, A, args.q)
    else:
        dec = structure.decompose_with_retries(tile, A)
    if dec is None:
        return Outcome(NEGATIVE, "decompose: no weak decomposition found", [report("decomposition", found=False)])
    rep = structure.verify_decomposition(tile, A, dec.parts, dec.q)
    out = [report("decomposition", found=True, **dec.to_json()), report("decomposition_check", **rep.to_json())]
    code = OK if rep.ok else NEGATIVE
    return Outcome(code, f"decompose: q'={dec.q}, {len(dec.parts)} part(s), check {'ok' if rep.ok else rep.reason}", out)


def cmd_structure_check(args, inp: Inputs) -> Outcome:
    tile, A = _tile_and_set(args, inp)
    v = structure.structure_consequence_check(tile, A, args.q)
    return Outcome(OK if v.ok else NEGATIVE, f"structure-check: {'ok' if v.ok else v.reason}", [report("structure", **v.to_json())])


def cmd_gallery(args, inp: Inputs) -> Outcome:
    box = _window(args.window)
    rng = np.random.default_rng(args.seed)
    out: list[Manifest] = []
    if args.name == "square":
        a = _ints(args.seq, "--seq") if args.seq else rng.integers(0, 2, size=4).tolist()
        obj = gallery.gen_square_tiling(a, "rows" if args.rows else "columns", box)
        out.append(Manifest.of(Tile.of([(0, 0), (1, 0), (0, 1), (1, 1)])))
    elif args.name == "disconnected":
        a = _ints(args.seq, "--seq") if args.seq else rng.integers(0, 2, size=2).tolist()
        b = _ints(args.seq2, "--seq2") if args.seq2 else rng.integers(0, 2, size=2).tolist()
        obj = gallery.gen_disconnected_tiling(a, b, box)
        out.append(Manifest.of(Tile.of([(0, 0), (2, 0), (0, 1), (2, 1)])))
    elif args.name in ("alpha", "example6"):
        alpha = _alpha(args.alpha) if args.alpha else Fraction(1, 2)
        if not isinstance(alpha, Fraction) and box is None:
            raise UsageError("an irrational alpha needs --window")
        obj = gallery.gen_A_alpha(alpha, box)
        out.append(Manifest.of(gallery.example6_system()))
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown gallery {args.name!r}")
    out.append(Manifest.of(obj))
    what = "window" if box is not None else "periodic set"
    return Outcome(OK, f"gallery {args.name}: {what} written", out)


def cmd_wang(args, inp: Inputs) -> Outcome:
    if args.action == "encode":
        W = _one(inp.wang_instances, "a Wang instance")
        code = wang.golomb_encode(W)
        return Outcome(OK, f"wang encode: {len(code.system.tiles)} polyominoes, K={code.K}", [Manifest.of(code.system)])
    if args.action == "check":
        W = _one(inp.wang_instances, "a Wang instance")
        a = _one(inp.wang_assignments, "a Wang assignment")
        v = wang.wang_check(W, a)
        summary = "wang check: ok" if v.ok else f"wang check: rule {v.rule} fails at {list(v.cell)}"
        return Outcome(OK if v.ok else NEGATIVE, summary, [report("wang_check", **v.to_json())])
    if args.action == "solve":
        W = _one(inp.wang_instances, "a Wang instance")
        if args.period:
            p = _ints(args.period, "--period")
            if len(p) != 2:
                raise UsageError("--period takes p1,p2")
            a = wang.wang_solve_periodic(W, (p[0], p[1]))
        else:
            a = wang.wang_tileable_upto(W)
        if a is None:
            return Outcome(NEGATIVE, "wang solve: no torus assignment", [report("wang_solve", found=False)])
        payload = {**W.to_json(), "assignment": a.to_json()}
        return Outcome(OK, f"wang solve: {a.shape[0]}x{a.shape[1]} torus", [Manifest("wang", payload)])
    # decode
    W = _one(inp.wang_instances, "a Wang instance")
    code = wang.golomb_encode(W)
    if inp.certificates:
        cert = inp.certificates[0]
    else:
        K = code.K
        res = semi_decide(code.system, Budget(max_index=args.max_index or 9 * K * K, max_radius=args.max_radius or K))
        if res.certificate is None:
            c = NEGATIVE if res.outcome == "not_tileable" else UNKNOWN
            return Outcome(c, f"wang decode: encoded system is {res.outcome}", [report("semidecision", **res.to_json())])
        cert = res.certificate
    a = wang.decode_tiling(code, cert)
    v = wang.wang_check(W, a)
    payload = {**W.to_json(), "assignment": a.to_json()}
    return Outcome(OK if v.ok else NEGATIVE, f"wang decode: {a.shape[0]}x{a.shape[1]} torus, check {'ok' if v.ok else 'failed'}", [Manifest("wang", payload)])


def _one(items: list, what: str):
    if not items:
        raise UsageError(f"expected {what}")
    return items[0]


def cmd_sudoku(args, inp: Inputs) -> Outcome:
    if args.action == "gen":
        ctx = padic.PadicContext(args.p)
        rows = tuple(_ints(args.rows, "--rows")) if args.rows else (0, 2 * ctx.M)
        if len(rows) != 2:
            raise UsageError("--rows takes m0,m1")
        S = padic.standard_solution(ctx, rows)
        return Outcome(OK, f"sudoku gen: p={ctx.p}, rows {list(rows)}", [Manifest.of(S)])
    if args.action == "verify":
        S = _one(inp.sudoku, "a sudoku manifest")
        lines = padic.lines_inside(S, args.max_a)
        rep = padic.verify_sudoku_window(S.ctx, S, lines)
        summary = f"sudoku verify: {len(lines)} lines, {len(rep.rejected)} rejected"
        return Outcome(OK if rep.ok else NEGATIVE, summary, [report("sudoku_check", **rep.to_json())])
    # vdw
    ctx = padic.PadicContext(args.p)
    rng = np.random.default_rng(args.seed)
    N = args.N if args.N is not None else int(rng.integers(1, 20))
    d = args.d if args.d is not None else 1 + N * int(rng.integers(0, 20))
    a = args.a if args.a is not None else int(rng.integers(-1000, 1000))
    try:
        j = padic.vdw_violation(ctx, N, a, d)
    except BoundExceededError as exc:
        return Outcome(UNKNOWN, f"sudoku vdw: {exc}", [report("vdw", p=ctx.p, N=N, a=a, d=d, j=None)])
    return Outcome(OK, f"sudoku vdw: j={j} (bound {ctx.M * N})", [report("vdw", p=ctx.p, N=N, a=a, d=d, j=j)])


def cmd_coloring(args, inp: Inputs) -> Outcome:
    inst, tables = _one(inp.colorings, "a coloring manifest")
    if tables is None:
        raise UsageError("the coloring manifest carries no tables")
    box = _window(args.window)
    if box is None or len(box) != 2:
        raise UsageError("coloring check needs --window x0,x1,y0,y1")
    v = padic.coloring_check(inst, tables, None, box)
    summary = "coloring check: ok" if v.ok else f"coloring check: violation at {list(v.point)}"
    return Outcome(OK if v.ok else NEGATIVE, summary, [report("coloring_check", **v.to_json())])


def cmd_render(args, inp: Inputs) -> Outcome:
    box = _window(args.window)
    W = inp.wang_instances[0] if inp.wang_instances else None
    if inp.windows:
        payload = inp.windows if len(inp.windows) > 1 else inp.windows[0]
    elif inp.sets or inp.certificates:
        payload = inp.solution_sets()
    elif inp.sudoku:
        payload = inp.sudoku[0]
    elif inp.wang_assignments:
        payload = inp.wang_assignments[0]
    else:
        raise UsageError("nothing to render: expected a window, periodic set, certificate, sudoku or wang assignment")
    text = render(payload, args.format, window=box, instance=W)
    return Outcome(OK, f"render: {args.format} written", text=text)


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tessella", description="Periodic tilings of finitely generated abelian groups.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_, inputs=True, actions=None, standalone=()):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(fn=fn, standalone=standalone)
        if actions:
            sp.add_argument("action", choices=actions)
        if inputs:
            sp.add_argument("inputs", nargs="*", help="manifest files (default: standard input)")
        return sp

    def budget_flags(sp, max_index=64, max_radius=6):
        sp.add_argument("--max-index", type=int, default=max_index)
        sp.add_argument("--max-radius", type=int, default=max_radius)

    sp = add("solve", cmd_solve, "search lattice-periodic tilings")
    budget_flags(sp)
    sp.add_argument("--level", type=int)
    sp.add_argument("--period", help="lattice: 'a,b' (diagonal) or 'r1;r2' (generator rows)")

    sp = add("decide1d", cmd_decide1d, "decide tileability of a tile in Z")

    sp = add("semidecide", cmd_semidecide, "periodic search interleaved with box obstructions")
    budget_flags(sp)
    sp.add_argument("--level", type=int)

    sp = add("verify", cmd_verify, "check a tiling (periodic sets or windows)")
    sp.add_argument("--level", type=int)

    for name, fn, help_ in (
        ("dilate", cmd_dilate, "dilation check for r = 1 mod q"),
        ("decompose", cmd_decompose, "weak periodic decomposition"),
        ("structure-check", cmd_structure_check, "structure consequence check"),
    ):
        sp = add(name, fn, help_)
        sp.add_argument("--q", type=int)
        budget_flags(sp)

    sp = add("density", cmd_density, "density of a periodic set or window")
    sp.add_argument("--max-radius", type=int, default=4, help="largest box radius for the window estimates")

    sp = add("gallery", cmd_gallery, "closed-form tilings", inputs=False)
    sp.add_argument("name", choices=("square", "disconnected", "alpha", "example6"))
    sp.add_argument("--window")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--seq", help="one period of the shift sequence a, e.g. 0,1,1")
    sp.add_argument("--seq2", help="one period of b (disconnected tiling)")
    sp.add_argument("--rows", action="store_true", help="row orientation for the square tiling")
    sp.add_argument("--alpha", help="a fraction like 2/5, or sqrtN")

    sp = add("wang", cmd_wang, "Wang squares", actions=("check", "solve", "encode", "decode"))
    sp.add_argument("--period")
    sp.add_argument("--max-index", type=int)
    sp.add_argument("--max-radius", type=int)

    sp = add("sudoku", cmd_sudoku, "p-adic Sudoku", actions=("gen", "verify", "vdw"), standalone=("gen", "vdw"))
    sp.add_argument("--p", type=int, default=3)
    sp.add_argument("--rows", help="m0,m1")
    sp.add_argument("--max-a", type=int, default=3)
    sp.add_argument("--N", type=int)
    sp.add_argument("--a", type=int)
    sp.add_argument("--d", type=int)
    sp.add_argument("--seed", type=int, default=0)

    sp = add("coloring", cmd_coloring, "coloring instances", actions=("check",))
    sp.add_argument("--window")

    sp = add("render", cmd_render, "draw a payload as SVG or ASCII")
    sp.add_argument("--format", choices=("svg", "ascii"), default="svg")
    sp.add_argument("--window")
    return p


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args, extra = parser.parse_known_args(argv)
        # files given after an option land in ``extra``
        if extra and (not hasattr(args, "inputs") or any(x.startswith("-") and x != "-" for x in extra)):
            parser.error(f"unrecognized arguments: {' '.join(extra)}")
        if extra:
            args.inputs += extra
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        # generators ignore standard input unless files are named
        needs = hasattr(args, "inputs") and (args.inputs or getattr(args, "action", None) not in args.standalone)
        inp = _gather(args.inputs) if needs else Inputs()
        out = args.fn(args, inp)
    except _Early as early:
        out = early.outcome
    except FormatError as exc:
        sys.stderr.write(f"{exc.source or '<input>'}: {exc}\n")
        return BAD_INPUT
    except (UsageError, UnsupportedError) as exc:
        sys.stderr.write(f"tessella: {exc}\n")
        return USAGE
    except BudgetError as exc:
        sys.stderr.write(f"tessella: budget exhausted: {exc}\n")
        return UNKNOWN
    except TessellaError as exc:
        sys.stderr.write(f"tessella: {type(exc).__name__}: {exc}\n")
        return USAGE
    data = out.text if out.text is not None else serialize(out.manifests)
    sys.stdout.write(data)
    sys.stdout.flush()
    sys.stderr.write(out.summary + "\n")
    return out.code


def main() -> None:
    raise SystemExit(run())
