"""Sweeps over generated corpora, shared by the scripts and the acceptance tests.

Each sweep returns a small summary with the failures it saw, so callers can
print a table or assert on it.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

from .solver import Budget, TilingCertificate, candidate_lattices, decide_1d, semi_decide, solve_periodic, universal_bound
from .structure import decompose_with_retries, dilation_check, verify_decomposition
from .tiles import Tile, TileSystem, box_tiles, diam
from .wang import all_instances, decode_tiling, golomb_encode, wang_check, wang_tileable_upto


@dataclass
class Sweep:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.checked > 0 and not self.failures

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = "".join(f", {k}={v}" for k, v in self.notes.items())
        return f"{status} {self.name}: {self.checked} checked, {len(self.failures)} failures, {self.seconds:.1f}s{extra}"


def level1_corpus(shape=(4, 4), max_size: int = 5, max_index: int = 36) -> tuple[list[TilingCertificate], int]:
    """First certificate (by index, then HNF order) for each normalized tile in the box that tiles."""
    tiles = box_tiles(shape, max_size)
    certs = []
    for t in tiles:
        system = TileSystem.single(t)
        for lat in candidate_lattices(system, max_index):
            cert = solve_periodic(system, lat)
            if cert is not None:
                certs.append(cert)
                break
    return certs, len(tiles)


def dilation_sweep(certs) -> Sweep:
    t0 = time.perf_counter()
    sw = Sweep("dilation")
    for c in certs:
        F = c.system.tiles[0]
        q = F.group.exponent * len(F)
        rep = dilation_check(F, c.solution, q, (q + 1, 2 * q + 1))
        sw.checked += 1
        if not rep.ok:
            sw.failures.append(F.points)
    sw.seconds = time.perf_counter() - t0
    return sw


def density_sweep(certs) -> Sweep:
    t0 = time.perf_counter()
    sw = Sweep("density identity")
    for c in certs:
        size = c.solutions[0].quotient.size
        lhs = sum(len(A.residues) * len(F) for A, F in zip(c.solutions, c.system.tiles))
        sw.checked += 1
        if lhs != c.system.level * size:
            sw.failures.append((c.system, lhs, size))
    sw.seconds = time.perf_counter() - t0
    return sw


def decomposition_sweep(certs) -> Sweep:
    t0 = time.perf_counter()
    sw = Sweep("weak periodicity")
    used = {1: 0, 2: 0, 4: 0}
    for c in certs:
        F, A = c.system.tiles[0], c.solution
        sw.checked += 1
        dec = decompose_with_retries(F, A)
        if dec is None:
            sw.failures.append((F.points, "no decomposition"))
            continue
        used[dec.q // len(F)] += 1
        rep = verify_decomposition(F, A, dec.parts, dec.q)
        if not rep.ok or any(L.d != 2 for ls in rep.periods.values() for L in ls):
            sw.failures.append((F.points, rep.reason))
    sw.notes = {f"q'={k}q": v for k, v in used.items()}
    sw.seconds = time.perf_counter() - t0
    return sw


def wang_sweep(max_squares: int = 3, max_colors: int = 2, max_period=(3, 3), instances=None) -> Sweep:
    """Periodic Wang search against the semi-decision on the encoded polyominoes.

    The lattice budget 9 K^2 covers every encoded period K (p1, p2) with
    p1, p2 <= 3; the box radius K is enough to expose a dead encoded system.
    """
    t0 = time.perf_counter()
    sw = Sweep("wang round trip")
    counts = {"tileable": 0, "not_tileable": 0, "unknown": 0}
    for W in instances if instances is not None else all_instances(max_squares, max_colors):
        sw.checked += 1
        a = wang_tileable_upto(W, max_period)
        code = golomb_encode(W)
        K = code.K
        res = semi_decide(code.system, Budget(max_index=9 * K * K, max_radius=K))
        counts[res.outcome] += 1
        if (a is not None) != (res.outcome == "tileable"):
            sw.failures.append((W.squares, a is not None, res.outcome))
            continue
        if res.certificate is not None and not wang_check(W, decode_tiling(code, res.certificate)).ok:
            sw.failures.append((W.squares, "decoded assignment fails"))
    sw.notes = counts
    sw.seconds = time.perf_counter() - t0
    return sw


def universal_bound_sweep(max_diam: int = 8, max_size: int = 4) -> Sweep:
    """Every tile {0} u S u {D} in Z with D <= max_diam and at most max_size points."""
    t0 = time.perf_counter()
    sw = Sweep("1D universal bound")
    tileable = 0
    for D in range(0, max_diam + 1):
        inner = range(1, D)
        for k in range(0, max_size - (2 if D else 1) + 1):
            for mid in itertools.combinations(inner, k):
                pts = (0,) + mid + ((D,) if D else ())
                F = Tile.of(pts)
                dec = decide_1d(F)
                sw.checked += 1
                if dec.tileable:
                    tileable += 1
                    if dec.period > universal_bound(F):
                        sw.failures.append((pts, dec.period, universal_bound(F)))
                    assert diam(F) == D
    sw.notes = {"tileable": tileable}
    sw.seconds = time.perf_counter() - t0
    return sw
