"""Compare solve_periodic with exhaustive subset enumeration on small quotients.

Uses the reference oracle from tests/oracles.py.

    python scripts/oracle_sweep.py --max-quotient 16 --levels 1 2 3 4
"""
from __future__ import annotations

import argparse
import itertools
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from oracles import BruteQuotient, achievable_levels  # noqa: E402
from tessella.abelian import Z, lattices_of_index  # noqa: E402
from tessella.solver import solve_periodic  # noqa: E402
from tessella.tiles import Tile, TileSystem  # noqa: E402


@dataclass(frozen=True)
class Config:
    max_quotient: int = 16
    levels: tuple[int, ...] = field(default=(1, 2, 3, 4))


def tiles():
    z2 = [(x, y) for x in range(3) for y in range(2)]
    for k in range(1, 7):
        for s in itertools.combinations(z2, k):
            if min(p[0] for p in s) == 0 and min(p[1] for p in s) == 0:
                yield Tile.of(s, Z(2))
    for k in range(0, 5):
        for s in itertools.combinations(range(1, 5), k):
            yield Tile.of((0,) + s)
    zz = [(x, t) for x in range(2) for t in range(2)]
    for k in range(1, 5):
        for s in itertools.combinations(zz, k):
            if min(p[0] for p in s) == 0:
                yield Tile.of(s, Z(1, 2))


def main(cfg: Config) -> int:
    t0 = time.perf_counter()
    cases, bad = 0, []
    for F in tiles():
        g = F.group
        for n in range(1, cfg.max_quotient // g.torsion_order + 1):
            for lat in lattices_of_index(g.rank, n):
                levels = achievable_levels([F.points], BruteQuotient(g.rank, g.torsion, lat.columns))
                for level in cfg.levels:
                    cases += 1
                    found = solve_periodic(TileSystem.single(F, level), lat) is not None
                    if found != (level in levels):
                        bad.append((F.points, lat, level))
    print(f"{cases} cases, {len(bad)} disagreements, {time.perf_counter() - t0:.1f}s")
    for b in bad[:10]:
        print("   ", b)
    return 0 if not bad else 1


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--max-quotient", type=int, default=Config.max_quotient)
    ap.add_argument("--levels", type=int, nargs="+", default=list(Config().levels))
    a = ap.parse_args()
    raise SystemExit(main(Config(a.max_quotient, tuple(a.levels))))
