"""Periodic Wang search against the semi-decision on the polyomino encoding.

    python scripts/wang_sweep.py --squares 3 --colors 2
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass

from tessella.experiments import wang_sweep


@dataclass(frozen=True)
class Config:
    squares: int = 3
    colors: int = 2
    period: int = 3


def main(cfg: Config) -> int:
    sw = wang_sweep(cfg.squares, cfg.colors, (cfg.period, cfg.period))
    print(sw.line())
    for f in sw.failures[:10]:
        print("   ", f)
    return 0 if sw.ok else 1


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--squares", type=int, default=Config.squares)
    ap.add_argument("--colors", type=int, default=Config.colors)
    ap.add_argument("--period", type=int, default=Config.period)
    a = ap.parse_args()
    raise SystemExit(main(Config(a.squares, a.colors, a.period)))
