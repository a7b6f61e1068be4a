"""Dilation, density and weak-periodicity sweeps over small tiles in Z^2.

    python scripts/corpus_sweep.py --side 4 --max-size 5 --max-index 36
"""
from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

from tessella.experiments import decomposition_sweep, density_sweep, dilation_sweep, level1_corpus


@dataclass(frozen=True)
class Config:
    side: int = 4
    max_size: int = 5
    max_index: int = 36


def main(cfg: Config) -> int:
    t0 = time.perf_counter()
    certs, n_tiles = level1_corpus((cfg.side, cfg.side), cfg.max_size, cfg.max_index)
    print(f"corpus: {n_tiles} tiles, {len(certs)} tiled with index <= {cfg.max_index} ({time.perf_counter() - t0:.1f}s)")
    sweeps = [dilation_sweep(certs), density_sweep(certs), decomposition_sweep(certs)]
    for sw in sweeps:
        print(sw.line())
        for f in sw.failures[:10]:
            print("   ", f)
    return 0 if all(sw.ok for sw in sweeps) else 1


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--side", type=int, default=Config.side)
    ap.add_argument("--max-size", type=int, default=Config.max_size)
    ap.add_argument("--max-index", type=int, default=Config.max_index)
    a = ap.parse_args()
    raise SystemExit(main(Config(a.side, a.max_size, a.max_index)))
