"""Write SVG pictures of the closed-form tilings and a p-adic Sudoku board.

    python scripts/gallery_figures.py --out figures
"""
from __future__ import annotations

import argparse
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from tessella.gallery import gen_A_alpha, gen_disconnected_tiling, gen_square_tiling
from tessella.padic import PadicContext, standard_solution
from tessella.render import render


@dataclass(frozen=True)
class Config:
    out: Path = Path("figures")
    radius: int = 12


def main(cfg: Config) -> int:
    cfg.out.mkdir(parents=True, exist_ok=True)
    R = cfg.radius
    box = ((-R, R), (-R, R))
    pictures = {
        "square_columns": render(gen_square_tiling([0, 1, 1, 0, 1], window=box)),
        "disconnected": render(gen_disconnected_tiling([0, 1], [1, 0, 0], window=box)),
        "alpha_2_5": render(gen_A_alpha(Fraction(2, 5), window=box)),
        "alpha_sqrt2": render(gen_A_alpha(math.sqrt(2), window=box)),
        "sudoku_p3": render(standard_solution(PadicContext(3), (0, 26))),
    }
    for name, svg in pictures.items():
        path = cfg.out / f"{name}.svg"
        path.write_text(svg)
        print(path)
    return 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", type=Path, default=Config.out)
    ap.add_argument("--radius", type=int, default=Config.radius)
    a = ap.parse_args()
    raise SystemExit(main(Config(a.out, a.radius)))
