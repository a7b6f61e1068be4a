import numpy as np
import pytest

from tessella.abelian import Lattice, Z
from tessella.errors import UnsupportedError
from tessella.gallery import WindowSet, gen_square_tiling
from tessella.padic import PadicContext, standard_solution
from tessella.render import count_squares, render
from tessella.solver import PeriodicSet, solve_periodic
from tessella.tiles import Tile
from tessella.wang import WangAssignment, WangInstance

BOX = ((0, 7), (0, 7))
TWO_Z2 = PeriodicSet.from_points(Z(2), Lattice.diagonal(2, 2), [(0, 0)])


def test_periodic_set_square_count():
    svg = render(TWO_Z2, window=BOX)
    assert count_squares(svg) == 16
    assert svg.startswith("<svg") and svg.endswith("</svg>\n")


def test_deterministic():
    assert render(TWO_Z2, window=BOX) == render(TWO_Z2, window=BOX)
    assert render(TWO_Z2, "ascii", window=BOX) == render(TWO_Z2, "ascii", window=BOX)


def test_ascii_layout():
    text = render(WindowSet.from_points(((0, 2), (0, 1)), [(0, 0), (2, 1)]), "ascii")
    assert text == "..#\n#..\n"


def test_multi_tile_and_overlap():
    a = WindowSet.from_points(((0, 2),), [(0,), (1,)])
    b = WindowSet.from_points(((0, 2),), [(1,), (2,)])
    assert render([a, b], "ascii") == "A*B\n"
    assert count_squares(render([a, b])) == 4


def test_certificate():
    cert = solve_periodic(Tile.of([(0, 0), (1, 0), (0, 1), (1, 1)]), Lattice.diagonal(2, 2))
    assert count_squares(render(cert, window=BOX)) == 16


def test_sudoku_and_wang():
    S = standard_solution(PadicContext(3), (0, 2))
    text = render(S, "ascii")
    assert text.splitlines()[-1] == "1 1 1 1 1 1 1 1 1"  # m = 0 at the bottom
    assert text.splitlines()[0] == "2 2 2 2 2 2 2 2 2"
    W = WangInstance(("a", "b"), (("a", "b", "a", "b"), ("a", "a", "a", "a")))
    asg = WangAssignment(np.array([[0, 1], [1, 0]]))
    assert render(asg, "ascii") == "BA\nAB\n"
    assert count_squares(render(asg, instance=W)) == 4
    assert render(asg, instance=W).count("<polygon") == 16


def test_unsupported():
    with pytest.raises(UnsupportedError):
        render(TWO_Z2)
    with pytest.raises(UnsupportedError):
        render(TWO_Z2, "png", window=BOX)
    with pytest.raises(UnsupportedError):
        render(PeriodicSet.everything(Z(2, 2)), window=BOX)
    with pytest.raises(UnsupportedError):
        render(42)
    with pytest.raises(UnsupportedError):
        render(gen_square_tiling([0], window=((0, 1), (0, 1), (0, 1))))
