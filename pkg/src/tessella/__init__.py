"""Periodic tilings of finitely generated abelian groups Z^d x G_0.

Exact-cover search for lattice-periodic (multi-)tilings, a complete decision
procedure in one dimension, a semi-decision procedure in general, structure
checks for tiling sets in the plane, and the combinatorial gadgets (Wang
squares, p-adic Sudoku boards, coloring instances) that encode harder
tiling problems.
"""
from .abelian import GroupSpec, Lattice, QuotientGroup, Z, enumerate_lattices, quotient
from .cover import CoverProblem
from .errors import (
    BoundExceededError,
    BudgetError,
    DecodeError,
    DegenerateError,
    DimensionError,
    FormatError,
    PreconditionError,
    RangeError,
    TessellaError,
    UnsupportedError,
)
from .gallery import WindowSet, gen_A_alpha, gen_disconnected_tiling, gen_square_tiling, window_verify
from .manifest import Manifest, parse, serialize
from .padic import PadicContext, SudokuWindow, f_p, is_sp_cutoff, standard_solution, verify_sudoku_window, vdw_violation
from .render import render
from .solver import (
    Budget,
    PeriodicSet,
    TilingCertificate,
    check_tiling,
    decide_1d,
    semi_decide,
    solve_periodic,
)
from .structure import dilation_check, verify_decomposition, weak_periodic_decompose
from .tiles import Tile, TileSystem, dilate
from .wang import WangAssignment, WangInstance, decode_tiling, golomb_encode, wang_check, wang_solve_periodic

__version__ = "0.1.0"
