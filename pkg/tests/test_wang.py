import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tessella.abelian import Lattice, Z
from tessella.errors import BudgetError, DecodeError, DegenerateError, DimensionError
from tessella.solver import Budget, PeriodicSet, TilingCertificate, check_tiling, semi_decide
from tessella.wang import (
    WangAssignment,
    WangInstance,
    all_instances,
    decode_tiling,
    golomb_encode,
    square_polyomino,
    wang_check,
    wang_solve_periodic,
    wang_tileable_upto,
)


def torus_ok(W, grid) -> bool:
    """Matching rules on a torus, written out cell by cell."""
    p1, p2 = len(grid), len(grid[0])
    for i in range(p1):
        for j in range(p2):
            e, s, w, n = W.squares[grid[i][j]]
            if e != W.squares[grid[(i + 1) % p1][j]][2]:
                return False
            if n != W.squares[grid[i][(j + 1) % p2]][1]:
                return False
    return True


def brute_exists(W, period) -> bool:
    p1, p2 = period
    for flat in itertools.product(range(len(W.squares)), repeat=p1 * p2):
        if torus_ok(W, [flat[i * p2 : (i + 1) * p2] for i in range(p1)]):
            return True
    return False


def lift(code, a: WangAssignment) -> list[PeriodicSet]:
    """Place the polyomino of square grid[i, j] at K (i, j)."""
    K = code.K
    p1, p2 = a.shape
    lat = Lattice.diagonal(K * p1, K * p2)
    return [
        PeriodicSet.from_points(Z(2), lat, [(K * i, K * j) for i in range(p1) for j in range(p2) if a.grid[i, j] == t])
        for t in range(len(code.system.tiles))
    ]


instances = st.builds(
    lambda k, picks: WangInstance(tuple(f"c{i}" for i in range(k)), tuple(tuple(f"c{x % k}" for x in p) for p in picks)),
    st.integers(1, 2),
    st.lists(st.tuples(*[st.integers(0, 1)] * 4), min_size=1, max_size=3, unique=True),
)


class TestRules:
    W = WangInstance(("r", "b"), (("r", "b", "r", "b"), ("b", "r", "b", "r")))

    def test_valid_torus(self):
        assert wang_check(self.W, WangAssignment(np.zeros((1, 1), dtype=int), torus=True)).ok

    def test_rule_one(self):
        v = wang_check(self.W, WangAssignment(np.array([[0, 5]]), origin=(3, 4)))
        assert v.rule == 1 and v.cell == (3, 5)

    def test_rule_two_on_torus_wrap(self):
        v = wang_check(self.W, WangAssignment(np.array([[0], [1]]), torus=True))
        assert v.rule == 2 and v.cell == (0, 0) and v.neighbor == (1, 0)
        # the same grid as an open window has one horizontal edge, also bad
        assert not wang_check(self.W, WangAssignment(np.array([[0], [1]]))).ok

    def test_bad_instances(self):
        with pytest.raises(DegenerateError):
            WangInstance((), ())
        with pytest.raises(DimensionError):
            WangInstance(("r",), (("r", "r", "r", "x"),))

    def test_json(self):
        a = WangAssignment(np.array([[0, 1], [1, 0]]), origin=(-1, 2), torus=True)
        assert WangAssignment.from_json(a.to_json()) == a
        assert WangInstance.from_json(self.W.to_json()) == self.W


class TestPeriodicSearch:
    @given(instances, st.sampled_from([(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 1), (2, 3)]))
    def test_matches_brute_force(self, W, period):
        a = wang_solve_periodic(W, period)
        assert (a is not None) == brute_exists(W, period)
        if a is not None:
            assert a.shape == period and wang_check(W, a).ok and torus_ok(W, a.grid.tolist())

    def test_cap(self):
        with pytest.raises(BudgetError):
            wang_solve_periodic(TestRules.W, (200, 200))
        with pytest.raises(DimensionError):
            wang_solve_periodic(TestRules.W, (0, 1))

    def test_instance_count(self):
        # 1 colour: 1 square; 2 colours: 16 squares, subsets of size <= 3
        assert sum(1 for _ in all_instances()) == 1 + 16 + 120 + 560


class TestEncoding:
    def test_polyomino_shape(self):
        K = 10
        P = square_polyomino(0, 1, 0, 1, K)
        assert len(P) == K * K
        # bumps stick out east and north, notches are cut west and south
        assert (K, 1) in P and (K, 2) in P and (1, K) in P and (3, K) in P
        assert (0, 1) not in P and (1, 0) not in P and (3, 0) not in P

    @settings(max_examples=40)
    @given(instances)
    def test_lifted_solutions_tile(self, W):
        code = golomb_encode(W)
        a = wang_tileable_upto(W, (2, 2))
        if a is not None:
            sets = lift(code, a)
            assert check_tiling(code.system, sets).ok
            cert = TilingCertificate(code.system, tuple(sets), True)
            assert wang_check(W, decode_tiling(code, cert)).ok

    def test_mismatched_edges_do_not_tile(self):
        W = WangInstance(("r", "b"), (("r", "b", "b", "b"),))
        code = golomb_encode(W)
        a = WangAssignment(np.zeros((1, 1), dtype=int), torus=True)
        assert not wang_check(W, a).ok
        assert not check_tiling(code.system, lift(code, a)).ok

    def test_round_trip_through_semi_decision(self):
        W = WangInstance(("r", "b"), (("r", "b", "r", "b"),))
        code = golomb_encode(W)
        dec = semi_decide(code.system, Budget(max_index=4 * code.K ** 2, max_radius=2))
        assert dec.outcome == "tileable"
        assert wang_check(W, decode_tiling(code, dec.certificate)).ok

    def test_decode_rejections(self):
        W = WangInstance(("r",), (("r", "r", "r", "r"),))
        code = golomb_encode(W)
        good = lift(code, WangAssignment(np.zeros((1, 1), dtype=int), torus=True))
        with pytest.raises(DecodeError):
            decode_tiling(code, TilingCertificate(code.system, tuple(good) * 2, True))
        off = [PeriodicSet.from_points(Z(2), Lattice.diagonal(code.K + 1, code.K), [(0, 0)])]
        with pytest.raises(DecodeError):
            decode_tiling(code, TilingCertificate(code.system, tuple(off), False))
        empty = [PeriodicSet(Z(2), Lattice.diagonal(code.K, code.K), frozenset())]
        with pytest.raises(DecodeError):
            decode_tiling(code, TilingCertificate(code.system, tuple(empty), False))
