import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tessella.cover import CoverProblem
from tessella.errors import BudgetError


def brute_solutions(n_primary, n_cells, rows, level):
    """Row sets meeting the counts; rows touching no primary cell are never chosen."""
    out = set()
    useful = [r for r in range(len(rows)) if any(c < n_primary for c in rows[r])]
    for k in range(len(useful) + 1):
        for combo in itertools.combinations(useful, k):
            count = [0] * n_cells
            for r in combo:
                for c in rows[r]:
                    count[c] += 1
            if all(count[c] == level for c in range(n_primary)) and all(
                count[c] <= level for c in range(n_primary, n_cells)
            ):
                out.add(combo)
    return out


@st.composite
def systems(draw):
    n_primary = draw(st.integers(1, 6))
    n_secondary = draw(st.integers(0, 2))
    n_cells = n_primary + n_secondary
    level = draw(st.integers(1, 3))
    rows = draw(
        st.lists(st.lists(st.integers(0, n_cells - 1), min_size=1, max_size=4), min_size=0, max_size=11)
    )
    return n_primary, n_cells, rows, level


@given(systems())
def test_all_solutions_match_brute_force(sys_):
    n_primary, n_cells, rows, level = sys_
    prob = CoverProblem(n_primary, rows, level=level, n_cells=n_cells)
    found = [tuple(int(r) for r in s) for s in prob.solutions()]
    assert len(found) == len(set(found)), "a solution was produced twice"
    assert set(found) == brute_solutions(n_primary, n_cells, rows, level)


@given(systems())
def test_solve_agrees_on_existence(sys_):
    n_primary, n_cells, rows, level = sys_
    sol = CoverProblem(n_primary, rows, level=level, n_cells=n_cells).solve()
    brute = brute_solutions(n_primary, n_cells, rows, level)
    assert (sol is not None) == bool(brute)
    if sol is not None:
        assert tuple(int(r) for r in sol) in brute


def test_multiplicity_rows():
    # the row [0, 0] covers cell 0 twice
    prob = CoverProblem(1, [[0, 0], [0]], level=2)
    assert [s.tolist() for s in prob.solutions()] == [[0]]
    assert CoverProblem(1, [[0, 0, 0]], level=2).solve() is None


def test_force_and_rollback():
    rows = [[0, 1], [2, 3], [0, 2], [1, 3]]
    prob = CoverProblem(4, rows)
    mark = prob.mark()
    assert prob.force(2)
    assert prob.solve().tolist() == [2, 3]
    prob.rollback(mark)
    prob.exclude([2])
    assert prob.solve().tolist() == [0, 1]


def test_max_nodes_budget():
    # a hard-ish unsatisfiable instance: odd cells with pairs only
    n = 15
    rows = [[i, j] for i in range(n) for j in range(i + 1, n)]
    with pytest.raises(BudgetError):
        CoverProblem(n, rows, max_nodes=50).solve()


def test_empty_problem():
    assert CoverProblem(0, []).solve().tolist() == []
    assert CoverProblem(1, []).solve() is None
    assert np.array_equal(CoverProblem(2, np.array([[0, 1]])).solve(), [0])
