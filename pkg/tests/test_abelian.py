import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import BruteQuotient, hnf_count_2d
from tessella.abelian import (
    GroupElement,
    GroupSpec,
    Lattice,
    QuotientGroup,
    SubgroupLine,
    Z,
    elem_op,
    enumerate_lattices,
    hermite_normal_form,
    lattices_of_index,
    primitive_direction,
)
from tessella.errors import DimensionError, RankError


def sigma(n):
    return sum(k for k in range(1, n + 1) if n % k == 0)


small = st.integers(-50, 50)


@st.composite
def lattices(draw, d=2, max_entry=6):
    """Nonsingular by construction: columns (a, b) and k (a, b) + (0, c)."""
    a = draw(st.integers(1, max_entry))
    if d == 1:
        return Lattice.from_generators([[a]], 1)
    b = draw(st.integers(-max_entry, max_entry))
    c = draw(st.integers(1, max_entry))
    k = draw(st.integers(-3, 3))
    return Lattice.from_generators([[a, b], [k * a, k * b + c]], 2)


@st.composite
def groups_and_lattices(draw):
    d = draw(st.integers(1, 2))
    torsion = tuple(draw(st.lists(st.integers(2, 4), max_size=2)))
    return GroupSpec(d, torsion), draw(lattices(d=d, max_entry=5))


class TestGroup:
    def test_canonical_reduces_torsion(self):
        g = Z(1, 3)
        assert g.canonical((5, 7)) == (5, 1)
        assert g.canonical((-1, -1)) == (-1, 2)

    def test_bad_groups(self):
        with pytest.raises(DimensionError):
            GroupSpec(0)
        with pytest.raises(DimensionError):
            GroupSpec(1, (1,))
        with pytest.raises(DimensionError):
            Z(2).canonical((1,))

    def test_elem_ops(self):
        g = Z(1, 4)
        a, b = g.element((2,), (3,)), g.element((-5,), (2,))
        assert elem_op("add", a, b) == g.element((-3,), (1,))
        assert elem_op("neg", a) == g.element((-2,), (1,))
        assert elem_op("scale", a, r=3) == g.element((6,), (1,))
        with pytest.raises(DimensionError):
            a + Z(1, 5).element((0,), (0,))

    @given(st.tuples(small, small), st.tuples(small, small), st.integers(0, 9), st.integers(0, 9))
    def test_group_axioms(self, x, y, s, t):
        g = Z(1, 10)
        a = GroupElement.from_flat(g, (x[0], s))
        b = GroupElement.from_flat(g, (y[0], t))
        assert a + b == b + a
        assert a - a == GroupElement.from_flat(g, g.zero())
        assert (a + b).flat() == g.add(a.flat(), b.flat())


class TestLattice:
    def test_hnf_is_canonical(self):
        a = Lattice.from_generators([[2, 0], [0, 2]], 2)
        b = Lattice.from_generators([[2, 2], [0, 2]], 2)
        assert a == b == Lattice.scaled(2, 2)
        assert a.index == 4

    @pytest.mark.parametrize("n", range(1, 13))
    def test_index_count_is_sigma(self, n):
        lats = lattices_of_index(2, n)
        assert len(lats) == sigma(n) == hnf_count_2d(n)
        assert len(set(lats)) == len(lats)
        assert all(L.index == n for L in lats)

    def test_enumerate_is_ordered(self):
        idx = [L.index for L in enumerate_lattices(2, 6)]
        assert idx == sorted(idx)
        assert len(idx) == sum(sigma(n) for n in range(1, 7))

    def test_enumerate_3d_counts(self):
        # sublattices of Z^3 of index n: sum over d1 d2 d3 = n of d2 * d3^2
        for n in range(1, 7):
            want = sum(b * c * c for a in range(1, n + 1) for b in range(1, n + 1) for c in range(1, n + 1) if a * b * c == n)
            assert len(lattices_of_index(3, n)) == want

    @given(lattices(), st.tuples(small, small))
    def test_reduce_lands_in_box(self, L, v):
        r = L.reduce(v)
        assert all(0 <= x < dd for x, dd in zip(r, L.diag))
        assert L.contains([a - b for a, b in zip(v, r)])

    @given(lattices(), lattices())
    def test_intersection(self, A, B):
        C = A.intersection(B)
        assert C.is_sublattice_of(A) and C.is_sublattice_of(B)
        for v in itertools.product(range(-4, 5), repeat=2):
            assert C.contains(v) == (A.contains(v) and B.contains(v))

    def test_json_round_trip(self):
        L = Lattice.from_generators([[1, 2], [0, 4]], 2)
        assert Lattice.from_json(L.to_json()) == L

    def test_hnf_rejects_rank_deficient(self):
        with pytest.raises(RankError):
            hermite_normal_form([[1, 2], [2, 4]], 2)


class TestQuotient:
    @given(groups_and_lattices(), st.lists(st.tuples(small, small, small, small), min_size=2, max_size=2))
    def test_project_is_homomorphism(self, gl, raw):
        g, L = gl
        q = QuotientGroup(g, L)
        a, b = (tuple(r[: g.width]) for r in raw)
        s = tuple(x + y for x, y in zip(a, b))
        ia, ib, isum = q.project([a, b, s])
        assert q.add(int(ia), int(ib)) == int(isum)

    @given(groups_and_lattices(), st.tuples(small, small, small, small))
    def test_section_returns_class(self, gl, raw):
        g, L = gl
        q = QuotientGroup(g, L)
        x = raw[: g.width]
        y = q.section_one(q.project_one(x))
        diff = [a - b for a, b in zip(x, y)]
        assert L.contains(diff[: g.rank])
        assert all(t % n == 0 for t, n in zip(diff[g.rank :], g.torsion))

    @given(groups_and_lattices())
    def test_dense_indices_match_oracle(self, gl):
        g, L = gl
        q = QuotientGroup(g, L)
        bq = BruteQuotient(g.rank, g.torsion, L.columns)
        assert q.size == bq.size
        # same partition: points share a class in one iff they do in the other
        pts = [p for p in itertools.product(range(-3, 4), repeat=g.rank)]
        pts = [p + t for p in pts for t in itertools.product(*(range(n) for n in g.torsion))][:60]
        mine = q.project(pts)
        theirs = [bq.cls(p) for p in pts]
        pairs = {}
        for m, t in zip(mine.tolist(), theirs):
            assert pairs.setdefault(m, t) == t
        assert len(set(pairs.values())) == len(pairs)

    def test_rank_mismatch(self):
        with pytest.raises(RankError):
            QuotientGroup(Z(2), Lattice.diagonal(3))

    def test_shift_table_is_permutation(self):
        q = QuotientGroup(Z(2, 2), Lattice.from_generators([[1, 2], [0, 3]], 2))
        perm = q.shift_table((1, 1, 1))
        assert sorted(perm.tolist()) == list(range(q.size))


class TestLines:
    def test_primitive_direction(self):
        assert primitive_direction((-4, 6)) == (2, -3)
        assert primitive_direction((0, -5)) == (0, 1)
        with pytest.raises(DimensionError):
            primitive_direction((0, 0))

    def test_subgroup_line(self):
        assert SubgroupLine((1, -1), 3).generator == (3, -3)
        with pytest.raises(DimensionError):
            SubgroupLine((2, 2))
