import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tessella.abelian import GroupSpec, Z
from tessella.errors import CollisionError, DegenerateError, DimensionError, UnsupportedError
from tessella.tiles import (
    Tile,
    TileSystem,
    box_tiles,
    default_dilation_modulus,
    diam,
    dilate,
    direction_set,
    reflect,
    slices,
)

points2 = st.sets(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=1, max_size=6)


def test_construction_dedupes_and_sorts():
    t = Tile.of([(1, 0), (0, 0), (1, 0)])
    assert t.points == ((0, 0), (1, 0))
    assert len(t) == 2


def test_not_normalized_by_default():
    t = Tile.of([(3, 4), (4, 4)])
    assert not t.is_normalized
    assert t.normalized().points == ((0, 0), (1, 0))
    assert Tile.of([(3, 4)], normalize=True).points == ((0, 0),)


def test_empty_tile_rejected():
    with pytest.raises(DegenerateError):
        Tile(Z(1), ())


def test_mixed_groups_rejected():
    with pytest.raises(DimensionError):
        TileSystem((Tile.of([0]), Tile.of([(0, 0)])))


@given(points2, st.integers(-5, 5).filter(lambda r: r != 0))
def test_dilate_scales_every_point(pts, r):
    t = Tile.of(sorted(pts))
    d = dilate(t, r)
    assert set(d.points) == {(r * x, r * y) for x, y in pts}


def test_dilate_collision_in_torsion():
    t = Tile.of([(0, 0), (0, 1)], Z(1, 2))
    with pytest.raises(CollisionError):
        dilate(t, 2)
    assert set(dilate(t, 3).points) == {(0, 0), (0, 1)}


@given(points2)
def test_reflect_is_involution_up_to_translation(pts):
    t = Tile.of(sorted(pts), normalize=True)
    assert reflect(reflect(t)) == t


def test_reflect_example():
    assert reflect(Tile.of([0, 2, 3])).points == ((0,), (1,), (3,))


def test_slices_and_directions():
    t = Tile.of([(0, 0, 0), (0, 0, 1), (1, 0, 0), (0, 1, 1)], Z(2, 2))
    sm = slices(t)
    assert sm.support == [(0, 0), (0, 1), (1, 0)]
    assert sm.slices[(0, 0)] == frozenset({(0,), (1,)})
    assert direction_set(t) == [(1, 0), (0, 1), (1, -1)]


def test_direction_set_needs_rank_two():
    with pytest.raises(UnsupportedError):
        direction_set(Tile.of([0, 1]))


def test_diam():
    assert diam(Tile.of([0, 2, 3])) == 3
    with pytest.raises(UnsupportedError):
        diam(Tile.of([(0, 0)]))


@pytest.mark.parametrize("shape,k", [((2, 2), 4), ((3, 2), 3), ((4, 4), 2)])
def test_box_tiles_counts(shape, k):
    tiles = box_tiles(shape, k)
    cells = list(itertools.product(*map(range, shape)))
    want = sum(
        1
        for r in range(1, k + 1)
        for c in itertools.combinations(cells, r)
        if min(p[0] for p in c) == 0 and min(p[1] for p in c) == 0
    )
    assert len(tiles) == want
    assert all(t.is_normalized for t in tiles)
    assert len(set(tiles)) == len(tiles)


def test_default_modulus():
    assert default_dilation_modulus(Tile.of([(0, 0, 0), (1, 0, 1)], Z(2, 2))) == 4


def test_json_round_trip():
    s = TileSystem((Tile.of([(0, 1)], Z(1, 3)), Tile.of([(0, 0), (2, 2)], Z(1, 3))), level=2)
    assert TileSystem.from_json(s.to_json()) == s
    assert s.group == GroupSpec(1, (3,))
