import math
from decimal import Decimal, getcontext
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from tessella.errors import RangeError
from tessella.gallery import (
    EXAMPLE6_TILE,
    WindowSet,
    continued_fraction,
    convergent_for_window,
    convergents,
    example6_system,
    gen_A_alpha,
    gen_disconnected_tiling,
    gen_square_tiling,
    sqrt_continued_fraction,
    window_of,
    window_verify,
)
from tessella.solver import check_tiling
from tessella.tiles import Tile, TileSystem

SQUARE = Tile.of([(0, 0), (1, 0), (0, 1), (1, 1)])
GAPPED = Tile.of([(0, 0), (2, 0), (0, 1), (2, 1)])
bits = st.lists(st.integers(0, 1), min_size=1, max_size=5)


class TestSquareAndDisconnected:
    @given(bits, st.sampled_from(["columns", "rows"]))
    def test_periodic_square_tilings(self, a, orientation):
        assert check_tiling(SQUARE, gen_square_tiling(a, orientation)).ok

    @given(st.lists(st.integers(0, 1), min_size=12, max_size=12), st.sampled_from(["columns", "rows"]))
    def test_aperiodic_square_windows(self, seq, orientation):
        W = gen_square_tiling(lambda n: seq[n % 12] if n >= 0 else seq[(n * 7) % 12], orientation, ((-10, 10), (-10, 10)))
        v = window_verify(SQUARE, W)
        assert v.ok and v.checked == 20 * 20

    @given(bits, bits)
    def test_disconnected(self, a, b):
        assert check_tiling(GAPPED, gen_disconnected_tiling(a, b)).ok
        W = gen_disconnected_tiling(a, b, ((-8, 8), (-8, 8)))
        assert window_verify(GAPPED, W).ok
        assert W == window_of(gen_disconnected_tiling(a, b), ((-8, 8), (-8, 8)))

    def test_window_matches_periodic(self):
        box = ((-5, 6), (-3, 4))
        assert gen_square_tiling([0, 1, 1], window=box) == window_of(gen_square_tiling([0, 1, 1]), box)

    def test_detects_a_bad_window(self):
        W = gen_square_tiling([0], window=((0, 7), (0, 7)))
        mask = W.mask.copy()
        mask[4, 4] = not mask[4, 4]
        v = window_verify(SQUARE, WindowSet(W.box, mask))
        assert v.status == "violation"

    def test_tiny_window_is_inconclusive(self):
        W = WindowSet.from_points(((0, 0), (0, 0)), [(0, 0)])
        assert window_verify(SQUARE, W).status == "inconclusive"


def alpha_direct(alpha: Fraction, n: int, m: int) -> bool:
    frac = lambda x: x - math.floor(x)
    val = frac(alpha * n) + frac(alpha * m) - frac(alpha * (n + m)) - Fraction(1, 2)
    return (val > 0) == ((m // 2 + n) % 2 == 0)


class TestAlpha:
    def test_example6_tile(self):
        assert len(EXAMPLE6_TILE) == 8
        assert example6_system().level == 4

    @pytest.mark.parametrize("alpha", [Fraction(0), Fraction(1, 2), Fraction(1, 3), Fraction(2, 5), Fraction(3, 7)])
    def test_rational_alpha_tiles_at_level_four(self, alpha):
        A = gen_A_alpha(alpha)
        assert check_tiling(example6_system(), A).ok
        for n in range(-6, 7):
            for m in range(-6, 7):
                assert A.contains((n, m)) == alpha_direct(alpha, n, m)

    def test_sqrt2_window_matches_high_precision(self):
        getcontext().prec = 60
        root = Decimal(2).sqrt()
        box = ((-30, 30), (-30, 30))
        W = gen_A_alpha(math.sqrt(2), box)

        def frac(x):
            return x - (x.to_integral_value(rounding="ROUND_FLOOR"))

        for n in range(-30, 31, 3):
            for m in range(-30, 31, 2):
                val = frac(root * n) + frac(root * m) - frac(root * (n + m)) - Decimal("0.5")
                assert W.contains((n, m)) == ((val > 0) == ((m // 2 + n) % 2 == 0))
        assert window_verify(example6_system(), W).ok

    def test_successive_convergents_agree(self):
        box = ((-30, 30), (-30, 30))
        terms = sqrt_continued_fraction(2)
        c0 = convergent_for_window(terms, box)
        c1 = convergent_for_window(terms, box, skip=1)
        assert c0 != c1 and c0.denominator > 121 ** 2
        assert gen_A_alpha(c0, box) == gen_A_alpha(c1, box)

    def test_too_few_terms(self):
        with pytest.raises(RangeError):
            convergent_for_window([1, 2, 2], ((-30, 30), (-30, 30)))

    def test_irrational_needs_window(self):
        with pytest.raises(ValueError):
            gen_A_alpha(math.pi)


class TestContinuedFractions:
    def test_known_expansions(self):
        assert sqrt_continued_fraction(2, 5) == [1, 2, 2, 2, 2]
        assert sqrt_continued_fraction(3, 5) == [1, 1, 2, 1, 2]
        assert sqrt_continued_fraction(9) == [3]
        assert continued_fraction(Fraction(415, 93)) == [4, 2, 6, 7]

    @given(st.fractions(min_value=-50, max_value=50, max_denominator=10**6))
    def test_last_convergent_is_exact(self, x):
        assert list(convergents(continued_fraction(x)))[-1] == x

    def test_convergents_approach_sqrt2(self):
        cs = list(convergents(sqrt_continued_fraction(2, 12)))
        errs = [abs(float(c) - math.sqrt(2)) for c in cs]
        assert all(b < a for a, b in zip(errs, errs[1:]))


@st.composite
def windows(draw):
    d = draw(st.integers(1, 3))
    box = tuple((lo, lo + draw(st.integers(0, 5))) for lo in draw(st.lists(st.integers(-5, 5), min_size=d, max_size=d)))
    shape = tuple(hi - lo + 1 for lo, hi in box)
    return WindowSet(box, draw(arrays(bool, shape)))


class TestWindowJson:
    @given(windows())
    def test_round_trip(self, W):
        assert WindowSet.from_json(W.to_json()) == W

    def test_layout(self):
        W = WindowSet.from_points(((0, 3), (0, 1)), [(0, 0), (1, 0), (3, 0), (2, 1)])
        assert W.to_json() == {"box": [[0, 3], [0, 1]], "rows": [[[0, 2], [3, 1]], [[2, 1]]]}

    @pytest.mark.parametrize("bad", [
        {"box": [[0, 3]], "rows": [[[3, 2]]]},
        {"box": [[0, 3], [0, 1]], "rows": [[]]},
        {"box": [[2, 1]], "rows": [[]]},
        {"box": [[0, 3]], "rows": [[[0, 0]]]},
    ])
    def test_rejects(self, bad):
        with pytest.raises(RangeError):
            WindowSet.from_json(bad)

    def test_outside_query(self):
        W = WindowSet.from_points(((0, 1),), [(0,)])
        with pytest.raises(RangeError):
            W.contains((5,))
