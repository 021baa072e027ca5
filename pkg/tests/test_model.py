from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from driftline.model import AOI, Fixation, LineSet, Trial, nearest_line, word_centers

from .conftest import TWO_LINE_AOIS, TWO_LINES


class TestFixation:
    def test_rejects_nonpositive_duration(self):
        with pytest.raises(ValueError):
            Fixation(x=1, y=2, duration=0)

    def test_rejects_nonfinite_coordinates(self):
        with pytest.raises(ValueError):
            Fixation(x=math.nan, y=2, duration=100)
        with pytest.raises(ValueError):
            Fixation(x=1, y=math.inf, duration=100)

    def test_coerces_to_float(self):
        f = Fixation(x=1, y=2, duration=3)
        assert isinstance(f.x, float) and isinstance(f.duration, float)


class TestTrial:
    def test_timestamps_must_be_nondecreasing(self):
        with pytest.raises(ValueError):
            Trial((Fixation(0, 0, 1, timestamp=10), Fixation(0, 0, 1, timestamp=5)))

    def test_order_is_preserved(self):
        fixs = (Fixation(3, 0, 1), Fixation(1, 0, 1), Fixation(2, 0, 1))
        assert Trial(fixs).fixations == fixs


class TestAoi:
    def test_rejects_bad_dimensions(self):
        with pytest.raises(ValueError):
            AOI(x=0, y=0, width=0, height=10, line=1, part=1)

    def test_rejects_zero_indices(self):
        with pytest.raises(ValueError):
            AOI(x=0, y=0, width=10, height=10, line=0, part=1)

    def test_contains_is_closed(self):
        a = AOI(x=0, y=0, width=10, height=10, line=1, part=1)
        assert a.contains(0, 0) and a.contains(10, 10)
        assert not a.contains(10.01, 10)


class TestLineSet:
    def test_requires_strictly_ascending(self):
        with pytest.raises(ValueError):
            LineSet((100.0, 100.0))

    def test_from_aois_uses_vertical_centers(self):
        assert LineSet.from_aois(list(TWO_LINE_AOIS)).line_ys == (100.0, 200.0)

    def test_spacing(self):
        assert TWO_LINES.spacing() == 100.0
        assert LineSet((50.0,)).spacing() == math.inf


class TestNearestLine:
    def test_clearly_closer_to_first_line(self):
        assert nearest_line(120, TWO_LINES) == 1

    def test_tie_breaks_to_upper_line(self):
        assert nearest_line(150, TWO_LINES) == 1

    def test_just_past_midpoint(self):
        # |151-100| = 51 > |151-200| = 49
        assert nearest_line(151, TWO_LINES) == 2

    def test_empty_lineset_errors(self):
        with pytest.raises(ValueError, match="no lines"):
            nearest_line(100, LineSet(()))

    def test_snapping_is_idempotent(self):
        for i, y in enumerate(TWO_LINES.line_ys, start=1):
            assert nearest_line(y, TWO_LINES) == i

    @given(
        st.integers(-2000, 2000).map(lambda v: v / 4),
        st.integers(-100000, 100000).map(lambda v: v / 4),
        st.lists(st.integers(0, 4000).map(lambda v: v / 4), min_size=1, max_size=8, unique=True),
    )
    def test_translation_invariance(self, y, shift, raw_lines):
        lines = LineSet(tuple(sorted(raw_lines)))
        shifted = LineSet(tuple(v + shift for v in sorted(raw_lines)))
        assert nearest_line(y, lines) == nearest_line(y + shift, shifted)


class TestWordCenters:
    def test_fixture_geometry(self):
        centers = word_centers(list(TWO_LINE_AOIS))
        assert len(centers) == 6
        assert centers[0] == (50.0, 100.0)
        assert centers[3] == (50.0, 200.0)

    def test_single_aoi(self):
        assert word_centers([AOI(0, 0, 10, 10, 1, 1)]) == [(5.0, 5.0)]

    def test_reference_aoi_center(self):
        # AOI at (137.5, 147) sized 119x44 centers at (197, 169).
        assert word_centers([AOI(137.5, 147, 119, 44, 1, 1)]) == [(197.0, 169.0)]

    def test_empty(self):
        assert word_centers([]) == []

    def test_orders_by_line_then_part(self):
        scrambled = sorted(TWO_LINE_AOIS, key=lambda a: a.x)
        assert word_centers(scrambled) == word_centers(list(TWO_LINE_AOIS))
