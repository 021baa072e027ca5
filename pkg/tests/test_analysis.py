from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from driftline.analysis import (
    HIT_CSV_COLUMNS,
    accuracy,
    aoi_metrics,
    fixation_rows,
    hit_rows_to_csv,
    hit_test,
    saccade_rows,
)
from driftline.model import AOI, Fixation, Trial

from .conftest import make_trial

# First three rows of the reference hit-test report.
REFERENCE_AOIS = [
    AOI(x=137.5, y=147, width=119, height=44, line=1, part=1, image="stimulus.png"),
    AOI(x=262.5, y=147, width=112, height=44, line=1, part=2, image="stimulus.png"),
    AOI(x=382.5, y=147, width=65, height=44, line=1, part=3, image="stimulus.png"),
]
REFERENCE_FIXATIONS = [Fixation(168, 166, 300), Fixation(308, 166, 250), Fixation(399, 178, 200)]


class TestHitTest:
    def test_reference_first_row(self):
        rows = hit_test(Trial((REFERENCE_FIXATIONS[0],)), REFERENCE_AOIS)
        row = rows[0]
        assert (row.fix_x, row.fix_y, row.duration) == (168, 166, 300)
        assert (row.aoi_x, row.aoi_y, row.aoi_width, row.aoi_height) == (137.5, 147, 119, 44)
        assert (row.line, row.part, row.image) == (1, 1, "stimulus.png")

    def test_reference_all_rows(self):
        rows = hit_test(Trial(tuple(REFERENCE_FIXATIONS)), REFERENCE_AOIS)
        assert [(r.aoi_x, r.part) for r in rows] == [(137.5, 1), (262.5, 2), (382.5, 3)]

    def test_miss_has_empty_aoi_fields(self):
        rows = hit_test(make_trial([(1000, 1000)]), REFERENCE_AOIS)
        assert not rows[0].hit
        assert rows[0].aoi_x is None and rows[0].line is None

    def test_corner_counts_as_hit(self):
        rows = hit_test(make_trial([(137.5, 147)]), REFERENCE_AOIS)
        assert rows[0].hit and rows[0].part == 1

    def test_overlap_resolves_to_smallest_area(self):
        big = AOI(x=0, y=0, width=100, height=100, line=1, part=1)
        small = AOI(x=40, y=40, width=20, height=20, line=1, part=2)
        rows = hit_test(make_trial([(50, 50)]), [big, small])
        assert rows[0].part == 2

    def test_row_count_matches_fixations(self, two_line_aois):
        trial = make_trial([(50, 100), (999, 999), (150, 200)])
        assert len(hit_test(trial, two_line_aois)) == 3

    def test_csv_header_exact(self):
        text = hit_rows_to_csv(hit_test(Trial(tuple(REFERENCE_FIXATIONS)), REFERENCE_AOIS))
        assert text.splitlines()[0] == ",".join(HIT_CSV_COLUMNS)
        assert text.splitlines()[1] == "168,166,300,137.5,147,119,44,1,1,stimulus.png"


class TestAoiMetrics:
    def test_single_visit(self):
        trial = Trial((Fixation(168, 166, 300),))
        row = aoi_metrics(trial, REFERENCE_AOIS)[0]
        assert (row.fixation_count, row.ffd, row.gd, row.tt) == (1, 300, 300, 300)

    def test_first_pass_and_return(self):
        # Two first-pass hits, a visit away, then a 100 ms return.
        trial = Trial(
            (
                Fixation(168, 166, 200),
                Fixation(170, 168, 150),
                Fixation(308, 166, 500),
                Fixation(169, 165, 100),
            )
        )
        row = aoi_metrics(trial, REFERENCE_AOIS)[0]
        assert row.ffd == 200
        assert row.gd == 350
        assert row.tt == 450
        assert row.fixation_count == 3

    def test_unvisited_aoi_zeroes(self):
        row = aoi_metrics(Trial(()), REFERENCE_AOIS)[0]
        assert (row.fixation_count, row.ffd, row.gd, row.tt) == (0, 0.0, 0.0, 0.0)

    def test_row_per_aoi_and_ordering_invariants(self, two_line_aois):
        trial = make_trial([(50, 100), (150, 100), (50, 200)], duration=100)
        rows = aoi_metrics(trial, two_line_aois)
        assert len(rows) == len(two_line_aois)
        for r in rows:
            assert r.ffd <= r.gd <= r.tt
            assert (r.fixation_count == 0) == (r.tt == 0)

    def test_total_time_bounded_by_trial_duration(self, two_line_aois):
        trial = make_trial([(50, 100), (999, 999), (150, 200)], duration=100)
        rows = aoi_metrics(trial, two_line_aois)
        assert sum(r.tt for r in rows) <= sum(f.duration for f in trial)


class TestSaccadeReport:
    def test_three_four_five(self):
        rows = saccade_rows(make_trial([(0, 0), (3, 4)]))
        assert len(rows) == 1
        assert rows[0][3] == 5.0

    def test_single_fixation_empty(self):
        assert saccade_rows(make_trial([(0, 0)])) == []

    def test_n_minus_one_rows(self):
        rows = saccade_rows(make_trial([(0, 0), (1, 0), (2, 0), (3, 0)]))
        assert len(rows) == 3

    def test_fixation_rows(self):
        rows = fixation_rows(make_trial([(1, 2)], duration=50))
        assert rows == [(0, 1.0, 2.0, 50.0, None, None)]


class TestAccuracy:
    def test_identical(self):
        assert accuracy([1, 2, 2], [1, 2, 2]).accuracy == 1.0

    def test_three_quarters(self):
        assert accuracy([1, 1, 2, 2], [1, 2, 2, 2]).accuracy == 0.75

    def test_disjoint(self):
        assert accuracy([1, 1], [2, 2]).accuracy == 0.0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            accuracy([1], [1, 2])

    @given(st.lists(st.integers(1, 5), max_size=30), st.data())
    def test_symmetric_and_relabel_invariant(self, a, data):
        b = data.draw(st.lists(st.integers(1, 5), min_size=len(a), max_size=len(a)))
        assert accuracy(a, b).accuracy == accuracy(b, a).accuracy
        relabel = {v: v + 7 for v in range(1, 6)}
        assert accuracy([relabel[v] for v in a], [relabel[v] for v in b]).accuracy == accuracy(a, b).accuracy
