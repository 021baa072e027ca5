from __future__ import annotations

import numpy as np
import pytest

from driftline.algorithms import correct
from driftline.model import Trial, word_centers
from driftline.session import Session, start

from .conftest import TWO_LINE_AOIS, TWO_LINES, FakeClock, clean_two_line_trial, make_trial

WORDS = word_centers(list(TWO_LINE_AOIS))


def snapshot(s: Session) -> tuple:
    return (s.current, dict(s.anchors), dict(s.suggestions), s.finished)


def fresh(algorithm="attach", trial=None, clock=None, params=None) -> Session:
    trial = trial or clean_two_line_trial()
    return start(trial, TWO_LINES, WORDS, algorithm, params, clock or FakeClock())


def offset_trial(delta=30.0) -> Trial:
    base = clean_two_line_trial()
    return make_trial([(f.x, f.y + delta) for f in base])


class TestStart:
    def test_suggestions_equal_algorithm_output(self):
        s = fresh("attach", offset_trial())
        corr = correct("attach", offset_trial().fixations, TWO_LINES, WORDS)
        for i in range(len(s.trial)):
            assert s.suggestions[i].line == corr.assigned_line[i]
            assert s.suggestions[i].y == corr.corrected[i].y
        assert s.current == 0 and not s.anchors
        assert s.log[0].kind == "session_start"

    def test_empty_trial_rejected(self):
        with pytest.raises(ValueError, match="empty trial"):
            start(Trial(()), TWO_LINES, WORDS, "attach")

    def test_warp_error_propagates(self):
        with pytest.raises(ValueError):
            start(clean_two_line_trial(), TWO_LINES, [], "warp")


class TestAccept:
    def test_single_accept(self):
        s = fresh().accept()
        assert set(s.anchors) == {0}
        assert s.current == 1

    def test_accept_all_equals_automated(self):
        for algorithm in ("attach", "chain", "warp", "warp_regress"):
            s = fresh(algorithm, offset_trial())
            for _ in range(len(s.trial)):
                s.accept()
            exported, _log = s.export()
            corr = correct(algorithm, offset_trial().fixations, TWO_LINES, WORDS)
            assert exported.fixations == corr.corrected

    def test_accept_past_end_warns_without_change(self):
        s = fresh()
        for _ in range(len(s.trial)):
            s.accept()
        before = snapshot(s)
        s.accept()
        assert snapshot(s) == before
        assert s.log[-1].warning

    def test_anchor_uses_original_x_and_snapped_y(self):
        trial = offset_trial()
        s = fresh("attach", trial).accept()
        anchor = s.anchors[0]
        assert anchor.x == trial[0].x
        assert anchor.y in TWO_LINES.line_ys


class TestManualMove:
    def test_move_anchors_at_nearest_line(self):
        s = fresh().manual_move(42.0, 195.0)
        assert s.anchors[0].line == 2
        assert (s.anchors[0].x, s.anchors[0].y) == (42.0, 195.0)
        assert s.current == 1

    def test_rejects_non_finite(self):
        s = fresh()
        with pytest.raises(ValueError):
            s.manual_move(float("nan"), 100.0)

    def test_recompute_updates_remaining_for_sequence_algorithms(self):
        # A trailing group drifted high gets suggested on line 1; dragging its
        # first fixation down pulls the whole chain's suggestions to line 2.
        pts = [(50, 100), (200, 100), (40, 148), (140, 148), (240, 148)]
        trial = make_trial(pts)
        s = start(trial, TWO_LINES, WORDS, "chain", clock=FakeClock())
        assert all(s.suggestions[i].line == 1 for i in (2, 3, 4))
        s.next().next()  # review the first of the trailing group
        s.manual_move(40.0, 170.0)
        assert s.anchors[2].line == 2
        assert s.suggestions[3].line == 2
        assert s.suggestions[4].line == 2

    def test_attach_recompute_leaves_others_unchanged(self):
        s = fresh("attach", offset_trial())
        before = dict(s.suggestions)
        s.manual_move(10.0, 200.0)
        for i, sug in s.suggestions.items():
            assert sug == before[i]

    def test_move_to_suggested_position_equals_accept_anchors(self):
        trial = offset_trial()
        a = fresh("attach", trial).accept()
        sug_y = a.anchors[0].y
        b = fresh("attach", trial).manual_move(trial[0].x, sug_y)
        assert a.anchors == b.anchors
        assert [e.kind for e in a.log] != [e.kind for e in b.log]


class TestLineOps:
    def test_line_above(self):
        trial = make_trial([(50, 195), (150, 195)])
        s = start(trial, TWO_LINES, WORDS, "attach", clock=FakeClock())
        assert s.suggestions[0].line == 2
        s.line_above()
        assert s.anchors[0].line == 1
        assert s.anchors[0].y == 100.0
        assert s.anchors[0].x == 50.0

    def test_line_above_at_top_warns(self):
        s = fresh()
        assert s.suggestions[0].line == 1
        before = snapshot(s)
        s.line_above()
        assert snapshot(s) == before
        assert s.log[-1].warning

    def test_line_below_then_undo_restores(self):
        s = fresh()
        before = snapshot(s)
        s.line_below().undo()
        assert snapshot(s) == before

    def test_line_n(self):
        s = fresh().line_n(2)
        assert s.anchors[0].line == 2 and s.anchors[0].y == 200.0

    def test_line_n_out_of_range_warns(self):
        s = fresh()
        before = snapshot(s)
        s.line_n(9)
        assert snapshot(s) == before and s.log[-1].warning

    def test_line_one_everywhere(self):
        s = fresh()
        for _ in range(len(s.trial)):
            s.line_n(1)
        assert all(a.line == 1 for a in s.anchors.values())
        assert len(s.anchors) == len(s.trial)


class TestNavigation:
    def test_back_at_start_is_noop(self):
        s = fresh()
        before = snapshot(s)
        s.back()
        assert snapshot(s) == before and s.log[-1].warning

    def test_next_then_back(self):
        s = fresh().next().back()
        assert s.current == 0

    def test_navigation_does_not_anchor(self):
        s = fresh().next().next()
        assert not s.anchors

    def test_revisit_anchored_then_accept_reanchors(self):
        s = fresh("attach", offset_trial())
        s.accept()
        first = s.anchors[0]
        s.back()
        assert 0 in s.anchors  # still anchored until an explicit action
        s.accept()
        assert s.anchors[0] == first
        assert s.current == 1

    def test_revisit_anchored_then_line_n_changes_line(self):
        s = fresh().accept().back().line_n(2)
        assert s.anchors[0].line == 2


class TestUndo:
    def test_accept_undo(self):
        s = fresh()
        before = snapshot(s)
        s.accept().undo()
        assert snapshot(s) == before

    def test_manual_move_undo_restores_suggestions_exactly(self):
        s = fresh("chain", offset_trial())
        before = snapshot(s)
        s.manual_move(5.0, 200.0).undo()
        assert snapshot(s) == before

    def test_undo_on_fresh_session_warns(self):
        s = fresh()
        before = snapshot(s)
        s.undo()
        assert snapshot(s) == before and s.log[-1].warning

    @pytest.mark.parametrize(
        "op",
        [
            lambda s: s.accept(),
            lambda s: s.manual_move(33.0, 170.0),
            lambda s: s.line_n(2),
            lambda s: s.line_below(),
            lambda s: s.next(),
            lambda s: s.finish(),
        ],
    )
    def test_every_mutating_op_is_invertible(self, op):
        s = fresh("warp", offset_trial())
        s.next()  # leave the boundary so ops act mid-sequence
        before = snapshot(s)
        op(s)
        s.undo()
        assert snapshot(s) == before

    def test_undo_is_logged(self):
        s = fresh().accept().undo()
        assert s.log[-1].kind == "undo"


class TestExport:
    def test_untouched_session_exports_original(self):
        trial = offset_trial()
        s = fresh("attach", trial)
        exported, _ = s.export()
        assert exported == trial

    def test_half_corrected_mixes_anchors_and_originals(self):
        trial = offset_trial()
        s = fresh("attach", trial)
        s.accept().accept().accept()
        exported, _ = s.export()
        for i in range(3):
            assert exported[i].y in TWO_LINES.line_ys
        for i in range(3, 6):
            assert exported[i] == trial[i]

    def test_partial_export_allowed_any_time(self):
        s = fresh()
        for _ in range(10):
            exported, log = s.export()
            assert len(exported) == len(s.trial)
            s.accept()


class TestEventLog:
    def test_timestamps_non_decreasing(self):
        s = fresh("attach", offset_trial())
        s.accept().next().back().line_n(2).manual_move(1.0, 100.0).undo().finish()
        ts = [e.t for e in s.log]
        assert ts == sorted(ts)

    def test_each_state_change_appends_exactly_one_entry(self):
        s = fresh()
        for op in (lambda: s.accept(), lambda: s.next(), lambda: s.back(), lambda: s.line_n(2)):
            before = len(s.log)
            op()
            assert len(s.log) == before + 1

    def test_serialization_shape(self):
        s = fresh().manual_move(12.0, 110.0)
        entry = s.log[-1].to_json()
        assert entry["kind"] == "manual_move"
        assert entry["x"] == 12.0 and entry["y"] == 110.0
        assert set(entry) <= {"t", "kind", "index", "x", "y", "n", "warning"}

    def test_fake_clock_injection(self):
        s = fresh(clock=FakeClock(start=5000.0, step=1.0))
        assert s.log[0].t == 5000.0


class TestInvariantProperties:
    def test_anchor_immutability_under_random_scripts(self):
        rng = np.random.default_rng(42)
        trial = offset_trial()
        ops_run = 0
        for algorithm in ("attach", "chain", "warp"):
            s = fresh(algorithm, trial)
            before = dict(s.anchors)
            for _ in range(120):
                acted = s.current
                choice = rng.integers(0, 6)
                if choice == 0:
                    s.accept()
                elif choice == 1:
                    s.manual_move(float(rng.uniform(0, 300)), float(rng.uniform(60, 240)))
                elif choice == 2:
                    s.line_n(int(rng.integers(1, 3)))
                elif choice == 3:
                    s.next()
                elif choice == 4:
                    s.back()
                else:
                    s.line_below()
                ops_run += 1
                # Only an explicit decision at the acted index may touch its
                # anchor; recompute must never move any other anchor.
                for idx, anchor in s.anchors.items():
                    if idx != acted and idx in before:
                        assert anchor == before[idx]
                before = dict(s.anchors)
                assert s.validate() == []
        assert ops_run == 360

    def test_attach_invariance(self):
        rng = np.random.default_rng(7)
        trial = offset_trial()
        s = fresh("attach", trial)
        original = dict(s.suggestions)
        for _ in range(200):
            choice = rng.integers(0, 5)
            if choice == 0:
                s.accept()
            elif choice == 1:
                s.manual_move(float(rng.uniform(0, 300)), float(rng.uniform(60, 240)))
            elif choice == 2:
                s.line_n(int(rng.integers(1, 3)))
            elif choice == 3:
                s.next()
            else:
                s.back()
            for idx, sug in s.suggestions.items():
                assert sug == original[idx]
