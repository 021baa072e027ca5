"""Shared fixtures: the canonical two-line stimulus used across the suite.

Geometry: two lines with centers y=100 and y=200 (spacing 100), three word
AOIs per line (60x40 px) with x-centers at 50, 150, and 250.
"""

from __future__ import annotations

import pytest

from driftline.model import AOI, Fixation, LineSet, Trial, word_centers

TWO_LINE_AOIS = tuple(
    AOI(x=cx - 30, y=cy - 20, width=60, height=40, line=line, part=part, image="stimulus.png")
    for line, cy in ((1, 100), (2, 200))
    for part, cx in ((1, 50), (2, 150), (3, 250))
)

TWO_LINES = LineSet((100.0, 200.0))


def make_trial(points, duration=200.0) -> Trial:
    return Trial(tuple(Fixation(x=x, y=y, duration=duration) for x, y in points))


def clean_two_line_trial() -> Trial:
    """One fixation per word center, reading order."""
    return make_trial(word_centers(list(TWO_LINE_AOIS)))


@pytest.fixture
def two_line_aois():
    return list(TWO_LINE_AOIS)


@pytest.fixture
def two_lines():
    return TWO_LINES


@pytest.fixture
def two_line_words():
    return word_centers(list(TWO_LINE_AOIS))


@pytest.fixture
def two_line_trial():
    return clean_two_line_trial()


class FakeClock:
    """Deterministic millisecond clock for session tests."""

    def __init__(self, start: float = 1000.0, step: float = 10.0):
        self.now = start
        self.step = step

    def __call__(self) -> float:
        t = self.now
        self.now += self.step
        return t


@pytest.fixture
def fake_clock():
    return FakeClock()
