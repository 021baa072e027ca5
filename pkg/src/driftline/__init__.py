"""Drift correction, assisted review, and analysis for reading eye-tracking data."""

from .algorithms import ALGORITHMS, AlgoParams, Correction, correct, split_regressions
from .analysis import AccuracyResult, AoiMetricsRow, HitRow, accuracy, aoi_metrics, hit_test
from .aoi import AoiParams, BinaryImage, binarize, detect_aois, load_aois_csv, save_aois_csv
from .filters import FilterSpec, filter_duration, filter_outliers, filter_outside_screen, merge_short_fixations
from .model import AOI, Fixation, LineSet, Trial, nearest_line, word_centers
from .session import Anchor, Event, Session, Suggestion, start
from .synth import (
    DistortionSpec,
    DurationModel,
    GenConfig,
    GeneratedTrial,
    SkipModel,
    distort,
    generate_basic,
    generate_between_line_regressions,
    generate_skip,
    generate_within_line_regressions,
    skip_probability,
    synth_duration,
)

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "AOI",
    "AccuracyResult",
    "AlgoParams",
    "Anchor",
    "AoiMetricsRow",
    "AoiParams",
    "BinaryImage",
    "Correction",
    "DistortionSpec",
    "DurationModel",
    "Event",
    "FilterSpec",
    "Fixation",
    "GenConfig",
    "GeneratedTrial",
    "HitRow",
    "LineSet",
    "Session",
    "SkipModel",
    "Suggestion",
    "Trial",
    "accuracy",
    "aoi_metrics",
    "binarize",
    "correct",
    "detect_aois",
    "distort",
    "filter_duration",
    "filter_outliers",
    "filter_outside_screen",
    "generate_basic",
    "generate_between_line_regressions",
    "generate_skip",
    "generate_within_line_regressions",
    "hit_test",
    "load_aois_csv",
    "merge_short_fixations",
    "nearest_line",
    "save_aois_csv",
    "skip_probability",
    "split_regressions",
    "start",
    "synth_duration",
    "word_centers",
]
