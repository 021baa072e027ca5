"""Synthetic trial generators and distortion generators.

Generators place one fixation per word at its optimal viewing position,
optionally skipping words (exponential length model) and inserting
regressions. All randomness is seeded; skip, placement-noise, and
regression draws use independent streams so that disabling one feature
leaves the others bit-identical.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .model import AOI, Fixation, Trial

log = logging.getLogger(__name__)

DISTORTION_KINDS = ("noise", "slope", "shift", "offset")

DEFAULT_LETTER_WIDTH = 10.0


@dataclass(frozen=True)
class SkipModel:
    """skip probability = k * exp(-lambda * word length in letters)."""

    k: float = 0.9
    lam: float = 0.4
    letter_width: float = DEFAULT_LETTER_WIDTH

    def __post_init__(self) -> None:
        if self.k < 0 or self.lam < 0:
            raise ValueError("k and lambda must be >= 0")
        if self.letter_width <= 0:
            raise ValueError("letter_width must be > 0")


@dataclass(frozen=True)
class DurationModel:
    """duration = base + length * per_letter, in milliseconds."""

    base_ms: float = 100.0
    per_letter_ms: float = 40.0

    def __post_init__(self) -> None:
        if self.base_ms < 0 or self.per_letter_ms < 0:
            raise ValueError("duration constants must be >= 0")


@dataclass(frozen=True)
class GenConfig:
    dispersion: float = 0.0
    regression_prob: float = 0.0
    seed: int = 0
    # Fraction of the word width where the optimal viewing position sits.
    ovp_fraction: float = 0.5

    def __post_init__(self) -> None:
        if self.dispersion < 0:
            raise ValueError("dispersion must be >= 0")
        if not 0.0 <= self.regression_prob <= 1.0:
            raise ValueError("regression_prob must be in [0, 1]")


@dataclass(frozen=True)
class DistortionSpec:
    kind: str
    magnitude: float
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in DISTORTION_KINDS:
            raise ValueError(f"kind must be one of {DISTORTION_KINDS}, got {self.kind!r}")
        if not math.isfinite(self.magnitude):
            raise ValueError("magnitude must be finite")


@dataclass(frozen=True)
class GeneratedTrial:
    """A synthetic trial with its per-fixation ground-truth line labels."""

    trial: Trial
    ground_truth_lines: tuple[int, ...]


def skip_probability(word_length: int, model: SkipModel) -> float:
    if word_length < 1:
        raise ValueError("word_length must be >= 1")
    p = model.k * math.exp(-model.lam * word_length)
    return min(max(p, 0.0), 1.0)


def synth_duration(word_length: int, model: Optional[DurationModel] = None) -> float:
    if word_length < 0:
        raise ValueError("word_length must be >= 0")
    model = model or DurationModel()
    return model.base_ms + word_length * model.per_letter_ms


def _word_length(aoi: AOI, letter_width: float) -> int:
    return max(1, round(aoi.width / letter_width))


def _streams(seed: int) -> tuple[np.random.Generator, np.random.Generator, np.random.Generator]:
    noise = np.random.default_rng([seed, 0])
    skip = np.random.default_rng([seed, 1])
    regression = np.random.default_rng([seed, 2])
    return noise, skip, regression


def _place(aoi: AOI, cfg: GenConfig, noise_rng: np.random.Generator) -> tuple[float, float]:
    x = aoi.x + cfg.ovp_fraction * aoi.width
    y = aoi.y + aoi.height / 2.0
    if cfg.dispersion > 0:
        x += noise_rng.normal(0.0, cfg.dispersion)
        y += noise_rng.normal(0.0, cfg.dispersion)
    return x, y


def _generate(
    aois: Sequence[AOI],
    cfg: GenConfig,
    skip_model: Optional[SkipModel],
    regression_mode: Optional[str],
    duration_model: Optional[DurationModel] = None,
    letter_width: Optional[float] = None,
) -> GeneratedTrial:
    duration_model = duration_model or DurationModel()
    lw = letter_width if letter_width is not None else (skip_model.letter_width if skip_model else DEFAULT_LETTER_WIDTH)
    ordered = sorted(aois, key=lambda a: (a.line, a.part))
    noise_rng, skip_rng, reg_rng = _streams(cfg.seed)

    fixations: list[Fixation] = []
    truth: list[int] = []
    emitted: list[AOI] = []
    for aoi in ordered:
        length = _word_length(aoi, lw)
        if skip_model is not None and skip_rng.uniform() < skip_probability(length, skip_model):
            continue
        x, y = _place(aoi, cfg, noise_rng)
        fixations.append(Fixation(x=x, y=y, duration=synth_duration(length, duration_model)))
        truth.append(aoi.line)
        emitted.append(aoi)

        if regression_mode is None or cfg.regression_prob == 0.0:
            continue
        if reg_rng.uniform() >= cfg.regression_prob:
            continue
        if regression_mode == "within":
            targets = [a for a in emitted[:-1] if a.line == aoi.line]
        else:
            targets = [a for a in emitted[:-1] if a.line < aoi.line]
        if not targets:
            if regression_mode == "between":
                log.warning("between-line regression requested but no earlier line exists; skipping insertion")
            continue
        target = targets[int(reg_rng.integers(0, len(targets)))]
        tx, ty = _place(target, cfg, noise_rng)
        fixations.append(Fixation(x=tx, y=ty, duration=synth_duration(_word_length(target, lw), duration_model)))
        truth.append(target.line)

    return GeneratedTrial(Trial(tuple(fixations)), tuple(truth))


def generate_basic(
    aois: Sequence[AOI],
    cfg: GenConfig,
    duration_model: Optional[DurationModel] = None,
    letter_width: float = DEFAULT_LETTER_WIDTH,
) -> GeneratedTrial:
    """One fixation per word AOI in reading order, at the OVP plus noise."""
    return _generate(aois, cfg, None, None, duration_model, letter_width)


def generate_skip(
    aois: Sequence[AOI],
    skip_model: SkipModel,
    cfg: GenConfig,
    duration_model: Optional[DurationModel] = None,
) -> GeneratedTrial:
    """Like generate_basic, with length-dependent word skipping."""
    return _generate(aois, cfg, skip_model, None, duration_model)


def generate_within_line_regressions(
    aois: Sequence[AOI],
    skip_model: SkipModel,
    cfg: GenConfig,
    duration_model: Optional[DurationModel] = None,
) -> GeneratedTrial:
    """Adds regressions to earlier words on the same line."""
    return _generate(aois, cfg, skip_model, "within", duration_model)


def generate_between_line_regressions(
    aois: Sequence[AOI],
    skip_model: SkipModel,
    cfg: GenConfig,
    duration_model: Optional[DurationModel] = None,
) -> GeneratedTrial:
    """Adds regressions to words on earlier lines."""
    return _generate(aois, cfg, skip_model, "between", duration_model)


def distort(trial: Trial, spec: DistortionSpec) -> Trial:
    """Apply a vertical distortion; x, duration, count, and order are kept."""
    fixs = trial.fixations
    if spec.kind in ("slope", "shift") and not fixs:
        raise ValueError(f"{spec.kind} distortion needs a non-empty trial")
    if spec.kind == "noise":
        rng = np.random.default_rng(spec.seed)
        deltas = rng.normal(0.0, spec.magnitude, len(fixs)) if spec.magnitude != 0 else np.zeros(len(fixs))
        return trial.with_fixations(f.moved_to(f.x, f.y + d) for f, d in zip(fixs, deltas))
    if spec.kind == "slope":
        min_x = min(f.x for f in fixs)
        return trial.with_fixations(f.moved_to(f.x, f.y + spec.magnitude * (f.x - min_x)) for f in fixs)
    if spec.kind == "shift":
        min_y = min(f.y for f in fixs)
        return trial.with_fixations(f.moved_to(f.x, f.y + spec.magnitude * (f.y - min_y)) for f in fixs)
    return trial.with_fixations(f.moved_to(f.x, f.y + spec.magnitude) for f in fixs)
