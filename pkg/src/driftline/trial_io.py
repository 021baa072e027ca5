"""Trial file formats: eye-tracker ASCII logs, the detailed event CSV, and
the simple fixation-triples JSON. Converters compose between all three.

The ASCII parser is single-pass and tolerant: anything it cannot read is
skipped and counted, never fatal. Trials are split at messages containing
a configurable marker (default "TRIALID").
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, Sequence, Union

from .model import Fixation, Trial

EVENT_CSV_COLUMNS = ("timestamp", "eye_event", "x", "y", "duration", "pupil", "amplitude", "peak_velocity")

DEFAULT_TRIAL_SPLIT = "TRIALID"


@dataclass(frozen=True)
class AsciiEvent:
    kind: str  # fixation_end | saccade_end | blink | message
    eye: Optional[str] = None
    start: Optional[float] = None
    end: Optional[float] = None
    x: Optional[float] = None
    y: Optional[float] = None
    duration: Optional[float] = None
    pupil: Optional[float] = None
    amplitude: Optional[float] = None
    peak_velocity: Optional[float] = None
    message: Optional[str] = None

    def __post_init__(self) -> None:
        if self.start is not None and self.end is not None and self.end < self.start:
            raise ValueError("event end must be >= start")


@dataclass(frozen=True)
class ParsedAscii:
    trials: list[tuple[str, list[AsciiEvent]]]
    skipped_lines: int


def _num(token: str) -> Optional[float]:
    try:
        return float(token)
    except ValueError:
        return None


def _parse_line(line: str) -> Optional[AsciiEvent]:
    parts = line.split()
    if not parts:
        return None
    tag = parts[0]
    try:
        if tag == "EFIX" and len(parts) >= 7:
            start, end, dur, x, y = (_num(p) for p in parts[2:7])
            pupil = _num(parts[7]) if len(parts) > 7 else None
            if None in (start, end, dur, x, y):
                return None
            return AsciiEvent("fixation_end", parts[1], start, end, x, y, dur, pupil)
        if tag == "ESACC" and len(parts) >= 10:
            start, end, dur = (_num(p) for p in parts[2:5])
            sx, sy = _num(parts[5]), _num(parts[6])
            amplitude, peak_velocity = _num(parts[9]), _num(parts[10]) if len(parts) > 10 else None
            if None in (start, end, dur):
                return None
            return AsciiEvent(
                "saccade_end", parts[1], start, end, sx, sy, dur, amplitude=amplitude, peak_velocity=peak_velocity
            )
        if tag == "EBLINK" and len(parts) >= 4:
            start, end = _num(parts[2]), _num(parts[3])
            if None in (start, end):
                return None
            dur = _num(parts[4]) if len(parts) > 4 else end - start
            return AsciiEvent("blink", parts[1], start, end, duration=dur)
        if tag == "MSG" and len(parts) >= 3:
            t = _num(parts[1])
            if t is None:
                return None
            return AsciiEvent("message", start=t, end=t, message=" ".join(parts[2:]))
    except (ValueError, IndexError):
        return None
    return None


def parse_ascii(text: str, trial_split: str = DEFAULT_TRIAL_SPLIT, eye: str = "R") -> ParsedAscii:
    """Parse fixation/saccade/blink/message events, grouped into trials.

    A message containing trial_split opens a new trial; events before the
    first marker are dropped when markers exist, otherwise everything lands
    in a single trial. With binocular data only the preferred eye is kept
    (falls back to the other eye if the preferred one is absent).
    """
    events: list[AsciiEvent] = []
    skipped = 0
    for line in text.splitlines():
        if not line.strip():
            continue
        ev = _parse_line(line)
        if ev is None:
            skipped += 1
        else:
            events.append(ev)
    if not events:
        raise ValueError("not an ASCII recording: no recognizable event lines")

    eyes = {e.eye for e in events if e.eye in ("L", "R")}
    if len(eyes) > 1:
        keep = eye if eye in eyes else sorted(eyes)[0]
        events = [e for e in events if e.eye is None or e.eye == keep]

    markers = [i for i, e in enumerate(events) if e.kind == "message" and e.message and trial_split in e.message]
    if not markers:
        return ParsedAscii([("1", events)], skipped)

    trials: list[tuple[str, list[AsciiEvent]]] = []
    for n, start_idx in enumerate(markers):
        end_idx = markers[n + 1] if n + 1 < len(markers) else len(events)
        msg = events[start_idx].message or ""
        tail = msg.split(trial_split, 1)[1].strip()
        trial_id = tail if tail else str(n + 1)
        trials.append((trial_id, events[start_idx:end_idx]))
    return ParsedAscii(trials, skipped)


def events_to_trial(events: Sequence[AsciiEvent]) -> Trial:
    """Fixation-end events as a Trial; other event kinds are ignored."""
    fixs = [
        Fixation(x=e.x, y=e.y, duration=e.duration, timestamp=e.start, pupil=e.pupil)
        for e in events
        if e.kind == "fixation_end"
    ]
    return Trial(tuple(fixs))


# --- event CSV ----------------------------------------------------------------

_KIND_TO_CSV = {"fixation_end": "fixation", "saccade_end": "saccade", "blink": "blink"}
_CSV_TO_KIND = {v: k for k, v in _KIND_TO_CSV.items()}


def _fmt(v: Optional[float]) -> str:
    """Numbers with at most 3 decimals (tracker precision); ints bare."""
    if v is None:
        return ""
    v = round(float(v), 3)
    if v.is_integer():
        return str(int(v))
    return repr(v)


def to_csv(events: Sequence[AsciiEvent]) -> str:
    """Detailed event CSV. Message events have no column slot and are skipped."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(EVENT_CSV_COLUMNS)
    for e in events:
        if e.kind == "message":
            continue
        writer.writerow(
            [
                _fmt(e.start),
                _KIND_TO_CSV[e.kind],
                _fmt(e.x),
                _fmt(e.y),
                _fmt(e.duration),
                _fmt(e.pupil),
                _fmt(e.amplitude),
                _fmt(e.peak_velocity),
            ]
        )
    return buf.getvalue()


def from_csv(text: str) -> list[AsciiEvent]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = tuple(h.strip() for h in next(reader))
    except StopIteration:
        raise ValueError("empty event CSV") from None
    if header != EVENT_CSV_COLUMNS:
        for got, want in zip(header, EVENT_CSV_COLUMNS):
            if got != want:
                raise ValueError(f"event CSV header mismatch: expected {want!r}, got {got!r}")
        raise ValueError(f"event CSV header mismatch: expected {len(EVENT_CSV_COLUMNS)} columns, got {len(header)}")

    events: list[AsciiEvent] = []
    for row_no, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        kind = row[1].strip()
        if kind not in _CSV_TO_KIND:
            raise ValueError(f"event CSV row {row_no}: unknown eye_event {kind!r}")

        def cell(i: int) -> Optional[float]:
            if i >= len(row) or row[i].strip() == "":
                return None
            v = _num(row[i].strip())
            if v is None:
                raise ValueError(f"event CSV row {row_no}: non-numeric {EVENT_CSV_COLUMNS[i]} {row[i]!r}")
            return v

        start = cell(0)
        duration = cell(4)
        end = start + duration if start is not None and duration is not None else None
        events.append(
            AsciiEvent(
                kind=_CSV_TO_KIND[kind],
                start=start,
                end=end,
                x=cell(2),
                y=cell(3),
                duration=duration,
                pupil=cell(5),
                amplitude=cell(6),
                peak_velocity=cell(7),
            )
        )
    return events


# --- trial JSON ----------------------------------------------------------------


def dumps_trial(trial: Trial, extras: Optional[dict[str, Any]] = None) -> str:
    """Canonical trial JSON: "fixations" first, then extras verbatim."""
    payload: dict[str, Any] = {"fixations": [[f.x, f.y, f.duration] for f in trial.fixations]}
    for key, value in (extras or {}).items():
        if key != "fixations":
            payload[key] = value
    return json.dumps(payload)


def loads_trial(text: str) -> tuple[Trial, dict[str, Any]]:
    """Parse trial JSON; returns the trial and all non-"fixations" keys."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid trial JSON: {exc}") from None
    if not isinstance(data, dict) or "fixations" not in data:
        raise ValueError('trial JSON must be an object with a "fixations" key')
    raw = data["fixations"]
    if not isinstance(raw, list):
        raise ValueError('"fixations" must be a list of [x, y, duration] triples')
    fixs = []
    for i, triple in enumerate(raw):
        if not isinstance(triple, (list, tuple)) or len(triple) != 3:
            raise ValueError(f"fixation {i} must be an [x, y, duration] triple")
        x, y, dur = triple
        if not all(isinstance(v, (int, float)) and math.isfinite(v) for v in (x, y, dur)):
            raise ValueError(f"fixation {i} has non-finite or non-numeric values")
        fixs.append(Fixation(x=x, y=y, duration=dur))
    extras = {k: v for k, v in data.items() if k != "fixations"}
    return Trial(tuple(fixs)), extras


def save_trial_json(trial: Trial, path: Union[str, Path], extras: Optional[dict[str, Any]] = None) -> None:
    Path(path).write_text(dumps_trial(trial, extras) + "\n", encoding="utf-8")


def load_trial_json(path: Union[str, Path]) -> tuple[Trial, dict[str, Any]]:
    return loads_trial(Path(path).read_text(encoding="utf-8"))


# --- converters ------------------------------------------------------------------


def csv_to_trial(text: str) -> tuple[Trial, int]:
    """Fixation rows of an event CSV as a Trial; returns the dropped-row count."""
    events = from_csv(text)
    dropped = sum(1 for e in events if e.kind != "fixation_end")
    return events_to_trial(events), dropped


def trial_to_csv(trial: Trial) -> str:
    events = [
        AsciiEvent(
            "fixation_end",
            start=f.timestamp,
            end=f.timestamp + f.duration if f.timestamp is not None else None,
            x=f.x,
            y=f.y,
            duration=f.duration,
            pupil=f.pupil,
        )
        for f in trial.fixations
    ]
    return to_csv(events)
