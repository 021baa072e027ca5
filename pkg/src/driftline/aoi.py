"""AOI detection on stimulus images plus the AOI CSV format.

Detection scans a binarized image: ink rows are grouped into line bands,
then ink columns within each band are grouped into parts. A gap larger
than the height/width threshold starts a new band/part.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Union

import numpy as np
from PIL import Image

from .model import AOI

AOI_CSV_COLUMNS = ("image", "line", "part", "x", "y", "width", "height", "token")

LEVELS = ("letter", "word", "line")


@dataclass(frozen=True)
class AoiParams:
    level: str = "word"
    width_threshold: float = 8.0
    height_threshold: float = 4.0

    def __post_init__(self) -> None:
        if self.level not in LEVELS:
            raise ValueError(f"level must be one of {LEVELS}, got {self.level!r}")
        if self.width_threshold < 0 or self.height_threshold < 0:
            raise ValueError("thresholds must be >= 0")


class BinaryImage:
    """Row-major ink mask (True = ink) with the source image dimensions."""

    def __init__(self, pixels: np.ndarray):
        self.pixels = np.asarray(pixels, dtype=bool)
        if self.pixels.ndim != 2:
            raise ValueError("binary image must be 2-D")
        self.height, self.width = self.pixels.shape


def binarize(image: Union[Image.Image, str, Path, np.ndarray], ink_threshold: int = 127) -> BinaryImage:
    """Threshold an image into an ink mask.

    Pixels are split into dark/light at ink_threshold; whichever side holds
    the majority of pixels is taken as background, the rest is ink. This
    handles both dark-on-light and light-on-dark stimuli.
    """
    if isinstance(image, (str, Path)):
        image = Image.open(image)
    if isinstance(image, Image.Image):
        gray = np.asarray(image.convert("L"), dtype=np.uint8)
    else:
        gray = np.asarray(image)
        if gray.ndim == 3:
            gray = gray.mean(axis=2)
    if gray.size == 0:
        raise ValueError("image has zero dimension")
    dark = gray <= ink_threshold
    background_is_dark = dark.mean() > 0.5
    ink = ~dark if background_is_dark else dark
    return BinaryImage(ink)


def _split_runs(occupied: np.ndarray, gap_threshold: float) -> list[tuple[int, int]]:
    """Group occupied indices into [start, end] runs; an empty gap strictly
    longer than gap_threshold starts a new run."""
    idx = np.flatnonzero(occupied)
    if idx.size == 0:
        return []
    runs: list[tuple[int, int]] = []
    start = prev = int(idx[0])
    for i in idx[1:]:
        i = int(i)
        if i - prev - 1 > gap_threshold:
            runs.append((start, prev))
            start = i
        prev = i
    runs.append((start, prev))
    return runs


def detect_aois(image: BinaryImage, params: AoiParams, image_name: str = "") -> list[AOI]:
    """Detect letter/word/line AOIs by projection scanning.

    Band heights are expanded by height_threshold on each side (clamped so
    adjacent bands never overlap). Lines that touch vertically merge into
    one band; only fully empty row runs split.
    """
    rows = image.pixels.any(axis=1)
    bands = _split_runs(rows, params.height_threshold)
    if not bands:
        return []

    aois: list[AOI] = []
    for li, (top, bottom) in enumerate(bands):
        # Expansion stops halfway into the gap to the neighboring band.
        pad_top = params.height_threshold
        pad_bottom = params.height_threshold
        if li > 0:
            pad_top = min(pad_top, (top - bands[li - 1][1] - 1) / 2.0)
        if li + 1 < len(bands):
            pad_bottom = min(pad_bottom, (bands[li + 1][0] - bottom - 1) / 2.0)
        y0 = max(0.0, top - pad_top)
        y1 = min(float(image.height), bottom + 1 + pad_bottom)

        band_cols = image.pixels[top : bottom + 1].any(axis=0)
        if params.level == "line":
            col_idx = np.flatnonzero(band_cols)
            x0, x1 = int(col_idx[0]), int(col_idx[-1]) + 1
            aois.append(AOI(x=x0, y=y0, width=x1 - x0, height=y1 - y0, line=li + 1, part=1, image=image_name))
            continue
        for pi, (left, right) in enumerate(_split_runs(band_cols, params.width_threshold)):
            aois.append(
                AOI(x=left, y=y0, width=right + 1 - left, height=y1 - y0, line=li + 1, part=pi + 1, image=image_name)
            )
    return aois


def _format_number(v: float) -> str:
    if float(v).is_integer():
        return str(int(v))
    return repr(float(v))


def aois_to_csv(aois: Sequence[AOI]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(AOI_CSV_COLUMNS)
    for a in sorted(aois, key=lambda a: (a.line, a.part)):
        writer.writerow(
            [
                a.image,
                a.line,
                a.part,
                _format_number(a.x),
                _format_number(a.y),
                _format_number(a.width),
                _format_number(a.height),
                a.token if a.token is not None else "",
            ]
        )
    return buf.getvalue()


def aois_from_csv(text: str) -> list[AOI]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("empty AOI CSV") from None
    header = [h.strip() for h in header]
    required = ("image", "line", "part", "x", "y", "width", "height")
    for col in required:
        if col not in header:
            raise ValueError(f"AOI CSV missing column {col!r}")
    pos = {name: header.index(name) for name in header}
    has_token = "token" in pos

    aois: list[AOI] = []
    for row_no, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        try:
            line = int(row[pos["line"]])
            part = int(row[pos["part"]])
            x = float(row[pos["x"]])
            y = float(row[pos["y"]])
            width = float(row[pos["width"]])
            height = float(row[pos["height"]])
        except (ValueError, IndexError) as exc:
            raise ValueError(f"AOI CSV row {row_no}: non-numeric or missing field ({exc})") from None
        token = row[pos["token"]] if has_token and len(row) > pos["token"] and row[pos["token"]] != "" else None
        aois.append(
            AOI(x=x, y=y, width=width, height=height, line=line, part=part, image=row[pos["image"]], token=token)
        )
    return aois


def save_aois_csv(aois: Sequence[AOI], path: Union[str, Path]) -> None:
    Path(path).write_text(aois_to_csv(aois), encoding="utf-8")


def load_aois_csv(path: Union[str, Path]) -> list[AOI]:
    return aois_from_csv(Path(path).read_text(encoding="utf-8"))
