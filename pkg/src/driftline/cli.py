"""Batch command line: correct, generate, distort, filter, analyze, convert,
detect AOIs, and serve the HTTP API."""

from __future__ import annotations

import concurrent.futures
import json
import sys
from pathlib import Path
from typing import Optional

import click

from . import analysis, filters, synth, trial_io
from .algorithms import ALGORITHMS, AlgoParams, correct
from .aoi import AoiParams, binarize, detect_aois, load_aois_csv, save_aois_csv
from .model import LineSet, Trial, word_centers


def _parse_params(pairs: tuple[str, ...]) -> AlgoParams:
    overrides = {}
    for pair in pairs:
        if "=" not in pair:
            raise click.UsageError(f"--params expects key=value, got {pair!r}")
        key, _, value = pair.partition("=")
        overrides[key.strip()] = value.strip()
    try:
        return AlgoParams().with_overrides(overrides)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None


def _out_path(input_path: Path, suffix: str, out_dir: Optional[str]) -> Path:
    stem = input_path.name
    for ext in (".json", ".csv", ".asc", ".png", ".jpg", ".jpeg"):
        if stem.endswith(ext):
            stem = stem[: -len(ext)]
            break
    directory = Path(out_dir) if out_dir else input_path.parent
    directory.mkdir(parents=True, exist_ok=True)
    return directory / f"{stem}{suffix}"


def _for_each(paths: tuple[str, ...], jobs: int, fn) -> int:
    """Run fn over the files, reporting per-file errors; returns the exit code."""
    failures = 0
    if jobs > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = {pool.submit(fn, Path(p)): p for p in paths}
            for future in concurrent.futures.as_completed(futures):
                try:
                    future.result()
                except Exception as exc:
                    failures += 1
                    click.echo(f"error: {futures[future]}: {exc}", err=True)
    else:
        for p in paths:
            try:
                fn(Path(p))
            except Exception as exc:
                failures += 1
                click.echo(f"error: {p}: {exc}", err=True)
    return 1 if failures else 0


@click.group()
def main() -> None:
    """Drift correction and analysis for reading eye-tracking data."""


@main.command("correct")
@click.option("--algorithm", required=True, type=click.Choice(ALGORITHMS), help="Correction algorithm.")
@click.option("--aois", "aois_path", required=True, type=click.Path(exists=True), help="AOI CSV file.")
@click.option("--params", "params_pairs", multiple=True, help="Algorithm knob as key=value (repeatable).")
@click.option("--out-dir", default=None, help="Output directory (default: next to each input).")
@click.option("--jobs", default=1, show_default=True, help="Parallel workers over input files.")
@click.argument("trials", nargs=-1, required=True, type=click.Path(exists=True))
def correct_cmd(algorithm, aois_path, params_pairs, out_dir, jobs, trials) -> None:
    """Correct trial files; writes <stem>.corrected.json and <stem>.lines.json."""
    params = _parse_params(params_pairs)
    aois = load_aois_csv(aois_path)
    lines = LineSet.from_aois(aois)
    words = word_centers(aois)

    def run(path: Path) -> None:
        trial, extras = trial_io.load_trial_json(path)
        corr = correct(algorithm, trial.fixations, lines, words, params)
        corrected = trial.with_fixations(corr.corrected)
        trial_io.save_trial_json(corrected, _out_path(path, ".corrected.json", out_dir), extras)
        sidecar = {"algorithm": algorithm, "assigned_lines": list(corr.assigned_line), "flags": list(corr.flags)}
        _out_path(path, ".lines.json", out_dir).write_text(json.dumps(sidecar) + "\n", encoding="utf-8")

    sys.exit(_for_each(trials, jobs, run))


@main.command("generate")
@click.option("--mode", required=True, type=click.Choice(["basic", "skip", "inline-regress", "between-regress"]))
@click.option("--aois", "aois_path", required=True, type=click.Path(exists=True))
@click.option("--k", default=0.9, show_default=True, help="Skip scale constant.")
@click.option("--lambda", "lam", default=0.4, show_default=True, help="Skip decay per letter.")
@click.option("--letter-width", default=10.0, show_default=True, help="Pixels per letter.")
@click.option("--dispersion", default=0.0, show_default=True, help="Placement noise std-dev in px.")
@click.option("--regression-prob", default=0.2, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--n", "count", default=1, show_default=True, help="Number of trials to generate.")
@click.option("--out-dir", default=".", show_default=True)
def generate_cmd(mode, aois_path, k, lam, letter_width, dispersion, regression_prob, seed, count, out_dir) -> None:
    """Generate synthetic trials with ground-truth line labels embedded."""
    aois = load_aois_csv(aois_path)
    skip_model = synth.SkipModel(k=k, lam=lam, letter_width=letter_width)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for i in range(count):
        cfg = synth.GenConfig(dispersion=dispersion, regression_prob=regression_prob, seed=seed + i)
        if mode == "basic":
            gen = synth.generate_basic(aois, cfg, letter_width=letter_width)
        elif mode == "skip":
            gen = synth.generate_skip(aois, skip_model, cfg)
        elif mode == "inline-regress":
            gen = synth.generate_within_line_regressions(aois, skip_model, cfg)
        else:
            gen = synth.generate_between_line_regressions(aois, skip_model, cfg)
        path = out / f"trial_{seed + i:04d}.json"
        trial_io.save_trial_json(gen.trial, path, {"ground_truth_lines": list(gen.ground_truth_lines)})
        click.echo(str(path))


@main.command("distort")
@click.option("--kind", required=True, type=click.Choice(synth.DISTORTION_KINDS))
@click.option("--magnitude", required=True, type=float)
@click.option("--seed", default=0, show_default=True, help="Seed for the noise kind.")
@click.option("--out-dir", default=None)
@click.argument("trials", nargs=-1, required=True, type=click.Path(exists=True))
def distort_cmd(kind, magnitude, seed, out_dir, trials) -> None:
    """Apply a distortion; writes <stem>.distorted.json."""
    spec = synth.DistortionSpec(kind=kind, magnitude=magnitude, seed=seed)

    def run(path: Path) -> None:
        trial, extras = trial_io.load_trial_json(path)
        trial_io.save_trial_json(synth.distort(trial, spec), _out_path(path, ".distorted.json", out_dir), extras)

    sys.exit(_for_each(trials, 1, run))


@main.command("filter")
@click.option("--spec", "spec_text", required=True, help='Chain like "duration_below=80,duration_above=800".')
@click.option("--out-dir", default=None)
@click.argument("trials", nargs=-1, required=True, type=click.Path(exists=True))
def filter_cmd(spec_text, out_dir, trials) -> None:
    """Apply a filter chain left to right; writes <stem>.filtered.json."""
    try:
        chain = filters.parse_chain(spec_text)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None

    def run(path: Path) -> None:
        trial, extras = trial_io.load_trial_json(path)
        trial_io.save_trial_json(filters.apply_chain(trial, chain), _out_path(path, ".filtered.json", out_dir), extras)

    sys.exit(_for_each(trials, 1, run))


@main.command("analyze")
@click.option("--report", required=True, type=click.Choice(["hit", "metrics", "fixations", "saccades", "accuracy"]))
@click.option("--aois", "aois_path", default=None, type=click.Path(exists=True), help="AOI CSV (hit/metrics).")
@click.option("--lines", "lines_path", default=None, type=click.Path(exists=True),
              help="Assigned-lines sidecar for accuracy (default: <stem>.lines.json).")
@click.option("--truth", "truth_path", default=None, type=click.Path(exists=True),
              help="Trial JSON holding ground_truth_lines (default: the input itself).")
@click.option("--out-dir", default=None)
@click.argument("trials", nargs=-1, required=True, type=click.Path(exists=True))
def analyze_cmd(report, aois_path, lines_path, truth_path, out_dir, trials) -> None:
    """Write per-trial reports; accuracy also prints one line per file."""
    if report in ("hit", "metrics") and not aois_path:
        raise click.UsageError(f"--report {report} requires --aois")
    aois = load_aois_csv(aois_path) if aois_path else []

    def run(path: Path) -> None:
        trial, extras = trial_io.load_trial_json(path)
        if report == "hit":
            text = analysis.hit_rows_to_csv(analysis.hit_test(trial, aois))
        elif report == "metrics":
            text = analysis.metrics_rows_to_csv(analysis.aoi_metrics(trial, aois))
        elif report == "fixations":
            text = analysis.fixation_rows_to_csv(analysis.fixation_rows(trial))
        elif report == "saccades":
            text = analysis.saccade_rows_to_csv(analysis.saccade_rows(trial))
        else:
            corrected = _load_assigned_lines(path, lines_path)
            truth = _load_truth_lines(path, truth_path, extras)
            result = analysis.accuracy(corrected, truth)
            click.echo(f"{path}: accuracy {result.accuracy:.4f} ({result.matching}/{result.total})")
            text = f"total,matching,accuracy\n{result.total},{result.matching},{result.accuracy!r}\n"
        _out_path(path, ".report.csv", out_dir).write_text(text, encoding="utf-8")

    sys.exit(_for_each(trials, 1, run))


def _load_assigned_lines(path: Path, lines_path: Optional[str]) -> list[int]:
    sidecar = Path(lines_path) if lines_path else path.parent / (path.name.replace(".json", "") + ".lines.json")
    if not sidecar.exists() and path.name.endswith(".corrected.json"):
        sidecar = path.parent / (path.name[: -len(".corrected.json")] + ".lines.json")
    if not sidecar.exists():
        raise ValueError(f"no assigned-lines sidecar found for {path} (looked at {sidecar})")
    data = json.loads(sidecar.read_text(encoding="utf-8"))
    return [int(v) for v in data["assigned_lines"]]


def _load_truth_lines(path: Path, truth_path: Optional[str], extras: dict) -> list[int]:
    if truth_path:
        _, truth_extras = trial_io.load_trial_json(truth_path)
        extras = truth_extras
    if "ground_truth_lines" not in extras:
        raise ValueError(f"no ground_truth_lines found for {path}; pass --truth")
    return [int(v) for v in extras["ground_truth_lines"]]


@main.command("convert")
@click.option("--to", "target", required=True, type=click.Choice(["csv", "json"]))
@click.option("--trial-split", default=trial_io.DEFAULT_TRIAL_SPLIT, show_default=True,
              help="Message marker that opens a new trial in ASCII logs.")
@click.option("--eye", default="R", show_default=True, type=click.Choice(["L", "R"]))
@click.option("--out-dir", default=None)
@click.argument("inputs", nargs=-1, required=True, type=click.Path(exists=True))
def convert_cmd(target, trial_split, eye, out_dir, inputs) -> None:
    """Convert between ASCII logs, event CSV, and fixation JSON."""

    def run(path: Path) -> None:
        kind = path.suffix.lower().lstrip(".")
        if kind == "asc":
            parsed = trial_io.parse_ascii(path.read_text(encoding="utf-8"), trial_split, eye)
            multi = len(parsed.trials) > 1
            for trial_id, events in parsed.trials:
                suffix = f"_t{trial_id}" if multi else ""
                if target == "csv":
                    _out_path(path, f"{suffix}.csv", out_dir).write_text(trial_io.to_csv(events), encoding="utf-8")
                else:
                    trial_io.save_trial_json(trial_io.events_to_trial(events), _out_path(path, f"{suffix}.json", out_dir))
        elif kind == "csv":
            if target != "json":
                raise ValueError("csv inputs convert to json only")
            trial, dropped = trial_io.csv_to_trial(path.read_text(encoding="utf-8"))
            if dropped:
                click.echo(f"{path}: dropped {dropped} non-fixation row(s)", err=True)
            trial_io.save_trial_json(trial, _out_path(path, ".json", out_dir))
        elif kind == "json":
            if target != "csv":
                raise ValueError("json inputs convert to csv only")
            trial, _extras = trial_io.load_trial_json(path)
            _out_path(path, ".csv", out_dir).write_text(trial_io.trial_to_csv(trial), encoding="utf-8")
        else:
            raise ValueError(f"unsupported input {path.suffix!r}; supported: .asc, .csv, .json")

    sys.exit(_for_each(inputs, 1, run))


@main.command("aois")
@click.option("--level", default="word", show_default=True, type=click.Choice(["letter", "word", "line"]))
@click.option("--width-threshold", default=8.0, show_default=True)
@click.option("--height-threshold", default=4.0, show_default=True)
@click.option("--out", "out_file", default=None, help="Output CSV (default: <stem>.aois.csv).")
@click.argument("image", type=click.Path(exists=True))
def aois_cmd(level, width_threshold, height_threshold, out_file, image) -> None:
    """Detect AOIs in a stimulus image and write the AOI CSV."""
    params = AoiParams(level=level, width_threshold=width_threshold, height_threshold=height_threshold)
    mask = binarize(image)
    detected = detect_aois(mask, params, image_name=Path(image).name)
    target = Path(out_file) if out_file else _out_path(Path(image), ".aois.csv", None)
    save_aois_csv(detected, target)
    click.echo(f"{target}: {len(detected)} AOIs")


@main.command("serve")
@click.option("--data-dir", required=True, type=click.Path(), envvar="DRIFTLINE_DATA_DIR")
@click.option("--host", default="127.0.0.1", show_default=True, envvar="DRIFTLINE_HOST")
@click.option("--port", default=8000, show_default=True, envvar="DRIFTLINE_PORT")
def serve_cmd(data_dir, host, port) -> None:
    """Run the HTTP API until interrupted."""
    import uvicorn

    from .service import create_app

    Path(data_dir).mkdir(parents=True, exist_ok=True)
    try:
        uvicorn.run(create_app(data_dir), host=host, port=port, log_level="warning")
    except OSError as exc:
        raise click.ClickException(f"could not bind {host}:{port}: {exc}") from None


if __name__ == "__main__":
    main()
