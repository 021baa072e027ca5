"""HTTP/JSON API over trials, automated correction, and assisted sessions.

Records persist as one JSON file each under the data directory; stimulus
images are stored alongside as raw bytes. Session mutations are serialized
per session; a second in-flight mutation is rejected with 409.
"""

from __future__ import annotations

import base64
import binascii
import datetime as dt
import io
import json
import secrets
import string
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse, Response

from . import trial_io
from .algorithms import ALGORITHMS, AlgoParams, correct
from .aoi import AoiParams, aois_from_csv, aois_to_csv, binarize, detect_aois
from .model import AOI, LineSet, Trial, word_centers
from .session import Session, events_to_json

_ID_ALPHABET = string.ascii_lowercase + string.digits


def new_id() -> str:
    return "".join(secrets.choice(_ID_ALPHABET) for _ in range(12))


@dataclass
class TrialRecord:
    id: str
    trial: Trial
    extras: dict[str, Any]
    aois: list[AOI]
    aoi_level: str
    stimulus: Optional[bytes]
    created_at: str


@dataclass
class SessionRecord:
    id: str
    trial_id: str
    session: Session
    lock: threading.Lock = field(default_factory=threading.Lock)


class ApiError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status
        self.message = message


class Store:
    """File-backed record store with lazy loading."""

    def __init__(self, data_dir: Path):
        self.data_dir = Path(data_dir)
        (self.data_dir / "trials").mkdir(parents=True, exist_ok=True)
        (self.data_dir / "sessions").mkdir(parents=True, exist_ok=True)
        (self.data_dir / "stimuli").mkdir(parents=True, exist_ok=True)
        self._trials: dict[str, TrialRecord] = {}
        self._sessions: dict[str, SessionRecord] = {}
        self._lock = threading.Lock()

    # -- trials --------------------------------------------------------------

    def put_trial(self, record: TrialRecord) -> None:
        with self._lock:
            self._trials[record.id] = record
        payload = {
            "id": record.id,
            "trial": json.loads(trial_io.dumps_trial(record.trial, record.extras)),
            "aois_csv": aois_to_csv(record.aois),
            "aoi_level": record.aoi_level,
            "created_at": record.created_at,
            "has_stimulus": record.stimulus is not None,
        }
        (self.data_dir / "trials" / f"{record.id}.json").write_text(json.dumps(payload), encoding="utf-8")
        if record.stimulus is not None:
            (self.data_dir / "stimuli" / f"{record.id}.png").write_bytes(record.stimulus)

    def get_trial(self, trial_id: str) -> TrialRecord:
        with self._lock:
            if trial_id in self._trials:
                return self._trials[trial_id]
        path = self.data_dir / "trials" / f"{trial_id}.json"
        if not path.exists():
            raise ApiError(404, f"unknown trial {trial_id!r}")
        payload = json.loads(path.read_text(encoding="utf-8"))
        trial, extras = trial_io.loads_trial(json.dumps(payload["trial"]))
        stim_path = self.data_dir / "stimuli" / f"{trial_id}.png"
        record = TrialRecord(
            id=payload["id"],
            trial=trial,
            extras=extras,
            aois=aois_from_csv(payload["aois_csv"]),
            aoi_level=payload.get("aoi_level", "word"),
            stimulus=stim_path.read_bytes() if stim_path.exists() else None,
            created_at=payload["created_at"],
        )
        with self._lock:
            self._trials[trial_id] = record
        return record

    def list_trials(self) -> list[dict[str, Any]]:
        with self._lock:
            known = set(self._trials)
        for path in (self.data_dir / "trials").glob("*.json"):
            if path.stem not in known:
                self.get_trial(path.stem)
        with self._lock:
            return [
                {"trial_id": r.id, "created_at": r.created_at, "n_fixations": len(r.trial), "n_aois": len(r.aois)}
                for r in sorted(self._trials.values(), key=lambda r: r.created_at)
            ]

    # -- sessions -------------------------------------------------------------

    def put_session(self, record: SessionRecord) -> None:
        with self._lock:
            self._sessions[record.id] = record
        self.persist_session(record)

    def persist_session(self, record: SessionRecord) -> None:
        # Undo history stays in memory; the file is an inspectable snapshot.
        payload = {
            "id": record.id,
            "trial_id": record.trial_id,
            "state": record.session.state(),
            "log": events_to_json(record.session.log),
            "last_modified": _now(),
        }
        (self.data_dir / "sessions" / f"{record.id}.json").write_text(json.dumps(payload), encoding="utf-8")

    def get_session(self, session_id: str) -> SessionRecord:
        with self._lock:
            if session_id in self._sessions:
                return self._sessions[session_id]
        raise ApiError(404, f"unknown session {session_id!r}")


def _now() -> str:
    return dt.datetime.now(dt.timezone.utc).isoformat()


async def _json_body(request: Request) -> dict[str, Any]:
    try:
        body = await request.json()
    except json.JSONDecodeError:
        raise ApiError(400, "request body is not valid JSON") from None
    if not isinstance(body, dict):
        raise ApiError(400, "request body must be a JSON object")
    return body


def _algo_params(raw: Optional[dict[str, Any]]) -> AlgoParams:
    if not raw:
        return AlgoParams()
    try:
        return AlgoParams().with_overrides(raw)
    except (ValueError, TypeError) as exc:
        raise ApiError(400, f"bad params: {exc}") from None


def _require_algorithm(body: dict[str, Any]) -> str:
    algorithm = body.get("algorithm")
    if algorithm not in ALGORITHMS:
        raise ApiError(400, f"unknown algorithm {algorithm!r}; valid: {', '.join(ALGORITHMS)}")
    return algorithm


def _geometry(record: TrialRecord) -> tuple[LineSet, list[tuple[float, float]]]:
    if not record.aois:
        raise ApiError(422, "trial has no AOIs")
    return LineSet.from_aois(record.aois), word_centers(record.aois)


def _check_warp_words(algorithm: str, record: TrialRecord) -> None:
    if algorithm.startswith("warp") and record.aoi_level == "line":
        raise ApiError(422, f"{algorithm} needs word-level AOIs, trial has line-level only")


def create_app(data_dir: str | Path) -> FastAPI:
    store = Store(Path(data_dir))
    app = FastAPI(title="driftline")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    app.state.store = store

    @app.exception_handler(ApiError)
    async def handle_api_error(_req: Request, exc: ApiError) -> JSONResponse:
        return JSONResponse(status_code=exc.status, content={"error": exc.message})

    @app.get("/api/trials")
    async def list_trials() -> JSONResponse:
        return JSONResponse(store.list_trials())

    @app.post("/api/trials")
    async def create_trial(request: Request) -> JSONResponse:
        body = await _json_body(request)
        if "trial" not in body:
            raise ApiError(400, 'payload must contain a "trial" object')
        try:
            trial, extras = trial_io.loads_trial(json.dumps(body["trial"]))
        except ValueError as exc:
            raise ApiError(400, str(exc)) from None

        stimulus: Optional[bytes] = None
        aoi_level = "word"
        if body.get("aois_csv"):
            try:
                aois = aois_from_csv(body["aois_csv"])
            except ValueError as exc:
                raise ApiError(400, str(exc)) from None
            aoi_level = body.get("aoi_level", "word")
        elif body.get("stimulus_png_b64"):
            try:
                stimulus = base64.b64decode(body["stimulus_png_b64"], validate=True)
            except (binascii.Error, ValueError):
                raise ApiError(400, "stimulus_png_b64 is not valid base64") from None
            raw = body.get("aoi_params") or {}
            try:
                params = AoiParams(
                    level=raw.get("level", "word"),
                    width_threshold=float(raw.get("width_threshold", 8.0)),
                    height_threshold=float(raw.get("height_threshold", 4.0)),
                )
                mask = binarize(_decode_image(stimulus))
            except ValueError as exc:
                raise ApiError(400, str(exc)) from None
            aois = detect_aois(mask, params, image_name=body.get("stimulus_name", "stimulus.png"))
            if not aois:
                raise ApiError(422, "AOI detection found no text lines in the stimulus")
            aoi_level = params.level
        else:
            raise ApiError(400, 'payload must contain "aois_csv" or "stimulus_png_b64"')

        record = TrialRecord(
            id=new_id(), trial=trial, extras=extras, aois=aois, aoi_level=aoi_level,
            stimulus=stimulus, created_at=_now(),
        )
        store.put_trial(record)
        return JSONResponse(status_code=201, content={"trial_id": record.id})

    @app.get("/api/trials/{trial_id}/stimulus")
    async def get_stimulus(trial_id: str) -> Response:
        record = store.get_trial(trial_id)
        if record.stimulus is None:
            raise ApiError(404, "trial has no stored stimulus")
        return Response(content=record.stimulus, media_type="image/png")

    @app.get("/api/trials/{trial_id}/aois")
    async def get_aois(trial_id: str) -> PlainTextResponse:
        record = store.get_trial(trial_id)
        return PlainTextResponse(aois_to_csv(record.aois), media_type="text/csv")

    @app.post("/api/correct")
    async def correct_trial(request: Request) -> JSONResponse:
        body = await _json_body(request)
        algorithm = _require_algorithm(body)
        record = store.get_trial(str(body.get("trial_id")))
        params = _algo_params(body.get("params"))
        lines, words = _geometry(record)
        _check_warp_words(algorithm, record)
        try:
            corr = correct(algorithm, record.trial.fixations, lines, words, params)
        except ValueError as exc:
            raise ApiError(422, str(exc)) from None
        corrected = record.trial.with_fixations(corr.corrected)
        return JSONResponse(
            {
                "trial": json.loads(trial_io.dumps_trial(corrected, record.extras)),
                "assigned_lines": list(corr.assigned_line),
                "flags": list(corr.flags),
                "trial_file": trial_io.dumps_trial(corrected, record.extras) + "\n",
            }
        )

    @app.post("/api/sessions")
    async def create_session(request: Request) -> JSONResponse:
        body = await _json_body(request)
        algorithm = _require_algorithm(body)
        record = store.get_trial(str(body.get("trial_id")))
        params = _algo_params(body.get("params"))
        lines, words = _geometry(record)
        _check_warp_words(algorithm, record)
        try:
            session = Session(record.trial, lines, words, algorithm, params)
        except ValueError as exc:
            raise ApiError(422, str(exc)) from None
        rec = SessionRecord(id=new_id(), trial_id=record.id, session=session)
        store.put_session(rec)
        return JSONResponse(status_code=201, content={"session_id": rec.id, "state": _state(rec)})

    @app.get("/api/sessions/{session_id}")
    async def get_session(session_id: str) -> JSONResponse:
        rec = store.get_session(session_id)
        return JSONResponse({"state": _state(rec)})

    @app.get("/api/sessions/{session_id}/validate")
    async def validate_session(session_id: str) -> JSONResponse:
        rec = store.get_session(session_id)
        problems = rec.session.validate()
        return JSONResponse({"ok": not problems, "problems": problems})

    @app.post("/api/sessions/{session_id}/events")
    async def post_event(session_id: str, request: Request) -> JSONResponse:
        body = await _json_body(request)
        rec = store.get_session(session_id)
        kind = body.get("kind")
        if not rec.lock.acquire(blocking=False):
            raise ApiError(409, "another mutation is in flight for this session")
        try:
            warning = _apply_event(rec.session, kind, body)
            store.persist_session(rec)
        finally:
            rec.lock.release()
        payload: dict[str, Any] = {"state": _state(rec)}
        if warning:
            payload["warning"] = warning
        return JSONResponse(payload)

    @app.get("/api/sessions/{session_id}/export")
    async def export_session(session_id: str) -> JSONResponse:
        rec = store.get_session(session_id)
        record = store.get_trial(rec.trial_id)
        trial, log = rec.session.export()
        log_json = events_to_json(log)
        return JSONResponse(
            {
                "trial": json.loads(trial_io.dumps_trial(trial, record.extras)),
                "log": log_json,
                "trial_file": trial_io.dumps_trial(trial, record.extras) + "\n",
                "log_file": json.dumps(log_json) + "\n",
            }
        )

    return app


def _decode_image(data: bytes):
    from PIL import Image

    try:
        return Image.open(io.BytesIO(data))
    except Exception:
        raise ValueError("could not decode stimulus image (PNG or JPEG expected)") from None


def _state(rec: SessionRecord) -> dict[str, Any]:
    state = rec.session.state()
    state["session_id"] = rec.id
    state["trial_id"] = rec.trial_id
    return state


def _apply_event(session: Session, kind: Any, body: dict[str, Any]) -> Optional[str]:
    """Apply one UI event; returns a warning message for no-op boundaries."""
    if session.finished and kind != "undo":
        raise ApiError(400, "session is finished")
    before = len(session.log)

    if kind == "accept":
        session.accept()
    elif kind in ("move", "manual_move"):
        try:
            x, y = float(body["x"]), float(body["y"])
        except (KeyError, TypeError, ValueError):
            raise ApiError(400, "move event needs numeric x and y") from None
        try:
            session.manual_move(x, y)
        except ValueError as exc:
            raise ApiError(400, str(exc)) from None
    elif kind == "line_above":
        session.line_above()
    elif kind == "line_below":
        session.line_below()
    elif kind == "line_n":
        try:
            n = int(body["n"])
        except (KeyError, TypeError, ValueError):
            raise ApiError(400, "line_n event needs an integer n") from None
        session.line_n(n)
    elif kind == "back":
        session.back()
    elif kind == "next":
        session.next()
    elif kind == "undo":
        session.undo()
    elif kind == "finish":
        session.finish()
    elif kind == "seek":
        try:
            index = int(body["index"])
        except (KeyError, TypeError, ValueError):
            raise ApiError(400, "seek event needs an integer index") from None
        index = max(0, min(index, len(session.trial)))
        while session.current < index:
            session.next()
        while session.current > index:
            session.back()
    else:
        raise ApiError(400, f"unknown event kind {kind!r}")

    new_events = session.log[before:]
    if new_events and new_events[-1].warning:
        return f"{new_events[-1].kind} was a no-op at index {new_events[-1].index}"
    return None
