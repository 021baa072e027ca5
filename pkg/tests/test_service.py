from __future__ import annotations

import base64
import io
import json

import numpy as np
import pytest
from fastapi.testclient import TestClient
from PIL import Image

from driftline.aoi import aois_to_csv
from driftline.service import create_app

from .conftest import TWO_LINE_AOIS

TRIAL_BODY = {
    "trial": {"fixations": [[50, 130, 200], [150, 130, 200], [250, 130, 200],
                            [50, 230, 200], [150, 230, 200], [250, 230, 200]],
              "participant": "p1"},
    "aois_csv": aois_to_csv(list(TWO_LINE_AOIS)),
}


@pytest.fixture
def client(tmp_path):
    app = create_app(tmp_path / "data")
    with TestClient(app) as c:
        yield c


def upload(client) -> str:
    resp = client.post("/api/trials", json=TRIAL_BODY)
    assert resp.status_code == 201
    return resp.json()["trial_id"]


def stimulus_png() -> bytes:
    arr = np.full((120, 300), 255, dtype=np.uint8)
    arr[40:60, 20:280] = 0  # one text band
    arr[90:110, 20:280] = 0  # second band
    buf = io.BytesIO()
    Image.fromarray(arr, mode="L").save(buf, format="PNG")
    return buf.getvalue()


class TestTrials:
    def test_upload_returns_201_and_id(self, client):
        trial_id = upload(client)
        assert len(trial_id) == 12

    def test_list_trials_empty_initially(self, client):
        assert client.get("/api/trials").json() == []

    def test_missing_fixations_is_400(self, client):
        resp = client.post("/api/trials", json={"trial": {"nope": 1}, "aois_csv": "x"})
        assert resp.status_code == 400

    def test_malformed_body_is_400(self, client):
        resp = client.post("/api/trials", content=b"{not json", headers={"content-type": "application/json"})
        assert resp.status_code == 400

    def test_upload_with_stimulus_detects_aois(self, client):
        body = {
            "trial": {"fixations": [[30, 50, 100], [150, 50, 100], [30, 100, 100]]},
            "stimulus_png_b64": base64.b64encode(stimulus_png()).decode(),
            "aoi_params": {"level": "line"},
        }
        resp = client.post("/api/trials", json=body)
        assert resp.status_code == 201
        trial_id = resp.json()["trial_id"]
        csv_text = client.get(f"/api/trials/{trial_id}/aois").text
        assert csv_text.splitlines()[0] == "image,line,part,x,y,width,height,token"
        assert len(csv_text.splitlines()) == 3  # header + 2 line AOIs

    def test_blank_stimulus_is_422(self, client):
        blank = io.BytesIO()
        Image.new("L", (50, 50), 255).save(blank, format="PNG")
        body = {
            "trial": {"fixations": [[1, 2, 3]]},
            "stimulus_png_b64": base64.b64encode(blank.getvalue()).decode(),
        }
        assert client.post("/api/trials", json=body).status_code == 422

    def test_stimulus_bytes_round_trip(self, client):
        png = stimulus_png()
        body = {
            "trial": {"fixations": [[1, 2, 3]]},
            "stimulus_png_b64": base64.b64encode(png).decode(),
            "aoi_params": {"level": "word"},
        }
        trial_id = client.post("/api/trials", json=body).json()["trial_id"]
        resp = client.get(f"/api/trials/{trial_id}/stimulus")
        assert resp.status_code == 200
        assert resp.content == png

    def test_no_stimulus_is_404(self, client):
        trial_id = upload(client)
        assert client.get(f"/api/trials/{trial_id}/stimulus").status_code == 404

    def test_persisted_across_app_restart(self, client, tmp_path):
        trial_id = upload(client)
        with TestClient(create_app(tmp_path / "data")) as again:
            listed = again.get("/api/trials").json()
            assert [t["trial_id"] for t in listed] == [trial_id]


class TestCorrect:
    def test_attach_on_stored_trial(self, client):
        trial_id = upload(client)
        resp = client.post("/api/correct", json={"trial_id": trial_id, "algorithm": "attach"})
        assert resp.status_code == 200
        body = resp.json()
        assert body["assigned_lines"] == [1, 1, 1, 2, 2, 2]
        assert body["trial"]["participant"] == "p1"
        ys = [f[1] for f in body["trial"]["fixations"]]
        assert ys == [100, 100, 100, 200, 200, 200]

    def test_unknown_trial_is_404(self, client):
        resp = client.post("/api/correct", json={"trial_id": "missing12345", "algorithm": "attach"})
        assert resp.status_code == 404

    def test_unknown_algorithm_is_400_listing_names(self, client):
        trial_id = upload(client)
        resp = client.post("/api/correct", json={"trial_id": trial_id, "algorithm": "snap"})
        assert resp.status_code == 400
        assert "attach" in resp.json()["error"]

    def test_warp_with_line_level_aois_is_422(self, client):
        body = dict(TRIAL_BODY)
        body["aoi_level"] = "line"
        trial_id = client.post("/api/trials", json=body).json()["trial_id"]
        resp = client.post("/api/correct", json={"trial_id": trial_id, "algorithm": "warp"})
        assert resp.status_code == 422

    def test_params_override(self, client):
        trial_id = upload(client)
        resp = client.post(
            "/api/correct",
            json={"trial_id": trial_id, "algorithm": "chain", "params": {"chain_y_dist": "64"}},
        )
        assert resp.status_code == 200


class TestSessions:
    def create(self, client, algorithm="attach"):
        trial_id = upload(client)
        resp = client.post("/api/sessions", json={"trial_id": trial_id, "algorithm": algorithm})
        assert resp.status_code == 201
        return resp.json()["session_id"]

    def test_state_shape(self, client):
        session_id = self.create(client)
        state = client.get(f"/api/sessions/{session_id}").json()["state"]
        assert state["current"] == 0
        assert len(state["fixations"]) == 6
        assert state["line_ys"] == [100, 200]
        assert state["current_suggestion"] is not None

    def test_unknown_session_404(self, client):
        assert client.get("/api/sessions/nope").status_code == 404

    def test_accept_all_equals_automated_correct(self, client):
        trial_id = upload(client)
        session_id = client.post(
            "/api/sessions", json={"trial_id": trial_id, "algorithm": "warp"}
        ).json()["session_id"]
        for _ in range(6):
            resp = client.post(f"/api/sessions/{session_id}/events", json={"kind": "accept"})
            assert resp.status_code == 200
        export = client.get(f"/api/sessions/{session_id}/export").json()
        automated = client.post("/api/correct", json={"trial_id": trial_id, "algorithm": "warp"}).json()
        assert export["trial"] == automated["trial"]
        assert export["trial_file"] == automated["trial_file"]

    def test_undo_after_move_restores_state(self, client):
        session_id = self.create(client)
        before = client.get(f"/api/sessions/{session_id}").json()["state"]
        client.post(f"/api/sessions/{session_id}/events", json={"kind": "move", "x": 10, "y": 190})
        client.post(f"/api/sessions/{session_id}/events", json={"kind": "undo"})
        after = client.get(f"/api/sessions/{session_id}").json()["state"]
        assert after["anchors"] == before["anchors"]
        assert after["suggestions"] == before["suggestions"]
        assert after["current"] == before["current"]

    def test_boundary_event_surfaces_warning(self, client):
        session_id = self.create(client)
        resp = client.post(f"/api/sessions/{session_id}/events", json={"kind": "line_n", "n": 9})
        assert resp.status_code == 200
        assert "warning" in resp.json()

    def test_invalid_kind_is_400(self, client):
        session_id = self.create(client)
        resp = client.post(f"/api/sessions/{session_id}/events", json={"kind": "explode"})
        assert resp.status_code == 400

    def test_event_on_finished_session_is_400(self, client):
        session_id = self.create(client)
        client.post(f"/api/sessions/{session_id}/events", json={"kind": "finish"})
        resp = client.post(f"/api/sessions/{session_id}/events", json={"kind": "accept"})
        assert resp.status_code == 400

    def test_seek_moves_without_anchoring(self, client):
        session_id = self.create(client)
        resp = client.post(f"/api/sessions/{session_id}/events", json={"kind": "seek", "index": 4})
        state = resp.json()["state"]
        assert state["current"] == 4
        assert state["anchors"] == {}

    def test_validator_endpoint(self, client):
        session_id = self.create(client)
        client.post(f"/api/sessions/{session_id}/events", json={"kind": "accept"})
        resp = client.get(f"/api/sessions/{session_id}/validate")
        assert resp.json() == {"ok": True, "problems": []}

    def test_export_includes_log(self, client):
        session_id = self.create(client)
        client.post(f"/api/sessions/{session_id}/events", json={"kind": "accept"})
        export = client.get(f"/api/sessions/{session_id}/export").json()
        kinds = [e["kind"] for e in export["log"]]
        assert kinds[0] == "session_start"
        assert "accept" in kinds

    def test_concurrent_mutation_rejected_with_409(self, client):
        session_id = self.create(client)
        record = client.app.state.store.get_session(session_id)
        assert record.lock.acquire(blocking=False)  # simulate an in-flight mutation
        try:
            resp = client.post(f"/api/sessions/{session_id}/events", json={"kind": "accept"})
            assert resp.status_code == 409
        finally:
            record.lock.release()
        assert client.post(f"/api/sessions/{session_id}/events", json={"kind": "accept"}).status_code == 200
