"""Session service tests over the HTTP API (in-process TestClient)."""
import json

import pytest
from fastapi.testclient import TestClient

from cgascene.gateway import MockProvider
from cgascene.service import SessionEngine, create_app
from importlib import resources


def demo_fixture_path() -> str:
    return str(resources.files("cgascene.data.fixtures").joinpath("session_demo_mock.json"))


@pytest.fixture()
def client():
    return TestClient(create_app(SessionEngine()))


@pytest.fixture()
def llm_client():
    engine = SessionEngine(provider=MockProvider(demo_fixture_path()))
    return TestClient(create_app(engine))


def centers(scene_doc):
    return {o["name"]: tuple(o["center"]) for o in scene_doc["objects"]}


def test_create_session_default_scene(client):
    response = client.post("/sessions", json={"strategy": "simple_cga"})
    assert response.status_code == 201
    body = response.json()
    assert len(body["objects"] if "objects" in body else body["scene"]["objects"]) == 5
    assert body["id"]


def test_create_session_unknown_strategy(client):
    response = client.post("/sessions", json={"strategy": "quantum"})
    assert response.status_code == 422


def test_two_sessions_are_distinct(client):
    a = client.post("/sessions", json={}).json()["id"]
    b = client.post("/sessions", json={}).json()["id"]
    assert a != b


def test_fig2_template_instruction(client):
    session = client.post("/sessions", json={}).json()
    response = client.post(
        f"/sessions/{session['id']}/instructions",
        json={"instruction": "Move the red sphere next to the blue cube, to its left side."},
    )
    body = response.json()
    assert body["ok"] is True
    assert body["step"]["route"] == "template"
    assert body["step"]["matched_keyword"] in ("next to", "left")
    assert centers(body["scene"])["RedSphere"] == (2.0, 0.0, 0.0)
    scene = client.get(f"/sessions/{session['id']}/scene").json()
    assert centers(scene)["RedSphere"] == (2.0, 0.0, 0.0)


def test_fig3_stacking_instruction(client):
    session = client.post("/sessions", json={}).json()
    body = client.post(
        f"/sessions/{session['id']}/instructions",
        json={"instruction": "Place the green sphere on top of the blue cube."},
    ).json()
    assert body["ok"] is True
    assert centers(body["scene"])["GreenSphere"] == pytest.approx((4.0, 1.7, 0.0), abs=1e-9)


def test_failed_instruction_leaves_scene_unchanged(client):
    session = client.post("/sessions", json={}).json()
    before = client.get(f"/sessions/{session['id']}/scene").json()
    body = client.post(
        f"/sessions/{session['id']}/instructions",
        json={"instruction": "Arrange the objects artistically"},
    ).json()
    assert body["ok"] is False  # no keyword, no provider -> template fallback fails
    after = client.get(f"/sessions/{session['id']}/scene").json()
    assert before == after
    history = client.get(f"/sessions/{session['id']}/history").json()
    assert history["steps"] == []


def test_unknown_session_404(client):
    assert client.get("/sessions/nope/scene").status_code == 404
    assert client.post("/sessions/nope/instructions",
                       json={"instruction": "x"}).status_code == 404
    assert client.post("/sessions/nope/undo").status_code == 404


def test_history_and_undo(client):
    session = client.post("/sessions", json={}).json()
    sid = session["id"]
    client.post(f"/sessions/{sid}/instructions",
                json={"instruction": "Move the red sphere next to the blue cube"})
    client.post(f"/sessions/{sid}/instructions",
                json={"instruction": "Scale the red sphere by 2"})
    history = client.get(f"/sessions/{sid}/history").json()["steps"]
    assert len(history) == 2
    assert history[0]["index"] == 0
    assert history[1]["after_revision"] > history[0]["after_revision"]
    undone = client.post(f"/sessions/{sid}/undo").json()["scene"]
    assert centers(undone)["RedSphere"] == (2.0, 0.0, 0.0)
    assert len(client.get(f"/sessions/{sid}/history").json()["steps"]) == 1
    client.post(f"/sessions/{sid}/undo")
    assert client.post(f"/sessions/{sid}/undo").status_code == 409  # empty history


def test_fig4_three_step_sequence(llm_client):
    """Template, template, then mock-LLM step; each builds on the last."""
    session = llm_client.post("/sessions", json={"strategy": "simple_cga"}).json()
    sid = session["id"]

    body = llm_client.post(f"/sessions/{sid}/instructions", json={
        "instruction": "Move the red sphere next to the blue cube on its left."}).json()
    assert body["ok"] and body["step"]["route"] == "template"
    assert centers(body["scene"])["RedSphere"] == (2.0, 0.0, 0.0)

    body = llm_client.post(f"/sessions/{sid}/instructions", json={
        "instruction": "Stack the green sphere on top of the red sphere."}).json()
    assert body["ok"] and body["step"]["route"] == "template"
    assert centers(body["scene"])["GreenSphere"] == pytest.approx((2.0, 1.7, 0.0), abs=1e-9)

    body = llm_client.post(f"/sessions/{sid}/instructions", json={
        "instruction": "Move the yellow cube in front of the blue cube."}).json()
    assert body["ok"] and body["step"]["route"] == "llm"
    assert centers(body["scene"])["YellowCube"] == pytest.approx((4.0, 0.0, 2.0), abs=1e-9)
    assert body["step"]["tokens"]["completion"] > 0

    history = llm_client.get(f"/sessions/{sid}/history").json()["steps"]
    assert [s["route"] for s in history] == ["template", "template", "llm"]


def test_scene_fixture_override(client):
    fixture = {
        "version": 1, "revision": 0,
        "objects": [{"name": "Solo", "shape": "cube", "color": "red",
                     "center": [1, 2, 3], "size": 2.0}],
    }
    session = client.post("/sessions", json={"strategy": "simple_cga",
                                             "fixture": fixture}).json()
    scene = client.get(f"/sessions/{session['id']}/scene").json()
    assert centers(scene) == {"Solo": (1.0, 2.0, 3.0)}


def test_replay_determinism(client):
    instructions = [
        "Move the red sphere next to the blue cube on its left.",
        "Stack the green sphere on top of the red sphere.",
        "Scale the purple sphere by 2",
    ]
    finals = []
    for _ in range(2):
        sid = client.post("/sessions", json={}).json()["id"]
        for text in instructions:
            body = client.post(f"/sessions/{sid}/instructions",
                               json={"instruction": text}).json()
            assert body["ok"], body
        finals.append(json.dumps(client.get(f"/sessions/{sid}/scene").json(), sort_keys=True))
    assert finals[0] == finals[1]


def test_service_matches_direct_executor(client):
    """Service-path execution equals the library-path execution exactly."""
    from cgascene.cga_expr import execute_request, parse_request
    from cgascene.scene import default_scene
    sid = client.post("/sessions", json={}).json()["id"]
    body = client.post(f"/sessions/{sid}/instructions", json={
        "instruction": "Place the green sphere on top of the blue cube."}).json()
    emitted = json.loads(body["step"]["request_text"])
    direct = execute_request(default_scene(), parse_request(emitted)).scene
    got = centers(body["scene"])["GreenSphere"]
    want = direct.get("GreenSphere").center
    assert got == pytest.approx(want, abs=1e-12)


def test_journal_written(tmp_path):
    engine = SessionEngine(journal_path=str(tmp_path / "journal.jsonl"))
    client = TestClient(create_app(engine))
    sid = client.post("/sessions", json={}).json()["id"]
    client.post(f"/sessions/{sid}/instructions",
                json={"instruction": "Move the red sphere next to the blue cube"})
    lines = (tmp_path / "journal.jsonl").read_text().strip().splitlines()
    assert len(lines) == 1
    entry = json.loads(lines[0])
    assert entry["session"] == sid
    assert entry["route"] == "template"
