import pytest
from fastapi.testclient import TestClient

from sketchduel.game import MatchConfig
from sketchduel.rooms import LobbyService
from sketchduel.service import create_app


@pytest.fixture
def client(tiny_index, tiny_budgets):
    defaults = MatchConfig(rounds_to_play=1, round_seconds=30.0,
                           confidence_threshold=0.95,
                           category_words=list(tiny_index.categories))
    service = LobbyService(tiny_index, tiny_budgets, defaults, rng_seed=77)
    app = create_app(service)
    with TestClient(app) as client:
        yield client


def pump_until(ws, msg_type, limit=80, where=None):
    """Read frames until one of the wanted type (and predicate) arrives."""
    seen = []
    for _ in range(limit):
        msg = ws.receive_json()
        seen.append(msg)
        if msg["type"] == msg_type and (where is None or where(msg)):
            return msg, seen
    raise AssertionError(f"no {msg_type!r} in {len(seen)} frames: "
                         f"{[m['type'] for m in seen]}")


def test_healthz(client):
    resp = client.get("/healthz")
    assert resp.status_code == 200
    body = resp.json()
    assert body["status"] == "ok"
    assert body["categories"] == 4


def test_info_reports_defaults(client):
    body = client.get("/info").json()
    assert body["rounds_to_play"] == 1
    assert body["confidence_threshold"] == 0.95
    assert set(body["categories"]) == {"line", "circle", "square", "tshape"}


def test_bad_frame_gets_error(client):
    with client.websocket_connect("/ws") as ws:
        ws.send_text("this is not json")
        msg = ws.receive_json()
        assert msg["type"] == "error"
        assert msg["code"] == "bad_message"


def test_full_match_over_websocket(client):
    with client.websocket_connect("/ws") as ws1, \
            client.websocket_connect("/ws") as ws2:
        ws1.send_json({"type": "create_room"})
        room = ws1.receive_json()["room"]

        ws1.send_json({"type": "join", "room": room, "name": "Ada"})
        joined = ws1.receive_json()
        assert joined["type"] == "joined"
        my_id = {ws1: joined["player_id"]}

        ws2.send_json({"type": "join", "room": room, "name": "Bo"})
        update = ws1.receive_json()
        joined2 = ws2.receive_json()
        assert update["player_id"] == joined2["player_id"]
        my_id[ws2] = joined2["player_id"]

        ws1.send_json({"type": "start_match"})
        start1, _ = pump_until(ws1, "round_start")
        start2, _ = pump_until(ws2, "round_start")
        assert start1 == start2
        role1 = ws1.receive_json()
        role2 = ws2.receive_json()
        assert {role1["role"], role2["role"]} == {"sketcher", "guesser"}

        sketcher_ws, guesser_ws = (ws1, ws2) if role1["role"] == "sketcher" \
            else (ws2, ws1)
        word = sketcher_ws.receive_json()
        assert word["type"] == "code_word"

        sketcher_ws.send_json({"type": "stroke",
                               "points": [[10, 10], [120, 30]]})
        stroke, _ = pump_until(guesser_ws, "stroke")
        assert stroke["points"] == [[10.0, 10.0], [120.0, 30.0]]
        ink, _ = pump_until(guesser_ws, "ink_update")
        assert ink["used"] == pytest.approx(111.8033988749895)
        conf, _ = pump_until(guesser_ws, "nn_confidence")
        assert 0.0 <= conf["confidence"] <= 1.0

        guesser_ws.send_json({"type": "guess", "word": word["word"]})
        result, _ = pump_until(guesser_ws, "guess_result",
                               where=lambda m: m["by"] == my_id[guesser_ws])
        assert result["correct"] is True
        end, _ = pump_until(guesser_ws, "round_end")
        assert end["winner"] == "humans"
        assert end["word"] == word["word"]
        final, _ = pump_until(guesser_ws, "match_end")
        assert final["score"] == {"humans": 1, "nn": 0}
        pump_until(sketcher_ws, "match_end")


def test_heartbeat_ping_and_eviction(tiny_index, tiny_budgets):
    defaults = MatchConfig(rounds_to_play=1,
                           category_words=list(tiny_index.categories))
    service = LobbyService(tiny_index, tiny_budgets, defaults, rng_seed=5)
    app = create_app(service, heartbeat_seconds=0.15)
    with TestClient(app) as client:
        with client.websocket_connect("/ws") as ws:
            msg = ws.receive_json()
            assert msg["type"] == "ping"
            ws.send_json({"type": "pong"})      # answered: stays alive
            msg = ws.receive_json()
            assert msg["type"] == "ping"
            # Stop answering; after two unanswered pings the server closes.
            with pytest.raises(Exception):
                for _ in range(10):
                    ws.receive_json()
