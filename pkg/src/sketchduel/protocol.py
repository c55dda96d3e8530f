"""Wire protocol: pydantic schemas for inbound frames and builders for
outbound frames.

Every frame is one JSON object with a `type` field. Outbound messages are
built as plain dicts with a fixed key order and encoded compactly, so a
scripted match produces byte-identical logs on every run.
"""

from __future__ import annotations

import json
import math
from typing import Annotated, Literal, Union

from pydantic import BaseModel, Field, ValidationError, field_validator

MAX_STROKE_POINTS = 2048
MAX_WORD_LENGTH = 64
MAX_NAME_LENGTH = 24


class ProtocolError(Exception):
    """Inbound frame failed schema validation."""


class CreateRoom(BaseModel):
    type: Literal["create_room"]


class Join(BaseModel):
    type: Literal["join"]
    room: str = Field(min_length=1, max_length=16)
    name: str = Field(min_length=1, max_length=MAX_NAME_LENGTH)


class StartMatch(BaseModel):
    type: Literal["start_match"]


class StrokeFrame(BaseModel):
    type: Literal["stroke"]
    points: list[tuple[float, float]] = Field(min_length=1,
                                              max_length=MAX_STROKE_POINTS)

    @field_validator("points")
    @classmethod
    def _finite(cls, points):
        for x, y in points:
            if not (math.isfinite(x) and math.isfinite(y)):
                raise ValueError("stroke coordinates must be finite")
        return points


class Guess(BaseModel):
    type: Literal["guess"]
    word: str = Field(min_length=1, max_length=MAX_WORD_LENGTH)


class Pong(BaseModel):
    type: Literal["pong"]


InboundFrame = Annotated[
    Union[CreateRoom, Join, StartMatch, StrokeFrame, Guess, Pong],
    Field(discriminator="type"),
]


class _InboundEnvelope(BaseModel):
    frame: InboundFrame


def parse_inbound(raw: str | bytes | dict) -> InboundFrame:
    """Validate one inbound frame; raises ProtocolError with a short reason."""
    if isinstance(raw, (str, bytes)):
        try:
            raw = json.loads(raw)
        except json.JSONDecodeError as e:
            raise ProtocolError(f"not valid JSON: {e.msg}") from e
    if not isinstance(raw, dict):
        raise ProtocolError("frame must be a JSON object")
    try:
        return _InboundEnvelope(frame=raw).frame
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first["loc"][1:]) or "frame"
        raise ProtocolError(f"{where}: {first['msg']}") from e


def encode(msg: dict) -> str:
    """Canonical frame encoding: compact separators, insertion key order."""
    return json.dumps(msg, separators=(",", ":"))


# -- outbound builders (key order here is the wire order) -----------------

def room_created(room: str) -> dict:
    return {"type": "room_created", "room": room}


def joined(player_id: str, roster: list[dict]) -> dict:
    return {"type": "joined", "player_id": player_id, "roster": roster}


def left(player_id: str, roster: list[dict]) -> dict:
    return {"type": "left", "player_id": player_id, "roster": roster}


def role(value: str) -> dict:
    return {"type": "role", "role": value}


def round_start(round_number: int, deadline: float, ink_budget: float) -> dict:
    return {"type": "round_start", "round": round_number,
            "deadline": deadline, "ink_budget": ink_budget}


def code_word(word: str) -> dict:
    return {"type": "code_word", "word": word}


def stroke(points: list) -> dict:
    return {"type": "stroke", "points": [[x, y] for x, y in points]}


def ink_update(used: float, budget: float) -> dict:
    return {"type": "ink_update", "used": used, "budget": budget}


def nn_confidence(word: str | None, confidence: float) -> dict:
    return {"type": "nn_confidence", "word": word, "confidence": confidence}


def guess_result(by: str, word: str, correct: bool) -> dict:
    return {"type": "guess_result", "by": by, "word": word, "correct": correct}


def countdown_restarted(deadline: float) -> dict:
    return {"type": "countdown_restarted", "deadline": deadline}


def round_end(winner: str | None, word: str, score: dict) -> dict:
    return {"type": "round_end", "winner": winner, "word": word, "score": score}


def match_end(winner: str | None, score: dict) -> dict:
    return {"type": "match_end", "winner": winner, "score": score}


def error(code: str, message: str) -> dict:
    return {"type": "error", "code": code, "message": message}


def ping() -> dict:
    return {"type": "ping"}
