"""Room-based game service, independent of any transport.

handle_message / handle_disconnect / run_timers are synchronous: they take
an already-parsed frame plus an explicit timestamp and return the outbound
fan-out as (client_id, frame) pairs. The async layer only moves bytes, so
the whole protocol is replayable and the golden-trace tests can drive it
directly. Within a room, events are serialized by arrival order.
"""

from __future__ import annotations

import random
import string
from dataclasses import dataclass, field

from . import protocol
from .classifier import (
    ClassifierIndex,
    masked_distribution,
    predict,
    top_category,
)
from .dataset import InkBudgetTable
from .errors import CapacityError, NotAuthorizedError, PhaseError
from .game import (
    NN_PLAYER,
    GuessResult,
    Match,
    MatchConfig,
    Phase,
    Role,
    Winner,
    start_match,
)
from .geometry import Drawing, Stroke
from .protocol import ProtocolError

ROOM_CODE_LENGTH = 6
ROOM_CODE_ALPHABET = string.ascii_uppercase + string.digits
BETWEEN_ROUND_SECONDS = 5.0

Outbound = tuple[str, dict]


@dataclass
class Player:
    player_id: str
    name: str
    client_id: str | None          # None while disconnected


@dataclass
class Room:
    code: str
    players: list[Player] = field(default_factory=list)
    match: Match | None = None
    next_round_at: float | None = None
    _player_seq: int = 0

    def connected(self) -> list[Player]:
        return [p for p in self.players if p.client_id is not None]

    def roster(self) -> list[dict]:
        return [{"player_id": p.player_id, "name": p.name}
                for p in self.players if p.client_id is not None]

    def find(self, player_id: str) -> Player | None:
        for p in self.players:
            if p.player_id == player_id:
                return p
        return None

    def new_player_id(self) -> str:
        self._player_seq += 1
        return f"P{self._player_seq}"


def _clean_name(name: str) -> str:
    text = "".join(ch for ch in name if ch.isprintable())
    return " ".join(text.split())[:protocol.MAX_NAME_LENGTH]


class LobbyService:
    """Owns all rooms, routes frames, and schedules rounds and the
    classifier's turns. One instance per server process."""

    def __init__(self, index: ClassifierIndex, budgets: InkBudgetTable,
                 defaults: MatchConfig | None = None, *,
                 rng_seed: int | None = None,
                 room_limit: int = 64, room_size: int = 8,
                 per_point_streaming: bool = False):
        self.index = index
        self.budgets = budgets
        playable = [w for w in index.categories if w in set(budgets.words())]
        if defaults is None:
            defaults = MatchConfig(category_words=playable)
        elif not defaults.category_words:
            defaults.category_words = playable
        defaults.validate()
        unknown = [w for w in defaults.category_words
                   if w not in set(index.categories)]
        if unknown:
            raise ValueError(f"config words not in classifier index: {unknown}")
        self.defaults = defaults
        self.rooms: dict[str, Room] = {}
        self.room_limit = room_limit
        self.room_size = room_size
        self.per_point_streaming = per_point_streaming
        self._rng = random.Random(rng_seed)
        # client_id -> (room_code, player_id); parked clients map to None
        self._clients: dict[str, tuple[str, str] | None] = {}

    # -- registry ---------------------------------------------------------

    def create_room(self) -> str:
        if len(self.rooms) >= self.room_limit:
            raise CapacityError("room limit reached")
        while True:
            code = "".join(self._rng.choice(ROOM_CODE_ALPHABET)
                           for _ in range(ROOM_CODE_LENGTH))
            if code not in self.rooms:
                break
        self.rooms[code] = Room(code)
        return code

    def locate(self, client_id: str) -> tuple[Room, Player] | None:
        entry = self._clients.get(client_id)
        if not entry:
            return None
        room = self.rooms.get(entry[0])
        if room is None:
            return None
        player = room.find(entry[1])
        return (room, player) if player else None

    # -- frame handling ----------------------------------------------------

    def handle_message(self, client_id: str, raw, now: float) -> list[Outbound]:
        try:
            frame = protocol.parse_inbound(raw)
        except ProtocolError as e:
            return [(client_id, protocol.error("bad_message", str(e)))]
        handler = getattr(self, f"_on_{frame.type}")
        return handler(client_id, frame, now)

    def _on_pong(self, client_id, frame, now) -> list[Outbound]:
        return []   # heartbeat bookkeeping lives in the transport layer

    def _on_create_room(self, client_id, frame, now) -> list[Outbound]:
        if self.locate(client_id):
            return [(client_id, protocol.error("already_in_room",
                                               "leave the current room first"))]
        try:
            code = self.create_room()
        except CapacityError as e:
            return [(client_id, protocol.error("room_limit", str(e)))]
        return [(client_id, protocol.room_created(code))]

    def _on_join(self, client_id, frame, now) -> list[Outbound]:
        if self.locate(client_id):
            return [(client_id, protocol.error("already_in_room",
                                               "leave the current room first"))]
        room = self.rooms.get(frame.room.strip().upper())
        if room is None:
            return [(client_id, protocol.error("unknown_room",
                                               f"no room {frame.room!r}"))]
        if len(room.connected()) >= self.room_size:
            return [(client_id, protocol.error("room_full",
                                               "room is at capacity"))]
        name = _clean_name(frame.name)
        if not name:
            return [(client_id, protocol.error("bad_name",
                                               "name has no printable characters"))]
        player = Player(room.new_player_id(), name, client_id)
        room.players.append(player)
        self._clients[client_id] = (room.code, player.player_id)

        match = room.match
        if match is not None and match.phase is not Phase.FINISHED:
            match.add_player(player.player_id)

        out = self._broadcast(room, protocol.joined(player.player_id,
                                                    room.roster()))
        # Late joiners get the current round replayed so they can render.
        if match is not None and match.phase is Phase.IN_ROUND:
            r = match.round
            out.append((client_id, protocol.role(Role.GUESSER.value)))
            out.append((client_id, protocol.round_start(
                r.round_number, r.deadline, r.ink_budget)))
            out.append((client_id, protocol.ink_update(r.ink_used, r.ink_budget)))
        return out

    def _on_start_match(self, client_id, frame, now) -> list[Outbound]:
        located = self.locate(client_id)
        if not located:
            return [(client_id, protocol.error("not_in_room",
                                               "join a room first"))]
        room, _ = located
        if room.match is not None and room.match.phase is not Phase.FINISHED:
            return [(client_id, protocol.error("wrong_phase",
                                               "match already running"))]
        humans = [p.player_id for p in room.connected()]
        config = MatchConfig(
            rounds_to_play=self.defaults.rounds_to_play,
            round_seconds=self.defaults.round_seconds,
            confidence_threshold=self.defaults.confidence_threshold,
            ink_multiplier=self.defaults.ink_multiplier,
            category_words=list(self.defaults.category_words),
            rng_seed=self._rng.randrange(2 ** 32),
        )
        try:
            room.match = start_match(config, humans, self.budgets,
                                     vocabulary=set(self.index.categories))
        except ValueError as e:
            return [(client_id, protocol.error("cannot_start", str(e)))]
        room.next_round_at = None
        return self._start_round(room, now)

    def _on_stroke(self, client_id, frame, now) -> list[Outbound]:
        located = self.locate(client_id)
        if not located:
            return [(client_id, protocol.error("not_in_room",
                                               "join a room first"))]
        room, player = located
        match = room.match
        if match is None or match.phase is not Phase.IN_ROUND:
            return [(client_id, protocol.error("wrong_phase",
                                               "no round in progress"))]
        try:
            outcome = match.apply_stroke(player.player_id, Stroke(frame.points))
        except NotAuthorizedError as e:
            return [(client_id, protocol.error("not_authorized", str(e)))]
        except ValueError as e:
            return [(client_id, protocol.error("bad_stroke", str(e)))]
        if outcome.accepted is None:
            return [(client_id, protocol.error("ink_exhausted",
                                               "the ink budget is spent"))]
        out = self._broadcast(room, protocol.stroke(outcome.accepted.points))
        out += self._broadcast(room, protocol.ink_update(outcome.ink_used,
                                                         outcome.ink_budget))
        if self.per_point_streaming:
            out += self._per_point_confidence(room, outcome.accepted)
        out += self._nn_turn(room, now)
        return out

    def _on_guess(self, client_id, frame, now) -> list[Outbound]:
        located = self.locate(client_id)
        if not located:
            return [(client_id, protocol.error("not_in_room",
                                               "join a room first"))]
        room, player = located
        match = room.match
        if match is None or match.phase is not Phase.IN_ROUND:
            return [(client_id, protocol.error("wrong_phase",
                                               "no round in progress"))]
        outcome = match.submit_guess(player.player_id, frame.word, now)
        if outcome.result is GuessResult.IGNORED:
            return [(client_id, protocol.error("ignored",
                                               "the Sketcher cannot guess"))]
        out = self._broadcast(room, protocol.guess_result(
            player.player_id, outcome.word,
            outcome.result is GuessResult.CORRECT))
        if outcome.result is GuessResult.CORRECT:
            out += self._round_end(room, now)
        return out

    # -- timers and disconnects --------------------------------------------

    def run_timers(self, now: float) -> list[Outbound]:
        """Drive countdown restarts and scheduled round starts."""
        out: list[Outbound] = []
        for room in list(self.rooms.values()):
            match = room.match
            if match is None:
                continue
            if match.phase is Phase.IN_ROUND:
                new_deadline = match.tick(now)
                if new_deadline is not None:
                    out += self._broadcast(
                        room, protocol.countdown_restarted(new_deadline))
            elif (match.phase is Phase.BETWEEN_ROUNDS
                  and room.next_round_at is not None
                  and now >= room.next_round_at
                  and len(room.connected()) >= 2):
                room.next_round_at = None
                out += self._start_round(room, now)
        return out

    def handle_disconnect(self, client_id: str, now: float) -> list[Outbound]:
        located = self.locate(client_id)
        self._clients.pop(client_id, None)
        if not located:
            return []
        room, player = located
        player.client_id = None
        room.players.remove(player)
        out = self._broadcast(room, protocol.left(player.player_id,
                                                  room.roster()))
        match = room.match
        if match is not None and match.phase is not Phase.FINISHED:
            was_round = match.phase is Phase.IN_ROUND
            code_word = match.round.code_word if was_round else None
            match.remove_player(player.player_id)
            if was_round and match.phase is not Phase.IN_ROUND:
                # Round died without a winner (Sketcher left, or too few
                # humans remain): reveal and move on, no point awarded.
                out += self._broadcast(room, protocol.round_end(
                    None, code_word, match.scores()))
                room.next_round_at = now + BETWEEN_ROUND_SECONDS
            if match.phase is Phase.FINISHED:
                winner, score = match.match_result()
                out += self._broadcast(room, protocol.match_end(
                    winner.value if winner else None, score))
                room.next_round_at = None
        if not room.connected():
            del self.rooms[room.code]
        return out

    # -- internals ----------------------------------------------------------

    def _broadcast(self, room: Room, msg: dict) -> list[Outbound]:
        return [(p.client_id, msg) for p in room.connected()]

    def _start_round(self, room: Room, now: float) -> list[Outbound]:
        match = room.match
        r = match.start_round(now)
        out = self._broadcast(room, protocol.round_start(
            r.round_number, r.deadline, r.ink_budget))
        for p in room.connected():
            role = match.role_of(p.player_id)
            if role is not None:
                out.append((p.client_id, protocol.role(role.value)))
        sketcher = room.find(r.sketcher)
        if sketcher and sketcher.client_id:
            out.append((sketcher.client_id, protocol.code_word(r.code_word)))
        return out

    def _per_point_confidence(self, room: Room, accepted: Stroke) -> list[Outbound]:
        """Per-point streaming mode: display-only confidence updates for
        each prefix of the newly accepted stroke. The gated guess still
        happens once, on the completed stroke, so event order stays
        one-guess-per-stroke."""
        match = room.match
        r = match.round
        out: list[Outbound] = []
        earlier = r.drawing.strokes[:-1]
        # Stop one short of the full stroke: _nn_turn reports that state.
        for i in range(2, len(accepted.points)):
            prefix = Drawing(earlier + [Stroke(accepted.points[:i])])
            _, conf = top_category(masked_distribution(
                predict(self.index, prefix), r.ledger))
            out += self._broadcast(room, protocol.nn_confidence(None, conf))
        return out

    def _nn_turn(self, room: Room, now: float) -> list[Outbound]:
        match = room.match
        step = match.nn_step(self.index, now)
        if step is None:
            return []
        out = self._broadcast(room, protocol.nn_confidence(step.word,
                                                           step.confidence))
        if step.outcome is not None:
            out += self._broadcast(room, protocol.guess_result(
                NN_PLAYER, step.outcome.word,
                step.outcome.result is GuessResult.CORRECT))
            if step.outcome.result is GuessResult.CORRECT:
                out += self._round_end(room, now)
        return out

    def _round_end(self, room: Room, now: float) -> list[Outbound]:
        """Round just finished decisively; reveal the word, then either
        schedule the next round or close out the match."""
        match = room.match
        # finish_round already rotated state; the decided round is still
        # attached so the reveal can read it.
        r = match.round
        out = self._broadcast(room, protocol.round_end(
            r.winner.value, r.code_word, match.scores()))
        if match.phase is Phase.FINISHED:
            winner, score = match.match_result()
            out += self._broadcast(room, protocol.match_end(
                winner.value if winner else None, score))
            room.next_round_at = None
        else:
            room.next_round_at = now + BETWEEN_ROUND_SECONDS
        return out
