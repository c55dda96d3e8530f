"""Scripted protocol runs shared by the protocol tests and the acceptance
suite: a deterministic 2-human match driven straight through the service
core, logged in wire encoding for byte-exact comparison."""

from __future__ import annotations

from dataclasses import dataclass, field

from sketchduel import protocol
from sketchduel.game import MatchConfig, Phase
from sketchduel.rooms import LobbyService

TRACE_SERVICE_SEED = 2024
TRACE_THRESHOLD = 0.9


@dataclass
class RoundWindow:
    number: int
    code_word: str
    sketcher_client: str
    start_index: int               # log index of its first round_start
    terminal_index: int | None = None   # first reveal (win or round_end)


@dataclass
class Harness:
    service: LobbyService
    now: float = 1000.0
    log: list[tuple[str, str]] = field(default_factory=list)

    def _collect(self, outbound):
        for client, msg in outbound:
            self.log.append((client, protocol.encode(msg)))
        return outbound

    def send(self, client: str, msg: dict, dt: float = 1.0):
        self.now += dt
        return self._collect(self.service.handle_message(client, msg, self.now))

    def timers(self, at: float | None = None, dt: float = 1.0):
        self.now = at if at is not None else self.now + dt
        return self._collect(self.service.run_timers(self.now))

    def disconnect(self, client: str, dt: float = 1.0):
        self.now += dt
        return self._collect(self.service.handle_disconnect(client, self.now))

    def log_lines(self) -> str:
        return "".join(f"{client}\t{text}\n" for client, text in self.log)


def trace_service(index, budgets) -> LobbyService:
    defaults = MatchConfig(rounds_to_play=3, round_seconds=30.0,
                           confidence_threshold=TRACE_THRESHOLD,
                           category_words=list(index.categories))
    return LobbyService(index, budgets, defaults, rng_seed=TRACE_SERVICE_SEED)


def play_scripted_match(index, budgets, dataset):
    """A fixed 2-human, 3-round match exercising the whole protocol:
    strokes, a wrong human guess, a countdown restart, wins by both sides,
    and the final match end. Fully deterministic."""
    h = Harness(trace_service(index, budgets))
    windows: list[RoundWindow] = []

    out = h.send("C1", {"type": "create_room"})
    room_code = out[0][1]["room"]
    h.send("C1", {"type": "join", "room": room_code, "name": "Ada"})
    h.send("C2", {"type": "join", "room": room_code, "name": "Bo"})

    room = h.service.rooms[room_code]
    clients = {p.player_id: p.client_id for p in room.players}

    start_index = len(h.log)
    h.send("C1", {"type": "start_match"})
    match = room.match

    def window():
        r = match.round
        return RoundWindow(r.round_number, r.code_word,
                           clients[r.sketcher], start_index)

    def sketch(points):
        return h.send(windows[-1].sketcher_client,
                      {"type": "stroke", "points": points})

    def guess(word):
        guesser = "C1" if windows[-1].sketcher_client == "C2" else "C2"
        return h.send(guesser, {"type": "guess", "word": word})

    def close_window():
        # The reveal moment: the winning guess_result, the nn_confidence
        # frame carrying the winning word (emitted just before it), or the
        # round_end itself. Everything before it must stay secret.
        w = windows[-1]
        needle = f'"{w.code_word}"'
        w.terminal_index = len(h.log)
        for i in range(w.start_index, len(h.log)):
            _, text = h.log[i]
            if ('"type":"round_end"' in text
                    or ('"type":"guess_result"' in text and '"correct":true' in text)
                    or ('"type":"nn_confidence"' in text and needle in text)):
                w.terminal_index = i
                break

    # Round 1: vague strokes, a wrong guess, an expired countdown, then a
    # human win (unless the classifier got there first).
    windows.append(window())
    sketch([[40, 40], [70, 55]])
    if match.phase is Phase.IN_ROUND:
        sketch([[70, 55], [90, 120]])
    if match.phase is Phase.IN_ROUND:
        wrong = next(w for w in index.categories
                     if w != windows[-1].code_word)
        guess(wrong)
    if match.phase is Phase.IN_ROUND:
        h.timers(at=match.round.deadline + 0.5)    # countdown_restarted
    if match.phase is Phase.IN_ROUND:
        guess(windows[-1].code_word)
    close_window()

    # Round 2: replay a training drawing of the code word stroke by stroke;
    # the classifier recognizes its own corpus quickly.
    start_index = len(h.log)
    h.timers(at=room.next_round_at + 0.1)
    windows.append(window())
    example = dataset.examples[windows[-1].code_word][0]
    for stroke in example.drawing.strokes:
        if match.phase is not Phase.IN_ROUND:
            break
        sketch([[x, y] for x, y in stroke.points])
    if match.phase is Phase.IN_ROUND:
        guess(windows[-1].code_word)
    close_window()

    # Round 3: quick human win to finish the match.
    start_index = len(h.log)
    h.timers(at=room.next_round_at + 0.1)
    windows.append(window())
    sketch([[10, 200], [80, 210], [150, 190]])
    if match.phase is Phase.IN_ROUND:
        guess(windows[-1].code_word)
    close_window()

    return h, windows


def assert_code_word_secrecy(harness: Harness, windows: list[RoundWindow]):
    """No payload delivered to a Guesser may contain the round's code word
    before the first reveal (the winning guess_result or round_end)."""
    for w in windows:
        needle = f'"{w.code_word}"'
        for i in range(w.start_index, w.terminal_index):
            client, text = harness.log[i]
            if client == w.sketcher_client:
                continue
            assert needle not in text, (
                f"round {w.number}: code word leaked to {client} "
                f"at log index {i}: {text}")
