"""Authoritative, transport-independent match state machine.

Time never comes from the wall clock here: every operation that needs it
takes an explicit timestamp, which makes matches replayable and the test
suite deterministic. Each Match must be driven from a single event loop;
operations are synchronous transitions applied in arrival order.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from enum import Enum

from .classifier import (
    ClassifierIndex,
    NnGuess,
    masked_distribution,
    predict,
    top_category,
)
from .dataset import InkBudgetTable, canonical_word
from .errors import NotAuthorizedError, PhaseError
from .geometry import Drawing, Stroke, stroke_length, truncate_stroke, validate_drawing

NN_PLAYER = "NN"


class Phase(str, Enum):
    LOBBY = "lobby"
    BETWEEN_ROUNDS = "between_rounds"
    IN_ROUND = "in_round"
    FINISHED = "finished"


class Role(str, Enum):
    SKETCHER = "sketcher"
    GUESSER = "guesser"


class Winner(str, Enum):
    HUMANS = "humans"
    NN = "nn"


@dataclass
class MatchConfig:
    rounds_to_play: int = 5
    round_seconds: float = 30.0
    confidence_threshold: float = 0.5
    ink_multiplier: float = 1.5
    category_words: list[str] = field(default_factory=list)
    rng_seed: int = 0

    def validate(self) -> None:
        if self.rounds_to_play < 1 or self.rounds_to_play % 2 == 0:
            raise ValueError("rounds_to_play must be odd and >= 1")
        if self.round_seconds <= 0:
            raise ValueError("round_seconds must be > 0")
        if not 0.0 <= self.confidence_threshold <= 1.0:
            raise ValueError("confidence_threshold must be in [0, 1]")
        if self.ink_multiplier <= 0:
            raise ValueError("ink_multiplier must be > 0")
        if not self.category_words:
            raise ValueError("category_words must not be empty")
        if len(self.category_words) < self.rounds_to_play:
            raise ValueError("need at least one category word per round")


@dataclass
class RoundState:
    round_number: int
    code_word: str
    sketcher: str
    ink_budget: float
    deadline: float
    drawing: Drawing = field(default_factory=Drawing)
    ink_used: float = 0.0
    ledger: set[str] = field(default_factory=set)
    winner: Winner | None = None
    revision: int = 0
    nn_last_emit: tuple[int, str] | None = None


@dataclass
class StrokeOutcome:
    accepted: Stroke | None        # possibly truncated; None when rejected
    truncated: bool
    ink_used: float
    ink_budget: float

    @property
    def exhausted(self) -> bool:
        return self.ink_used >= self.ink_budget


class GuessResult(str, Enum):
    CORRECT = "correct"
    INCORRECT = "incorrect"
    IGNORED = "ignored"


@dataclass
class GuessOutcome:
    result: GuessResult
    word: str                      # canonical form
    by: str
    winner: Winner | None = None   # set when result is CORRECT
    match_over: bool = False


@dataclass
class NnStepResult:
    confidence: float              # renormalized top confidence, always
    word: str | None               # emitted guess word, None when gated off
    outcome: GuessOutcome | None = None


class Match:
    """One match: players, scores, rounds, and the guess ledger."""

    def __init__(self, config: MatchConfig, humans: list[str],
                 budgets: InkBudgetTable,
                 vocabulary: set[str] | None = None):
        config.validate()
        if len(humans) < 2:
            raise ValueError("a match needs at least two human players")
        if len(set(humans)) != len(humans):
            raise ValueError("duplicate player ids")
        words = [canonical_word(w) for w in config.category_words]
        known = set(budgets.words())
        missing = [w for w in words if w not in known]
        if missing:
            raise ValueError(f"no ink budget for categories: {missing}")
        self.config = config
        self.players: list[str] = list(humans)
        self.budgets = budgets
        self.vocabulary = set(vocabulary) if vocabulary is not None else known
        self.words = words
        self.rng = random.Random(config.rng_seed)
        self.phase = Phase.BETWEEN_ROUNDS
        self.humans_points = 0
        self.nn_points = 0
        self.completed_rounds = 0
        self.round: RoundState | None = None
        self.used_words: set[str] = set()      # words from decided rounds
        self.aborted_words: set[str] = set()   # words leaked by aborted rounds
        self._sketcher_idx = self.rng.randrange(len(humans))

    # -- helpers ---------------------------------------------------------

    def _require_phase(self, phase: Phase, op: str) -> None:
        if self.phase is not phase:
            raise PhaseError(f"{op} requires phase {phase.value}, "
                             f"currently {self.phase.value}")

    def role_of(self, player_id: str) -> Role | None:
        if player_id not in self.players:
            return None
        if self.round is not None and self.round.sketcher == player_id:
            return Role.SKETCHER
        return Role.GUESSER

    def scores(self) -> dict[str, int]:
        return {"humans": self.humans_points, "nn": self.nn_points}

    # -- transitions -----------------------------------------------------

    def start_round(self, now: float) -> RoundState:
        """Deal the next round: fresh code word, rotated Sketcher, budget
        from the ink table, empty drawing and ledger."""
        self._require_phase(Phase.BETWEEN_ROUNDS, "start_round")
        if self.completed_rounds >= self.config.rounds_to_play:
            raise PhaseError("all rounds already played")
        pool = [w for w in self.words
                if w not in self.used_words and w not in self.aborted_words]
        if not pool:
            # Leaked words from aborted rounds are better than no round.
            pool = [w for w in self.words if w not in self.used_words]
        if not pool:
            raise PhaseError("category word pool exhausted")
        word = pool[self.rng.randrange(len(pool))]
        sketcher = self.players[self._sketcher_idx % len(self.players)]
        self.round = RoundState(
            round_number=self.completed_rounds + 1,
            code_word=word,
            sketcher=sketcher,
            ink_budget=self.budgets.budget(word),
            deadline=now + self.config.round_seconds,
        )
        self.phase = Phase.IN_ROUND
        return self.round

    def apply_stroke(self, player_id: str, stroke: Stroke) -> StrokeOutcome:
        """Append a Sketcher stroke, truncating at the ink budget.

        Once ink is exhausted further strokes are rejected with zero
        effect (accepted=None)."""
        self._require_phase(Phase.IN_ROUND, "apply_stroke")
        r = self.round
        if player_id != r.sketcher:
            raise NotAuthorizedError(f"{player_id} is not the Sketcher")
        validate_drawing(Drawing([stroke]), in_canvas=True)
        remaining = r.ink_budget - r.ink_used
        length = stroke_length(stroke)
        if length <= remaining:
            accepted = Stroke(list(stroke.points))
            truncated = False
            r.ink_used += length
        else:
            accepted = truncate_stroke(stroke, remaining)
            truncated = accepted is not None
            if accepted is not None:
                r.ink_used = r.ink_budget
        if accepted is not None:
            r.drawing.strokes.append(accepted)
            r.revision += 1
        return StrokeOutcome(accepted, truncated, r.ink_used, r.ink_budget)

    def submit_guess(self, player_id: str, word: str, now: float) -> GuessOutcome:
        """Adjudicate a guess from a human or the built-in guesser.

        Correct ends the round and scores one point for the guessing side.
        Incorrect known-category words join the masking ledger; unknown
        words change nothing. There is no score penalty for wrong guesses.
        Sketcher guesses are ignored."""
        self._require_phase(Phase.IN_ROUND, "submit_guess")
        r = self.round
        guess = canonical_word(word)
        if player_id != NN_PLAYER and player_id == r.sketcher:
            return GuessOutcome(GuessResult.IGNORED, guess, player_id)
        if guess == r.code_word:
            side = Winner.NN if player_id == NN_PLAYER else Winner.HUMANS
            self._finish_round(side)
            return GuessOutcome(GuessResult.CORRECT, guess, player_id,
                                winner=side,
                                match_over=self.phase is Phase.FINISHED)
        if guess in self.vocabulary:
            r.ledger.add(guess)
        return GuessOutcome(GuessResult.INCORRECT, guess, player_id)

    def _finish_round(self, side: Winner) -> None:
        r = self.round
        r.winner = side
        if side is Winner.HUMANS:
            self.humans_points += 1
        else:
            self.nn_points += 1
        self.completed_rounds += 1
        self.used_words.add(r.code_word)
        self._sketcher_idx += 1
        if self.completed_rounds >= self.config.rounds_to_play:
            self.phase = Phase.FINISHED
        else:
            self.phase = Phase.BETWEEN_ROUNDS

    def nn_step(self, ix: ClassifierIndex, now: float) -> NnStepResult | None:
        """One classifier turn on the current drawing.

        Predicts, masks by the ledger, and emits the top word through
        submit_guess when it clears the confidence gate and was not already
        emitted for this exact drawing state. Returns the renormalized top
        confidence for display whether or not a guess was emitted; None
        before the first stroke."""
        if self.phase is not Phase.IN_ROUND:
            return None
        r = self.round
        if not r.drawing.strokes:
            return None
        dist = predict(ix, r.drawing)
        word, conf = top_category(masked_distribution(dist, r.ledger))
        gated = conf >= self.config.confidence_threshold
        duplicate = r.nn_last_emit == (r.revision, word)
        if not gated or duplicate:
            return NnStepResult(confidence=conf, word=None)
        r.nn_last_emit = (r.revision, word)
        outcome = self.submit_guess(NN_PLAYER, word, now)
        return NnStepResult(confidence=conf, word=word, outcome=outcome)

    def tick(self, now: float) -> float | None:
        """Restart the countdown when the deadline passes with no winner.

        Drawing, ledger, and ink all persist across restarts. Returns the
        new deadline when a restart happened, else None. No-op outside a
        round."""
        if self.phase is not Phase.IN_ROUND:
            return None
        r = self.round
        if now >= r.deadline and r.winner is None:
            r.deadline = now + self.config.round_seconds
            return r.deadline
        return None

    def match_result(self) -> tuple[Winner | None, dict[str, int]]:
        """Final winner and score; only meaningful once Finished.

        Winner is None only when the match was cut short at a tie."""
        self._require_phase(Phase.FINISHED, "match_result")
        if self.humans_points > self.nn_points:
            return Winner.HUMANS, self.scores()
        if self.nn_points > self.humans_points:
            return Winner.NN, self.scores()
        return None, self.scores()

    # -- roster churn ----------------------------------------------------

    def add_player(self, player_id: str) -> None:
        """Late joiner becomes a Guesser and enters the rotation."""
        if self.phase is Phase.FINISHED:
            raise PhaseError("match is finished")
        if player_id in self.players or player_id == NN_PLAYER:
            raise ValueError(f"player id {player_id!r} already in match")
        self.players.append(player_id)

    def remove_player(self, player_id: str) -> str | None:
        """Drop a player. A mid-round Sketcher exit aborts the round with
        no point awarded; the round will be re-dealt with a new word and
        Sketcher. Returns "aborted", "finished" (too few humans left), or
        None."""
        if player_id not in self.players:
            return None
        aborted = False
        if self.phase is Phase.IN_ROUND and self.round.sketcher == player_id:
            self.aborted_words.add(self.round.code_word)
            self.round = None
            self.phase = Phase.BETWEEN_ROUNDS
            aborted = True
        self.players.remove(player_id)
        self._sketcher_idx %= max(len(self.players), 1)
        if len(self.players) < 2 and self.phase is not Phase.FINISHED:
            self.phase = Phase.FINISHED
            return "finished"
        return "aborted" if aborted else None

    # -- replay support --------------------------------------------------

    def snapshot(self) -> dict:
        """JSON-able view of all externally visible state."""
        r = self.round
        return {
            "phase": self.phase.value,
            "players": list(self.players),
            "scores": self.scores(),
            "completed_rounds": self.completed_rounds,
            "used_words": sorted(self.used_words),
            "aborted_words": sorted(self.aborted_words),
            "sketcher_idx": self._sketcher_idx,
            "round": None if r is None else {
                "number": r.round_number,
                "code_word": r.code_word,
                "sketcher": r.sketcher,
                "ink_used": r.ink_used,
                "ink_budget": r.ink_budget,
                "deadline": r.deadline,
                "ledger": sorted(r.ledger),
                "winner": r.winner.value if r.winner else None,
                "strokes": [s.points for s in r.drawing.strokes],
            },
        }

    def state_digest(self) -> str:
        return hashlib.sha256(
            json.dumps(self.snapshot(), sort_keys=True).encode()).hexdigest()


def start_match(config: MatchConfig, humans: list[str],
                budgets: InkBudgetTable,
                vocabulary: set[str] | None = None) -> Match:
    """Create a match in the between-rounds phase with scores 0-0.

    The first Sketcher is drawn deterministically from the config seed."""
    return Match(config, humans, budgets, vocabulary)
