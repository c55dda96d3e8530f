// Client view-model: a pure reducer over server messages. The client
// computes no game state of its own; every displayed number is copied
// verbatim from the latest payload, which is what the tests assert.

import type { Point, RosterEntry, Score, ServerMessage } from "./protocol.js";

export interface ClientConfig {
  roundSeconds: number;      // from GET /info; drives timer extrapolation
  threshold: number;         // NN alert color cutoff
}

export interface NnCharacter {
  idle: boolean;             // no prediction yet this round
  confidence: number | null; // raw value from the last nn_confidence
  percent: number | null;    // rendered integer percentage
  lastGuess: string | null;  // last public guess word
  alert: boolean;            // confidence >= threshold
}

export interface FeedEntry {
  by: string;
  word: string;
  correct: boolean;
}

export interface RoundView {
  number: number;
  deadline: number;          // server timestamp, verbatim
  inkBudget: number;
  timerEndsAtLocal: number;  // local clock extrapolation target
  active: boolean;
  lastWinner: string | null;
  lastWord: string | null;
}

export interface ClientView {
  room: string | null;
  playerId: string | null;
  roster: RosterEntry[];
  role: "sketcher" | "guesser" | null;
  codeWord: string | null;   // only ever set on the Sketcher's client
  round: RoundView | null;
  strokes: Point[][];        // authoritative strokes from broadcasts
  pendingStroke: Point[] | null;  // local echo awaiting the broadcast
  inkUsed: number | null;
  inkBudget: number | null;
  nn: NnCharacter;
  feed: FeedEntry[];
  score: Score;
  matchWinner: string | null;
  matchOver: boolean;
  lastError: string | null;
}

export function initialView(): ClientView {
  return {
    room: null,
    playerId: null,
    roster: [],
    role: null,
    codeWord: null,
    round: null,
    strokes: [],
    pendingStroke: null,
    inkUsed: null,
    inkBudget: null,
    nn: { idle: true, confidence: null, percent: null, lastGuess: null, alert: false },
    feed: [],
    score: { humans: 0, nn: 0 },
    matchWinner: null,
    matchOver: false,
    lastError: null,
  };
}

export function inkFraction(view: ClientView): number | null {
  if (view.inkUsed === null || view.inkBudget === null || view.inkBudget === 0) {
    return null;
  }
  return view.inkUsed / view.inkBudget;
}

export function inkRemaining(view: ClientView): number {
  if (view.inkUsed === null || view.inkBudget === null) return Infinity;
  return view.inkBudget - view.inkUsed;
}

/** Fold one server message into the view. localNow is injectable so tests
 * stay clock-free. Returns the same (mutated) view for chaining. */
export function apply(
  view: ClientView,
  msg: ServerMessage,
  config: ClientConfig,
  localNow: number = Date.now() / 1000,
): ClientView {
  switch (msg.type) {
    case "room_created":
      view.room = msg.room;
      break;

    case "joined":
      view.roster = msg.roster;
      // The first roster update after our own join names us.
      if (view.playerId === null) view.playerId = msg.player_id;
      break;

    case "left":
      view.roster = msg.roster;
      break;

    case "role":
      view.role = msg.role;
      if (msg.role === "guesser") view.codeWord = null;
      break;

    case "round_start":
      view.round = {
        number: msg.round,
        deadline: msg.deadline,
        inkBudget: msg.ink_budget,
        timerEndsAtLocal: localNow + config.roundSeconds,
        active: true,
        lastWinner: null,
        lastWord: null,
      };
      view.strokes = [];
      view.pendingStroke = null;
      view.inkUsed = 0;
      view.inkBudget = msg.ink_budget;
      view.nn = { idle: true, confidence: null, percent: null, lastGuess: null, alert: false };
      view.matchOver = false;
      if (view.role !== "sketcher") view.codeWord = null;
      break;

    case "code_word":
      view.codeWord = msg.word;
      break;

    case "stroke":
      view.strokes.push(msg.points);
      view.pendingStroke = null;   // authoritative version replaces the echo
      break;

    case "ink_update":
      view.inkUsed = msg.used;
      view.inkBudget = msg.budget;
      break;

    case "nn_confidence":
      view.nn.idle = false;
      view.nn.confidence = msg.confidence;
      view.nn.percent = Math.round(msg.confidence * 100);
      view.nn.alert = msg.confidence >= config.threshold;
      if (msg.word !== null) view.nn.lastGuess = msg.word;
      break;

    case "guess_result":
      view.feed.push({ by: msg.by, word: msg.word, correct: msg.correct });
      if (msg.by === "NN") view.nn.lastGuess = msg.word;
      break;

    case "countdown_restarted":
      if (view.round) {
        view.round.deadline = msg.deadline;
        view.round.timerEndsAtLocal = localNow + config.roundSeconds;
      }
      break;

    case "round_end":
      view.score = msg.score;
      if (view.round) {
        view.round.active = false;
        view.round.lastWinner = msg.winner;
        view.round.lastWord = msg.word;
      }
      break;

    case "match_end":
      view.score = msg.score;
      view.matchWinner = msg.winner;
      view.matchOver = true;
      break;

    case "error":
      view.lastError = `${msg.code}: ${msg.message}`;
      break;

    case "ping":
      break;   // transport answers with pong
  }
  return view;
}
