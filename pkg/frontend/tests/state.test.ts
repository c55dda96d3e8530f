// The view-model replayed against the golden protocol trace produced by
// the server test suite: rendered numbers must match payloads exactly, and
// a Guesser's state must never hold the code word before the reveal.

import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import type { ServerMessage } from "../src/protocol.js";
import {
  apply,
  initialView,
  inkFraction,
  type ClientConfig,
  type ClientView,
} from "../src/state.js";

const TRACE = fileURLToPath(
  new URL("../../tests/golden/trace_two_humans.log", import.meta.url),
);
const CONFIG: ClientConfig = { roundSeconds: 30, threshold: 0.9 };

interface Frame {
  client: string;
  raw: string;
  msg: ServerMessage;
}

function loadTrace(): Frame[] {
  return readFileSync(TRACE, "utf-8")
    .trim()
    .split("\n")
    .map((line) => {
      const [client, raw] = line.split("\t");
      return { client, raw, msg: JSON.parse(raw) as ServerMessage };
    });
}

function framesFor(client: string): Frame[] {
  return loadTrace().filter((f) => f.client === client);
}

describe("golden trace replay", () => {
  it.each(["C1", "C2"])("%s: rendered values match payloads exactly", (client) => {
    const view = initialView();
    let now = 1000;
    for (const { msg } of framesFor(client)) {
      now += 1;
      apply(view, msg, CONFIG, now);
      if (msg.type === "nn_confidence") {
        expect(view.nn.confidence).toBe(msg.confidence);
        expect(view.nn.percent).toBe(Math.round(msg.confidence * 100));
        expect(view.nn.alert).toBe(msg.confidence >= CONFIG.threshold);
        expect(view.nn.idle).toBe(false);
      }
      if (msg.type === "ink_update") {
        expect(view.inkUsed).toBe(msg.used);
        expect(view.inkBudget).toBe(msg.budget);
        expect(inkFraction(view)).toBe(msg.used / msg.budget);
      }
      if (msg.type === "guess_result") {
        const last = view.feed[view.feed.length - 1];
        expect(last).toEqual({ by: msg.by, word: msg.word, correct: msg.correct });
      }
      if (msg.type === "round_end") {
        expect(view.score).toEqual(msg.score);
        expect(view.round?.lastWord).toBe(msg.word);
      }
      if (msg.type === "match_end") {
        expect(view.matchWinner).toBe(msg.winner);
        expect(view.score).toEqual(msg.score);
      }
    }
    expect(view.matchOver).toBe(true);
    expect(view.feed.length).toBeGreaterThan(0);
  });

  it("full trace ends 2:1 for the humans", () => {
    const view = initialView();
    for (const { msg } of framesFor("C1")) apply(view, msg, CONFIG);
    expect(view.score).toEqual({ humans: 2, nn: 1 });
    expect(view.matchWinner).toBe("humans");
  });

  it.each(["C1", "C2"])(
    "%s: guesser state never holds the code word before the reveal",
    (client) => {
      const view = initialView();
      const frames = framesFor(client);

      // Round boundaries and code words, reconstructed from this client's
      // own stream (round_end always reveals the word).
      const words = new Map<number, string>();
      let round = 0;
      const roundOf: number[] = frames.map(({ msg }) => {
        if (msg.type === "round_start") round = msg.round;
        if (msg.type === "round_end") words.set(round, msg.word);
        return round;
      });

      const revealed = new Set<number>();
      frames.forEach(({ msg, raw }, i) => {
        apply(view, msg, CONFIG);
        const r = roundOf[i];
        const word = words.get(r);
        const isSketcherHere = view.role === "sketcher";
        if (
          msg.type === "round_end" ||
          (msg.type === "guess_result" && msg.correct) ||
          (msg.type === "nn_confidence" && msg.word === word)
        ) {
          revealed.add(r);
        }
        if (word !== undefined && !revealed.has(r) && !isSketcherHere) {
          expect(view.codeWord).toBeNull();
          expect(raw.includes(`"${word}"`)).toBe(false);
        }
      });
    },
  );
});

describe("view-model unit behavior", () => {
  const msgs = (...list: ServerMessage[]) => list;

  function applyAll(view: ClientView, list: ServerMessage[], now = 500) {
    for (const msg of list) apply(view, msg, CONFIG, now);
    return view;
  }

  it("nn character is idle until the first confidence update", () => {
    const view = initialView();
    applyAll(view, msgs(
      { type: "round_start", round: 1, deadline: 530, ink_budget: 400 },
    ));
    expect(view.nn.idle).toBe(true);
    expect(view.nn.percent).toBeNull();
    apply(view, { type: "nn_confidence", word: null, confidence: 0.42 }, CONFIG);
    expect(view.nn.idle).toBe(false);
    expect(view.nn.percent).toBe(42);
    expect(view.nn.alert).toBe(false);
    apply(view, { type: "nn_confidence", word: null, confidence: 0.93 }, CONFIG);
    expect(view.nn.alert).toBe(true);
  });

  it("countdown restart snaps the local timer target", () => {
    const view = initialView();
    apply(view, { type: "round_start", round: 1, deadline: 530, ink_budget: 9 },
      CONFIG, 100);
    expect(view.round?.timerEndsAtLocal).toBe(130);
    apply(view, { type: "countdown_restarted", deadline: 560 }, CONFIG, 131);
    expect(view.round?.deadline).toBe(560);
    expect(view.round?.timerEndsAtLocal).toBe(161);
  });

  it("round_start resets strokes, ink, ledger-side feed stays", () => {
    const view = initialView();
    applyAll(view, msgs(
      { type: "round_start", round: 1, deadline: 530, ink_budget: 100 },
      { type: "stroke", points: [[0, 0], [10, 10]] },
      { type: "ink_update", used: 14.14, budget: 100 },
      { type: "guess_result", by: "P1", word: "cat", correct: false },
      { type: "round_end", winner: "nn", word: "dog",
        score: { humans: 0, nn: 1 } },
      { type: "round_start", round: 2, deadline: 600, ink_budget: 200 },
    ));
    expect(view.strokes).toEqual([]);
    expect(view.inkUsed).toBe(0);
    expect(view.inkBudget).toBe(200);
    expect(view.feed).toHaveLength(1);   // the feed is match history
    expect(view.nn.idle).toBe(true);
  });

  it("authoritative stroke broadcast replaces the local echo", () => {
    const view = initialView();
    apply(view, { type: "round_start", round: 1, deadline: 530, ink_budget: 100 },
      CONFIG);
    view.pendingStroke = [[0, 0], [50, 50]];
    apply(view, { type: "stroke", points: [[0, 0], [30, 30]] }, CONFIG);
    expect(view.pendingStroke).toBeNull();
    expect(view.strokes).toEqual([[[0, 0], [30, 30]]]);
  });

  it("reconnection replay (joined + round_start) renders a live round", () => {
    const view = initialView();
    applyAll(view, msgs(
      { type: "joined", player_id: "P3",
        roster: [{ player_id: "P1", name: "Ada" },
                 { player_id: "P3", name: "Cy" }] },
      { type: "role", role: "guesser" },
      { type: "round_start", round: 2, deadline: 900, ink_budget: 350 },
      { type: "ink_update", used: 120, budget: 350 },
    ));
    expect(view.playerId).toBe("P3");
    expect(view.round?.active).toBe(true);
    expect(view.round?.number).toBe(2);
    expect(inkFraction(view)).toBeCloseTo(120 / 350, 12);
    expect(view.codeWord).toBeNull();
  });

  it("errors surface without touching game state", () => {
    const view = initialView();
    apply(view, { type: "error", code: "ink_exhausted", message: "spent" },
      CONFIG);
    expect(view.lastError).toBe("ink_exhausted: spent");
    expect(view.round).toBeNull();
  });
});
