// DOM rendering of the view-model. Pure output: reads ClientView, writes
// elements; all inputs are wired up in main.ts.

import { CANVAS_UNITS } from "./draw.js";
import type { Point } from "./protocol.js";
import { inkFraction, type ClientView } from "./state.js";

export interface Elements {
  lobby: HTMLElement;
  game: HTMLElement;
  status: HTMLElement;
  roomLabel: HTMLElement;
  roster: HTMLElement;
  roleLabel: HTMLElement;
  codeWord: HTMLElement;
  timer: HTMLElement;
  canvas: HTMLCanvasElement;
  inkBar: HTMLElement;
  inkText: HTMLElement;
  nnBox: HTMLElement;
  nnPercent: HTMLElement;
  nnGuess: HTMLElement;
  feed: HTMLElement;
  score: HTMLElement;
  banner: HTMLElement;
  guessRow: HTMLElement;
  startButton: HTMLButtonElement;
}

export function grab(): Elements {
  const get = (id: string) => {
    const el = document.getElementById(id);
    if (!el) throw new Error(`missing element #${id}`);
    return el;
  };
  return {
    lobby: get("lobby"),
    game: get("game"),
    status: get("status"),
    roomLabel: get("room-label"),
    roster: get("roster"),
    roleLabel: get("role-label"),
    codeWord: get("code-word"),
    timer: get("timer"),
    canvas: get("canvas") as HTMLCanvasElement,
    inkBar: get("ink-bar"),
    inkText: get("ink-text"),
    nnBox: get("nn-box"),
    nnPercent: get("nn-percent"),
    nnGuess: get("nn-guess"),
    feed: get("feed"),
    score: get("score"),
    banner: get("banner"),
    guessRow: get("guess-row"),
    startButton: get("start-button") as HTMLButtonElement,
  };
}

function drawStroke(ctx: CanvasRenderingContext2D, points: Point[], color: string) {
  if (points.length === 0) return;
  ctx.strokeStyle = color;
  ctx.lineWidth = 2.5;
  ctx.lineCap = "round";
  ctx.lineJoin = "round";
  ctx.beginPath();
  ctx.moveTo(points[0][0], points[0][1]);
  for (const [x, y] of points.slice(1)) ctx.lineTo(x, y);
  if (points.length === 1) ctx.lineTo(points[0][0], points[0][1]);
  ctx.stroke();
}

export function render(view: ClientView, el: Elements): void {
  const inRoom = view.room !== null && view.playerId !== null;
  el.lobby.hidden = inRoom;
  el.game.hidden = !inRoom;
  el.roomLabel.textContent = view.room ? `room ${view.room}` : "";

  el.roster.textContent = view.roster
    .map((p) => (p.player_id === view.playerId ? `${p.name} (you)` : p.name))
    .join(", ");

  el.roleLabel.textContent = view.role ?? "";
  el.codeWord.textContent = view.codeWord ? `draw: ${view.codeWord}` : "";
  el.codeWord.hidden = !view.codeWord;

  // canvas
  const ctx = el.canvas.getContext("2d");
  if (ctx) {
    ctx.clearRect(0, 0, CANVAS_UNITS, CANVAS_UNITS);
    ctx.fillStyle = "#ffffff";
    ctx.fillRect(0, 0, CANVAS_UNITS, CANVAS_UNITS);
    for (const stroke of view.strokes) drawStroke(ctx, stroke, "#1a1a1a");
    if (view.pendingStroke) drawStroke(ctx, view.pendingStroke, "#7a7a7a");
  }

  // ink meter: horizontal bar plus numeric fallback
  const frac = inkFraction(view);
  const left = frac === null ? 1 : Math.max(0, 1 - frac);
  el.inkBar.style.width = `${(left * 100).toFixed(1)}%`;
  el.inkBar.classList.toggle("empty", left <= 0.001);
  el.inkText.textContent =
    view.inkUsed === null || view.inkBudget === null
      ? ""
      : `${Math.round(view.inkBudget - view.inkUsed)} / ${Math.round(view.inkBudget)}`;

  // the NN character
  el.nnBox.classList.toggle("alert", view.nn.alert);
  el.nnBox.classList.toggle("idle", view.nn.idle);
  el.nnPercent.textContent = view.nn.percent === null ? "" : `${view.nn.percent}%`;
  el.nnGuess.textContent = view.nn.lastGuess ? `"${view.nn.lastGuess}"` : "";

  // guess feed, newest last
  el.feed.replaceChildren(
    ...view.feed.map((entry) => {
      const li = document.createElement("li");
      li.textContent = `${entry.by}: ${entry.word}`;
      li.className = entry.correct ? "correct" : "incorrect";
      return li;
    }),
  );

  el.score.textContent = `humans ${view.score.humans} : ${view.score.nn} NN`;

  // between-round / end-of-match banner
  if (view.matchOver) {
    el.banner.textContent = view.matchWinner
      ? `match over: ${view.matchWinner} win${view.matchWinner === "nn" ? "s" : ""}`
      : "match over";
    el.banner.hidden = false;
  } else if (view.round && !view.round.active) {
    const who = view.round.lastWinner ?? "nobody";
    el.banner.textContent = `round ${view.round.number}: ${who} — the word was "${view.round.lastWord}"`;
    el.banner.hidden = false;
  } else {
    el.banner.hidden = true;
  }

  el.guessRow.hidden = view.role !== "guesser" || !view.round?.active;
  el.startButton.hidden = view.round !== null && !view.matchOver;

  if (view.lastError) {
    el.status.textContent = view.lastError;
    el.status.classList.add("error");
  }
}

/** Timer text from the local extrapolation target; called on a rAF loop. */
export function renderTimer(view: ClientView, el: Elements, localNow: number): void {
  if (!view.round || !view.round.active) {
    el.timer.textContent = "";
    return;
  }
  const left = Math.max(0, view.round.timerEndsAtLocal - localNow);
  el.timer.textContent = `${Math.ceil(left)}s`;
  el.timer.classList.toggle("low", left <= 5);
}
