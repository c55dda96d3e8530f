// Bootstrap: wire the connection, the view-model, pointer drawing, and the
// form controls together. The client renders only what the server says.

import { attachDrawing } from "./draw.js";
import { Connection } from "./net.js";
import { canonicalWord } from "./protocol.js";
import { apply, initialView, inkRemaining, type ClientConfig } from "./state.js";
import { grab, render, renderTimer } from "./ui.js";

const config: ClientConfig = { roundSeconds: 30, threshold: 0.5 };
const view = initialView();
const el = grab();

const wsUrl = `${location.protocol === "https:" ? "wss" : "ws"}://${location.host}/ws`;
const conn = new Connection(wsUrl, {
  onMessage(msg) {
    apply(view, msg, config);
    render(view, el);
  },
  onStatus(status) {
    el.status.textContent = status === "open" ? "" : status;
    el.status.classList.remove("error");
  },
});

fetch("/info")
  .then((r) => r.json())
  .then((info: { round_seconds: number; confidence_threshold: number }) => {
    config.roundSeconds = info.round_seconds;
    config.threshold = info.confidence_threshold;
  })
  .catch(() => undefined);   // defaults hold when /info is unreachable

conn.connect();

const nameInput = document.getElementById("name-input") as HTMLInputElement;
const roomInput = document.getElementById("room-input") as HTMLInputElement;
const guessInput = document.getElementById("guess-input") as HTMLInputElement;

document.getElementById("create-button")!.addEventListener("click", () => {
  conn.send({ type: "create_room" });
});

// Creating a room answers with its code; join it automatically.
const autoJoin = () => {
  if (view.room && view.playerId === null && nameInput.value.trim()) {
    const name = nameInput.value.trim();
    conn.rememberJoin(view.room, name);
    conn.send({ type: "join", room: view.room, name });
  }
};
setInterval(autoJoin, 200);

document.getElementById("join-button")!.addEventListener("click", () => {
  const room = roomInput.value.trim().toUpperCase();
  const name = nameInput.value.trim();
  if (!room || !name) return;
  view.room = room;
  conn.rememberJoin(room, name);
  conn.send({ type: "join", room, name });
});

el.startButton.addEventListener("click", () => {
  conn.send({ type: "start_match" });
});

attachDrawing(el.canvas, {
  canDraw: () =>
    view.role === "sketcher" && !!view.round?.active && inkRemaining(view) > 0,
  onStroke(points) {
    conn.send({ type: "stroke", points });
  },
  onEcho(points) {
    view.pendingStroke = points;
    render(view, el);
  },
  onRejected() {
    // Guesser drags are silently ignored; only the Sketcher out of ink
    // gets the meter flash.
    if (view.role !== "sketcher") return;
    el.inkBar.classList.add("flash");
    setTimeout(() => el.inkBar.classList.remove("flash"), 400);
  },
});

guessInput.addEventListener("keydown", (ev) => {
  if (ev.key !== "Enter") return;
  const word = canonicalWord(guessInput.value);
  if (!word) return;
  conn.send({ type: "guess", word });
  guessInput.value = "";
});

function tick() {
  renderTimer(view, el, Date.now() / 1000);
  requestAnimationFrame(tick);
}
render(view, el);
tick();
