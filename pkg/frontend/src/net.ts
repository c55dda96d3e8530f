// WebSocket wrapper: JSON framing, automatic pong replies, and
// reconnection that re-joins the last room (the server replays the roster
// and current round state to late joiners).

import type { ClientMessage, ServerMessage } from "./protocol.js";

export interface NetCallbacks {
  onMessage(msg: ServerMessage): void;
  onStatus(status: "connecting" | "open" | "closed"): void;
}

export class Connection {
  private ws: WebSocket | null = null;
  private url: string;
  private cb: NetCallbacks;
  private rejoin: { room: string; name: string } | null = null;
  private retryMs = 500;
  private closedByUser = false;

  constructor(url: string, cb: NetCallbacks) {
    this.url = url;
    this.cb = cb;
  }

  connect(): void {
    this.cb.onStatus("connecting");
    this.ws = new WebSocket(this.url);
    this.ws.onopen = () => {
      this.retryMs = 500;
      this.cb.onStatus("open");
      if (this.rejoin) this.send({ type: "join", ...this.rejoin });
    };
    this.ws.onmessage = (ev) => {
      let msg: ServerMessage;
      try {
        msg = JSON.parse(ev.data as string) as ServerMessage;
      } catch {
        return;
      }
      if (msg.type === "ping") {
        this.send({ type: "pong" });
        return;
      }
      this.cb.onMessage(msg);
    };
    this.ws.onclose = () => {
      this.cb.onStatus("closed");
      if (!this.closedByUser) {
        setTimeout(() => this.connect(), this.retryMs);
        this.retryMs = Math.min(this.retryMs * 2, 8000);
      }
    };
  }

  /** Remember room+name so a dropped connection re-joins automatically. */
  rememberJoin(room: string, name: string): void {
    this.rejoin = { room, name };
  }

  send(msg: ClientMessage): void {
    if (this.ws && this.ws.readyState === WebSocket.OPEN) {
      this.ws.send(JSON.stringify(msg));
    }
  }

  close(): void {
    this.closedByUser = true;
    this.ws?.close();
  }
}
