// Pointer-to-stroke capture: a pointer-down..up drag becomes one stroke,
// downsampled to at most one point per minimum movement distance, sent on
// pointer-up and echoed locally until the authoritative broadcast returns.

import type { Point } from "./protocol.js";

export const CANVAS_UNITS = 256;
export const MIN_POINT_SPACING_PX = 4;

/** Keep the first point, then only points at least minDist away from the
 * last kept one; the final point is always kept so endpoints survive. */
export function downsample(points: Point[], minDist: number): Point[] {
  if (points.length <= 1) return points.slice();
  const out: Point[] = [points[0]];
  for (let i = 1; i < points.length - 1; i++) {
    const [px, py] = out[out.length - 1];
    const [x, y] = points[i];
    if (Math.hypot(x - px, y - py) >= minDist) out.push(points[i]);
  }
  out.push(points[points.length - 1]);
  return out;
}

export function clampToCanvas([x, y]: Point): Point {
  return [
    Math.min(CANVAS_UNITS, Math.max(0, x)),
    Math.min(CANVAS_UNITS, Math.max(0, y)),
  ];
}

export interface DrawCallbacks {
  canDraw(): boolean;                 // role, round, and ink gates
  onStroke(points: Point[]): void;    // fired with the downsampled stroke
  onEcho(points: Point[] | null): void;  // live local preview
  onRejected(): void;                 // ink exhausted feedback
}

/** Wire pointer events on a canvas element; coordinates are mapped from
 * CSS pixels into the 256x256 logical canvas. */
export function attachDrawing(canvas: HTMLCanvasElement, cb: DrawCallbacks): void {
  let current: Point[] | null = null;

  const toLogical = (ev: PointerEvent): Point => {
    const rect = canvas.getBoundingClientRect();
    return clampToCanvas([
      ((ev.clientX - rect.left) / rect.width) * CANVAS_UNITS,
      ((ev.clientY - rect.top) / rect.height) * CANVAS_UNITS,
    ]);
  };

  canvas.addEventListener("pointerdown", (ev) => {
    if (!cb.canDraw()) {
      cb.onRejected();
      return;
    }
    canvas.setPointerCapture(ev.pointerId);
    current = [toLogical(ev)];
    cb.onEcho(current);
  });

  canvas.addEventListener("pointermove", (ev) => {
    if (!current) return;
    current.push(toLogical(ev));
    cb.onEcho(current);
  });

  const finish = () => {
    if (!current) return;
    const stroke = downsample(current, MIN_POINT_SPACING_PX);
    current = null;
    cb.onEcho(stroke);
    cb.onStroke(stroke);
  };

  canvas.addEventListener("pointerup", finish);
  canvas.addEventListener("pointercancel", () => {
    current = null;
    cb.onEcho(null);
  });
}
