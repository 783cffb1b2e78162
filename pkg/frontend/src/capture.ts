/** Pointer capture: normalizes raw contacts into touch-log events.
 *
 * Coordinates are mapped into the layout's [0,1]^2 space. A contact that
 * starts outside the keyboard is ignored entirely; a tracked contact that
 * drifts out is clamped to the boundary so its lifecycle stays well formed.
 * Multiple concurrent contacts are tracked independently by pointer id, and
 * events are emitted in capture order.
 */
import type { RawTouchEvent, TouchKind } from "./protocol.js";

export interface Rect {
  left: number;
  top: number;
  width: number;
  height: number;
}

/** Map client coordinates into the unit square, or null when outside. */
export function normalizePoint(
  rect: Rect,
  clientX: number,
  clientY: number,
): { x: number; y: number } | null {
  if (rect.width <= 0 || rect.height <= 0) return null;
  const x = (clientX - rect.left) / rect.width;
  const y = (clientY - rect.top) / rect.height;
  if (x < 0 || x > 1 || y < 0 || y > 1) return null;
  return { x, y };
}

const clamp01 = (v: number) => Math.min(1, Math.max(0, v));

export class PointerCapture {
  private readonly active = new Set<number>();
  /** Incremented by the caller at word boundaries (Space). */
  wordId = 0;

  constructor(
    private readonly session: string,
    private readonly emit: (e: RawTouchEvent) => void,
  ) {}

  get activeContacts(): number {
    return this.active.size;
  }

  private event(kind: TouchKind, x: number, y: number, t: number): RawTouchEvent {
    return {
      session: this.session,
      word_id: this.wordId,
      kind,
      t,
      x: clamp01(x),
      y: clamp01(y),
    };
  }

  /** New contact; ignored when it starts outside the keyboard. */
  down(id: number, rect: Rect, clientX: number, clientY: number, t: number): void {
    const p = normalizePoint(rect, clientX, clientY);
    if (!p) return;
    this.active.add(id);
    this.emit(this.event("down", p.x, p.y, t));
  }

  move(id: number, rect: Rect, clientX: number, clientY: number, t: number): void {
    if (!this.active.has(id) || rect.width <= 0 || rect.height <= 0) return;
    const x = (clientX - rect.left) / rect.width;
    const y = (clientY - rect.top) / rect.height;
    this.emit(this.event("move", x, y, t));
  }

  up(id: number, rect: Rect, clientX: number, clientY: number, t: number): void {
    if (!this.active.has(id) || rect.width <= 0 || rect.height <= 0) return;
    this.active.delete(id);
    const x = (clientX - rect.left) / rect.width;
    const y = (clientY - rect.top) / rect.height;
    this.emit(this.event("up", x, y, t));
  }
}
