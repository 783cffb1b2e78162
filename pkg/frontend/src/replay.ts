/** Replay of recorded touch logs through the live message channel.
 *
 * A trace is one JSON object per line in the touch-log schema. Events are
 * fed at recorded timing, or accelerated by a speed factor (Infinity sends
 * them back to back), through the same send path the live keyboard uses, so
 * a replayed session exercises exactly the production code path.
 */
import type { ClientMessage, RawTouchEvent, TouchKind } from "./protocol.js";

const KINDS: ReadonlySet<string> = new Set(["down", "move", "up"]);

function fail(lineNo: number, why: string): never {
  throw new Error(`touch-log schema mismatch at line ${lineNo}: ${why}`);
}

/** Parse and validate a JSONL touch log; throws on any schema mismatch. */
export function parseTouchLog(text: string): RawTouchEvent[] {
  const events: RawTouchEvent[] = [];
  const lastT = new Map<string, number>();
  const lines = text.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (line === "") continue;
    let obj: unknown;
    try {
      obj = JSON.parse(line);
    } catch {
      fail(i + 1, "not valid JSON");
    }
    const d = obj as Record<string, unknown>;
    if (typeof d.session !== "string") fail(i + 1, "missing session");
    if (typeof d.word_id !== "number") fail(i + 1, "missing word_id");
    if (typeof d.kind !== "string" || !KINDS.has(d.kind)) {
      fail(i + 1, `bad kind ${JSON.stringify(d.kind)}`);
    }
    if (typeof d.t !== "number" || !Number.isFinite(d.t)) fail(i + 1, "bad t");
    for (const axis of ["x", "y"] as const) {
      const v = d[axis];
      if (typeof v !== "number" || v < 0 || v > 1) {
        fail(i + 1, `${axis} outside [0, 1]`);
      }
    }
    const prev = lastT.get(d.session);
    if (prev !== undefined && d.t < prev) {
      fail(i + 1, "timestamps decrease within a session");
    }
    lastT.set(d.session, d.t);
    events.push({
      session: d.session,
      word_id: d.word_id,
      kind: d.kind as TouchKind,
      t: d.t,
      x: d.x as number,
      y: d.y as number,
      ...(typeof d.intent === "boolean" ? { intent: d.intent } : {}),
    });
  }
  return events;
}

export interface ReplayOptions {
  /** Timing divisor: 1 = recorded timing, Infinity = no waiting. */
  speed?: number;
  sleep?: (ms: number) => Promise<void>;
}

const defaultSleep = (ms: number) =>
  new Promise<void>((resolve) => setTimeout(resolve, ms));

/** Feed events through `send` at recorded (or accelerated) timing. */
export async function replayTrace(
  events: RawTouchEvent[],
  send: (msg: ClientMessage) => void,
  opts: ReplayOptions = {},
): Promise<number> {
  const speed = opts.speed ?? 1;
  const sleep = opts.sleep ?? defaultSleep;
  let prevT: number | null = null;
  for (const e of events) {
    if (prevT !== null && Number.isFinite(speed)) {
      const gap = (e.t - prevT) / speed;
      if (gap > 0) await sleep(gap);
    }
    prevT = e.t;
    send({ kind: "touch", e });
  }
  return events.length;
}
