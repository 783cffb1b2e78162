/** JSON message types shared with the typing service (one object per frame). */

export type TouchKind = "down" | "move" | "up";

/** One touch lifecycle event in the touch-log schema. */
export interface RawTouchEvent {
  session: string;
  word_id: number;
  kind: TouchKind;
  t: number; // milliseconds, non-decreasing per session
  x: number; // normalized [0, 1]
  y: number; // normalized [0, 1]
  intent?: boolean; // ground-truth annotation, never used for decoding
}

// -- client -> server ------------------------------------------------------

export interface OpenMessage {
  kind: "open";
  backend?: string;
  phrase_set?: string[];
}

export interface TouchMessage {
  kind: "touch";
  e: RawTouchEvent;
}

export interface SpaceMessage {
  kind: "space";
}

export interface BackspaceMessage {
  kind: "backspace";
}

export interface EnterMessage {
  kind: "enter";
}

export interface SuggestMessage {
  kind: "suggest";
  rank: number;
}

export type ClientMessage =
  | OpenMessage
  | TouchMessage
  | SpaceMessage
  | BackspaceMessage
  | EnterMessage
  | SuggestMessage;

// -- server -> client ------------------------------------------------------

export interface TouchMark {
  pos: { x: number; y: number };
  intent: boolean;
}

export interface Suggestion {
  rank: number;
  word: string;
  literal: boolean;
}

export interface LatencyInfo {
  decode_ms: number;
  end_to_end_ms: number;
}

export interface OpenedMessage {
  kind: "opened";
  session: string;
  backend: string;
  phrase: string | null;
}

export interface IntermediateMessage {
  kind: "intermediate";
  letters: string;
  marks: TouchMark[];
}

export interface CommitMessage {
  kind: "commit";
  word: string;
  suggestions: Suggestion[];
  latency: LatencyInfo;
  degraded: boolean;
}

export interface ReplaceMessage {
  kind: "replace";
  word: string;
}

export interface BackspaceReply {
  kind: "backspace";
  removed: boolean;
}

export interface PhraseResultMessage {
  kind: "phrase_result";
  target: string;
  transcribed: string;
  wpm: number;
  wer: number;
  cer: number;
  latencies: LatencyInfo[];
  done: boolean;
}

export interface PhraseMessage {
  kind: "phrase";
  text: string;
}

export interface ErrorMessage {
  kind: "error";
  code: string;
  msg: string;
}

export interface AckMessage {
  kind: "ack";
  msg: string;
}

export type ServerMessage =
  | OpenedMessage
  | IntermediateMessage
  | CommitMessage
  | ReplaceMessage
  | BackspaceReply
  | PhraseResultMessage
  | PhraseMessage
  | ErrorMessage
  | AckMessage;

// -- layout JSON (served at /layout) ----------------------------------------

export interface KeyGeometry {
  cx: number;
  cy: number;
  w: number;
  h: number;
  row: number;
  hand: "left" | "right";
  finger: number;
  col: number;
}

export interface LayoutData {
  layout_version: string;
  keys: Record<string, KeyGeometry>;
}

/** Width:height proportion for rendering the normalized unit square.
 *
 * The layout file carries no physical dimensions; keys are drawn square-ish
 * by scaling the unit square so that a median letter key's on-screen cell is
 * as wide as it is tall.
 */
export function layoutAspect(layout: LayoutData): number {
  const letters = Object.entries(layout.keys).filter(([k]) => k.length === 1);
  if (letters.length === 0) return 2.5;
  const ratios = letters.map(([, g]) => g.h / g.w).sort((a, b) => a - b);
  return ratios[Math.floor(ratios.length / 2)];
}
