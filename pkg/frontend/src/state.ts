/** Pure UI state fold over server messages.
 *
 * All rendered text is a function of the messages received so far; the client
 * never decodes anything itself. `applyServer` returns a new state and leaves
 * its input untouched, so replaying the same message sequence always yields
 * the same state.
 */
import type {
  LatencyInfo,
  ServerMessage,
  Suggestion,
  TouchMark,
} from "./protocol.js";

export type ConnectionStatus = "connecting" | "open" | "closed";

export interface PhraseOutcome {
  target: string;
  transcribed: string;
  wpm: number;
  wer: number;
  cer: number;
}

export interface UIState {
  connection: ConnectionStatus;
  sessionId: string | null;
  backend: string | null;
  targetPhrase: string | null;
  /** Committed words joined with single spaces plus a trailing space. */
  committedText: string;
  /** Live underlined intermediate letter sequence for the word in progress. */
  intermediate: string;
  /** Per-touch markers: intent=true intentional style, false suppressed. */
  marks: TouchMark[];
  suggestions: Suggestion[];
  suggestionsActive: boolean;
  lastLatency: LatencyInfo | null;
  degraded: boolean;
  results: PhraseOutcome[];
  done: boolean;
  toast: string | null;
  /** Malformed or unknown messages, logged without touching the rest. */
  warnings: string[];
}

export function initialState(): UIState {
  return {
    connection: "connecting",
    sessionId: null,
    backend: null,
    targetPhrase: null,
    committedText: "",
    intermediate: "",
    marks: [],
    suggestions: [],
    suggestionsActive: false,
    lastLatency: null,
    degraded: false,
    results: [],
    done: false,
    toast: null,
    warnings: [],
  };
}

function dropLastWord(text: string): string {
  const words = text.split(" ").filter((w) => w.length > 0);
  words.pop();
  return words.length ? words.join(" ") + " " : "";
}

function swapLastWord(text: string, word: string): string {
  return dropLastWord(text) + word + " ";
}

function warn(state: UIState, note: string): UIState {
  return { ...state, warnings: [...state.warnings, note] };
}

/** Fold one server message into the state; malformed input leaves the
 * previous state unchanged apart from a warning entry. */
export function applyServer(state: UIState, msg: unknown): UIState {
  if (typeof msg !== "object" || msg === null || !("kind" in msg)) {
    return warn(state, `malformed message: ${JSON.stringify(msg)}`);
  }
  const m = msg as ServerMessage;
  switch (m.kind) {
    case "opened":
      return {
        ...state,
        sessionId: m.session,
        backend: m.backend,
        targetPhrase: m.phrase ?? null,
      };
    case "phrase":
      return { ...state, targetPhrase: m.text };
    case "intermediate":
      if (typeof m.letters !== "string" || !Array.isArray(m.marks)) {
        return warn(state, "malformed intermediate message");
      }
      return {
        ...state,
        intermediate: m.letters,
        marks: m.marks,
        suggestions: [],
        suggestionsActive: false,
      };
    case "commit":
      if (typeof m.word !== "string" || !Array.isArray(m.suggestions)) {
        return warn(state, "malformed commit message");
      }
      return {
        ...state,
        committedText: state.committedText + m.word + " ",
        intermediate: "",
        marks: [],
        suggestions: m.suggestions,
        suggestionsActive: true,
        lastLatency: m.latency ?? null,
        degraded: Boolean(m.degraded),
      };
    case "replace":
      if (typeof m.word !== "string") {
        return warn(state, "malformed replace message");
      }
      return {
        ...state,
        committedText: swapLastWord(state.committedText, m.word),
        suggestions: [],
        suggestionsActive: false,
      };
    case "backspace":
      if (!m.removed) return state;
      return { ...state, committedText: dropLastWord(state.committedText) };
    case "phrase_result":
      return {
        ...state,
        results: [
          ...state.results,
          {
            target: m.target,
            transcribed: m.transcribed,
            wpm: m.wpm,
            wer: m.wer,
            cer: m.cer,
          },
        ],
        committedText: "",
        intermediate: "",
        marks: [],
        suggestions: [],
        suggestionsActive: false,
        done: Boolean(m.done),
      };
    case "error":
      return { ...state, toast: `${m.code}: ${m.msg}` };
    case "ack":
      return state;
    default:
      return warn(state, `unknown message kind: ${(m as { kind: string }).kind}`);
  }
}

/** Fold a whole message sequence from the initial state. */
export function foldMessages(msgs: unknown[], start?: UIState): UIState {
  return msgs.reduce<UIState>(applyServer, start ?? initialState());
}
