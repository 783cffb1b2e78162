/** DOM rendering: keyboard geometry from the server's layout JSON, plus a
 * pure render of the current UIState. Kept free of any decoding logic; all
 * text shown comes straight out of the state fold. */
import type { LayoutData, Suggestion, TouchMark } from "./protocol.js";
import { layoutAspect } from "./protocol.js";
import type { UIState } from "./state.js";

export interface ViewElements {
  board: HTMLElement;
  target: HTMLElement;
  text: HTMLElement;
  suggestions: HTMLElement;
  metrics: HTMLElement;
  banner: HTMLElement;
  toast: HTMLElement;
}

/** Build key rectangles inside `board` from the layout JSON. */
export function renderLayout(board: HTMLElement, layout: LayoutData): void {
  board.innerHTML = "";
  board.style.aspectRatio = `${1 / layoutAspect(layout)}`;
  for (const [name, g] of Object.entries(layout.keys)) {
    const el = document.createElement("div");
    el.className = "key" + (name.length > 1 ? " control" : "");
    el.dataset.key = name;
    el.style.left = `${(g.cx - g.w / 2) * 100}%`;
    el.style.top = `${(g.cy - g.h / 2) * 100}%`;
    el.style.width = `${g.w * 100}%`;
    el.style.height = `${g.h * 100}%`;
    el.textContent = name.length === 1 ? name : name;
    board.appendChild(el);
  }
  const markLayer = document.createElement("div");
  markLayer.className = "marks";
  markLayer.dataset.role = "marks";
  board.appendChild(markLayer);
}

function renderMarks(board: HTMLElement, marks: TouchMark[]): void {
  const layer = board.querySelector('[data-role="marks"]');
  if (!layer) return;
  layer.innerHTML = "";
  for (const m of marks) {
    const dot = document.createElement("div");
    dot.className = m.intent ? "mark intent" : "mark suppressed";
    (dot as HTMLElement).style.left = `${m.pos.x * 100}%`;
    (dot as HTMLElement).style.top = `${m.pos.y * 100}%`;
    layer.appendChild(dot);
  }
}

function renderSuggestions(
  bar: HTMLElement,
  suggestions: Suggestion[],
  active: boolean,
  onSelect: (rank: number) => void,
): void {
  bar.innerHTML = "";
  if (!active) return;
  for (const s of suggestions) {
    const b = document.createElement("button");
    b.className = "suggestion" + (s.literal ? " literal" : "");
    b.textContent = s.word;
    b.addEventListener("click", () => onSelect(s.rank));
    bar.appendChild(b);
  }
}

export function renderState(
  els: ViewElements,
  state: UIState,
  onSelect: (rank: number) => void,
): void {
  els.target.textContent = state.targetPhrase ?? "";
  els.text.innerHTML = "";
  els.text.append(document.createTextNode(state.committedText));
  if (state.intermediate) {
    const u = document.createElement("u");
    u.textContent = state.intermediate;
    els.text.appendChild(u);
  }
  renderMarks(els.board, state.marks);
  renderSuggestions(els.suggestions, state.suggestions,
                    state.suggestionsActive, onSelect);
  if (state.results.length > 0) {
    const r = state.results[state.results.length - 1];
    els.metrics.textContent =
      `wpm ${r.wpm.toFixed(1)}  wer ${r.wer.toFixed(3)}  ` +
      `cer ${r.cer.toFixed(3)}` + (state.done ? "  (done)" : "");
  }
  els.toast.textContent = state.toast ?? "";
  els.toast.classList.toggle("visible", state.toast !== null);
}

export function renderBanner(
  banner: HTMLElement,
  connected: boolean,
  dropped: number,
): void {
  if (connected) {
    banner.classList.remove("visible");
    banner.textContent = "";
    return;
  }
  banner.classList.add("visible");
  banner.textContent = dropped > 0
    ? `disconnected: buffer full, ${dropped} touch events dropped`
    : "disconnected: buffering touch events";
}
