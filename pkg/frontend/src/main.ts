/** Browser entry point: loads the layout, opens the message channel, wires
 * pointer capture, and renders every state change. Optional replay mode
 * (?replay=URL&speed=N) feeds a recorded touch log through the same channel. */
import { BufferedChannel } from "./channel.js";
import { PointerCapture } from "./capture.js";
import type { LayoutData } from "./protocol.js";
import { parseTouchLog, replayTrace } from "./replay.js";
import {
  renderBanner,
  renderLayout,
  renderState,
  type ViewElements,
} from "./render.js";
import { applyServer, initialState, type UIState } from "./state.js";

function els(): ViewElements {
  const get = (id: string) => document.getElementById(id) as HTMLElement;
  return {
    board: get("board"),
    target: get("target"),
    text: get("text"),
    suggestions: get("suggestions"),
    metrics: get("metrics"),
    banner: get("banner"),
    toast: get("toast"),
  };
}

async function start(): Promise<void> {
  const view = els();
  const layout: LayoutData = await (await fetch("/layout")).json();
  renderLayout(view.board, layout);

  const channel = new BufferedChannel();
  let state: UIState = initialState();
  const selectSuggestion = (rank: number) =>
    channel.send({ kind: "suggest", rank });
  const repaint = () => renderState(view, state, selectSuggestion);

  channel.onStatus((s) => renderBanner(view.banner, s.connected, s.dropped));

  const proto = location.protocol === "https:" ? "wss" : "ws";
  const ws = new WebSocket(`${proto}://${location.host}/ws`);
  ws.addEventListener("open", () => {
    state = { ...state, connection: "open" };
    channel.attach(ws);
    channel.send({ kind: "open" });
    repaint();
  });
  ws.addEventListener("close", () => {
    state = { ...state, connection: "closed" };
    channel.detach();
    repaint();
  });
  ws.addEventListener("message", (ev) => {
    let msg: unknown;
    try {
      msg = JSON.parse(ev.data as string);
    } catch {
      msg = ev.data;
    }
    state = applyServer(state, msg);
    repaint();
  });

  const capture = new PointerCapture("browser", (e) =>
    channel.send({ kind: "touch", e }),
  );
  const rect = () => view.board.getBoundingClientRect();
  view.board.addEventListener("pointerdown", (ev) => {
    view.board.setPointerCapture(ev.pointerId);
    capture.down(ev.pointerId, rect(), ev.clientX, ev.clientY, performance.now());
  });
  view.board.addEventListener("pointermove", (ev) =>
    capture.move(ev.pointerId, rect(), ev.clientX, ev.clientY, performance.now()),
  );
  const finish = (ev: PointerEvent) =>
    capture.up(ev.pointerId, rect(), ev.clientX, ev.clientY, performance.now());
  view.board.addEventListener("pointerup", finish);
  view.board.addEventListener("pointercancel", finish);

  const params = new URLSearchParams(location.search);
  const traceUrl = params.get("replay");
  if (traceUrl) {
    const speed = Number(params.get("speed") ?? "1");
    const trace = parseTouchLog(await (await fetch(traceUrl)).text());
    await replayTrace(trace, (m) => channel.send(m), { speed });
  }
}

start().catch((err) => {
  console.error(err);
  const banner = document.getElementById("banner");
  if (banner) {
    banner.textContent = String(err);
    banner.classList.add("visible");
  }
});
