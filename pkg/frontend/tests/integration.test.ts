/** End-to-end tests against a real local typing service.
 *
 * Spawns the Python server, replays bundled touch logs through the same
 * channel/replay/state modules the browser uses, and checks the resulting
 * committed text against the expected transcripts. Skipped automatically
 * when the server binary is unavailable.
 */
import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { readFileSync } from "node:fs";
import { createServer } from "node:net";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { WebSocket } from "ws";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { BufferedChannel } from "../src/channel.js";
import { PointerCapture } from "../src/capture.js";
import type { ClientMessage } from "../src/protocol.js";
import { parseTouchLog, replayTrace } from "../src/replay.js";
import { applyServer, initialState, type UIState } from "../src/state.js";

const here = dirname(fileURLToPath(import.meta.url));
const fixtures = join(here, "..", "..", "src", "handsdown", "data", "fixtures");

const haveServer = spawnSync("handsdown", ["--help"]).status === 0;
const suite = haveServer ? describe : describe.skip;

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const srv = createServer();
    srv.listen(0, "127.0.0.1", () => {
      const addr = srv.address();
      if (addr === null || typeof addr === "string") {
        reject(new Error("no port"));
        return;
      }
      srv.close(() => resolve(addr.port));
    });
    srv.on("error", reject);
  });
}

async function waitHealthy(port: number, timeoutMs = 120_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    try {
      const res = await fetch(`http://127.0.0.1:${port}/healthz`);
      if (res.ok) return;
    } catch {
      // not up yet
    }
    if (Date.now() > deadline) throw new Error("server never became healthy");
    await new Promise((r) => setTimeout(r, 250));
  }
}

/** A connected client session: socket + channel + message-folded state. */
class TestClient {
  readonly channel = new BufferedChannel();
  readonly received: unknown[] = [];
  state: UIState = initialState();
  private waiters: Array<() => void> = [];

  private constructor(readonly ws: WebSocket) {}

  static async connect(port: number, open: ClientMessage): Promise<TestClient> {
    const ws = new WebSocket(`ws://127.0.0.1:${port}/ws`);
    const client = new TestClient(ws);
    ws.on("message", (data) => {
      const msg = JSON.parse(data.toString());
      client.received.push(msg);
      client.state = applyServer(client.state, msg);
      for (const w of client.waiters.splice(0)) w();
    });
    await new Promise<void>((resolve, reject) => {
      ws.once("open", () => resolve());
      ws.once("error", reject);
    });
    client.channel.attach({
      readyState: 1,
      send: (s: string) => ws.send(s),
    });
    client.channel.send(open);
    await client.waitFor((s) => s.sessionId !== null);
    return client;
  }

  send(msg: ClientMessage): void {
    this.channel.send(msg);
  }

  async waitFor(pred: (s: UIState, received: unknown[]) => boolean,
                timeoutMs = 60_000): Promise<void> {
    const deadline = Date.now() + timeoutMs;
    while (!pred(this.state, this.received)) {
      if (Date.now() > deadline) throw new Error("timed out waiting for state");
      await new Promise<void>((resolve) => {
        this.waiters.push(resolve);
        setTimeout(resolve, 500);
      });
    }
  }

  close(): void {
    this.ws.close();
  }
}

suite("against a live typing service", () => {
  let proc: ChildProcess;
  let port: number;

  beforeAll(async () => {
    port = await freePort();
    proc = spawn("handsdown", [
      "serve", "--addr", `127.0.0.1:${port}`, "--backend", "ngram",
      "--phrases", join(fixtures, "phrases_10.txt"),
    ], { stdio: "ignore" });
    await waitHealthy(port);
  }, 150_000);

  afterAll(() => {
    proc?.kill("SIGTERM");
  });

  it("serves the layout JSON the keyboard renders from", async () => {
    const res = await fetch(`http://127.0.0.1:${port}/layout`);
    const layout = await res.json();
    expect(layout.layout_version).toBe("1");
    expect(Object.keys(layout.keys)).toContain("space");
    expect(Object.keys(layout.keys)).toContain("a");
  });

  it("replays the drift trace to an eligible commit with a full " +
     "suggestion bar", async () => {
    const client = await TestClient.connect(port, { kind: "open" });
    try {
      const trace = parseTouchLog(
        readFileSync(join(fixtures, "eligible_trace.jsonl"), "utf8"));
      await replayTrace(trace, (m) => client.send(m), { speed: Infinity });
      await client.waitFor((s) => s.intermediate === "ekigible");
      expect(client.state.marks.some((m) => !m.intent)).toBe(true);
      client.send({ kind: "space" });
      await client.waitFor((s) => s.committedText !== "");
      expect(client.state.committedText).toBe("eligible ");
      const ranks = client.state.suggestions.map((x) => x.rank);
      expect(ranks[0]).toBe(2);
      expect(ranks).toEqual([...ranks].sort((a, b) => a - b));
      const literals = client.state.suggestions.filter((x) => x.literal);
      expect(literals).toHaveLength(1);
      expect(literals[0].word).toBe("ekigible");
    } finally {
      client.close();
    }
  }, 60_000);

  it("replays the bundled 10-phrase session to the expected transcript",
     async () => {
    const expected = readFileSync(
      join(fixtures, "session_10phrases.expected.txt"), "utf8")
      .trim().split("\n");
    const client = await TestClient.connect(port, { kind: "open" });
    try {
      expect(client.state.targetPhrase).not.toBeNull();
      const trace = parseTouchLog(
        readFileSync(join(fixtures, "session_10phrases.jsonl"), "utf8"));
      await replayTrace(trace, (m) => client.send(m), { speed: Infinity });
      await client.waitFor((s) => s.results.length >= expected.length,
                           120_000);
      expect(client.state.results.map((r) => r.transcribed.trim()))
        .toEqual(expected);
      expect(client.state.done).toBe(true);
    } finally {
      client.close();
    }
  }, 180_000);

  it("suggestion selection swaps the last committed word", async () => {
    const client = await TestClient.connect(port, { kind: "open" });
    try {
      const trace = parseTouchLog(
        readFileSync(join(fixtures, "eligible_trace.jsonl"), "utf8"));
      await replayTrace(trace, (m) => client.send(m), { speed: Infinity });
      client.send({ kind: "space" });
      await client.waitFor((s) => s.suggestionsActive);
      const pick = client.state.suggestions[0];
      client.send({ kind: "suggest", rank: pick.rank });
      await client.waitFor((s) => s.committedText === `${pick.word} `);
      expect(client.state.suggestionsActive).toBe(false);
    } finally {
      client.close();
    }
  }, 60_000);

  it("disabling the network freezes committed text under further touches",
     async () => {
    const client = await TestClient.connect(port, { kind: "open" });
    try {
      const trace = parseTouchLog(
        readFileSync(join(fixtures, "eligible_trace.jsonl"), "utf8"));
      await replayTrace(trace, (m) => client.send(m), { speed: Infinity });
      client.send({ kind: "space" });
      await client.waitFor((s) => s.committedText !== "");
      const frozen = client.state.committedText;

      // Simulate the network dropping out: the channel loses its socket and
      // the user keeps typing through the normal capture path.
      client.channel.detach();
      const capture = new PointerCapture("browser",
                                         (e) => client.send({ kind: "touch", e }));
      const rect = { left: 0, top: 0, width: 100, height: 100 };
      for (let i = 0; i < 20; i++) {
        capture.down(i, rect, 30, 20, i * 100);
        capture.up(i, rect, 30, 20, i * 100 + 50);
      }
      client.send({ kind: "space" });
      await new Promise((r) => setTimeout(r, 500));
      expect(client.state.committedText).toBe(frozen);
      expect(client.channel.status.connected).toBe(false);
      expect(client.channel.status.buffered).toBeGreaterThan(0);
    } finally {
      client.close();
    }
  }, 60_000);
});
