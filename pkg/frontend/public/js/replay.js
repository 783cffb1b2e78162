const KINDS = new Set(["down", "move", "up"]);
function fail(lineNo, why) {
    throw new Error(`touch-log schema mismatch at line ${lineNo}: ${why}`);
}
/** Parse and validate a JSONL touch log; throws on any schema mismatch. */
export function parseTouchLog(text) {
    const events = [];
    const lastT = new Map();
    const lines = text.split("\n");
    for (let i = 0; i < lines.length; i++) {
        const line = lines[i].trim();
        if (line === "")
            continue;
        let obj;
        try {
            obj = JSON.parse(line);
        }
        catch {
            fail(i + 1, "not valid JSON");
        }
        const d = obj;
        if (typeof d.session !== "string")
            fail(i + 1, "missing session");
        if (typeof d.word_id !== "number")
            fail(i + 1, "missing word_id");
        if (typeof d.kind !== "string" || !KINDS.has(d.kind)) {
            fail(i + 1, `bad kind ${JSON.stringify(d.kind)}`);
        }
        if (typeof d.t !== "number" || !Number.isFinite(d.t))
            fail(i + 1, "bad t");
        for (const axis of ["x", "y"]) {
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
            kind: d.kind,
            t: d.t,
            x: d.x,
            y: d.y,
            ...(typeof d.intent === "boolean" ? { intent: d.intent } : {}),
        });
    }
    return events;
}
const defaultSleep = (ms) => new Promise((resolve) => setTimeout(resolve, ms));
/** Feed events through `send` at recorded (or accelerated) timing. */
export async function replayTrace(events, send, opts = {}) {
    const speed = opts.speed ?? 1;
    const sleep = opts.sleep ?? defaultSleep;
    let prevT = null;
    for (const e of events) {
        if (prevT !== null && Number.isFinite(speed)) {
            const gap = (e.t - prevT) / speed;
            if (gap > 0)
                await sleep(gap);
        }
        prevT = e.t;
        send({ kind: "touch", e });
    }
    return events.length;
}
