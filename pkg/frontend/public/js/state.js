export function initialState() {
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
function dropLastWord(text) {
    const words = text.split(" ").filter((w) => w.length > 0);
    words.pop();
    return words.length ? words.join(" ") + " " : "";
}
function swapLastWord(text, word) {
    return dropLastWord(text) + word + " ";
}
function warn(state, note) {
    return { ...state, warnings: [...state.warnings, note] };
}
/** Fold one server message into the state; malformed input leaves the
 * previous state unchanged apart from a warning entry. */
export function applyServer(state, msg) {
    if (typeof msg !== "object" || msg === null || !("kind" in msg)) {
        return warn(state, `malformed message: ${JSON.stringify(msg)}`);
    }
    const m = msg;
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
            if (!m.removed)
                return state;
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
            return warn(state, `unknown message kind: ${m.kind}`);
    }
}
/** Fold a whole message sequence from the initial state. */
export function foldMessages(msgs, start) {
    return msgs.reduce(applyServer, start ?? initialState());
}
