/** Map client coordinates into the unit square, or null when outside. */
export function normalizePoint(rect, clientX, clientY) {
    if (rect.width <= 0 || rect.height <= 0)
        return null;
    const x = (clientX - rect.left) / rect.width;
    const y = (clientY - rect.top) / rect.height;
    if (x < 0 || x > 1 || y < 0 || y > 1)
        return null;
    return { x, y };
}
const clamp01 = (v) => Math.min(1, Math.max(0, v));
export class PointerCapture {
    constructor(session, emit) {
        this.session = session;
        this.emit = emit;
        this.active = new Set();
        /** Incremented by the caller at word boundaries (Space). */
        this.wordId = 0;
    }
    get activeContacts() {
        return this.active.size;
    }
    event(kind, x, y, t) {
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
    down(id, rect, clientX, clientY, t) {
        const p = normalizePoint(rect, clientX, clientY);
        if (!p)
            return;
        this.active.add(id);
        this.emit(this.event("down", p.x, p.y, t));
    }
    move(id, rect, clientX, clientY, t) {
        if (!this.active.has(id) || rect.width <= 0 || rect.height <= 0)
            return;
        const x = (clientX - rect.left) / rect.width;
        const y = (clientY - rect.top) / rect.height;
        this.emit(this.event("move", x, y, t));
    }
    up(id, rect, clientX, clientY, t) {
        if (!this.active.has(id) || rect.width <= 0 || rect.height <= 0)
            return;
        this.active.delete(id);
        const x = (clientX - rect.left) / rect.width;
        const y = (clientY - rect.top) / rect.height;
        this.emit(this.event("up", x, y, t));
    }
}
