const OPEN = 1;
export class BufferedChannel {
    constructor(maxBuffer = 256) {
        this.maxBuffer = maxBuffer;
        this.socket = null;
        this.buffer = [];
        this.droppedCount = 0;
        this.listeners = [];
    }
    get status() {
        return {
            connected: this.socket !== null && this.socket.readyState === OPEN,
            buffered: this.buffer.length,
            dropped: this.droppedCount,
        };
    }
    onStatus(fn) {
        this.listeners.push(fn);
    }
    notify() {
        const s = this.status;
        for (const fn of this.listeners)
            fn(s);
    }
    /** Attach a live socket and flush anything buffered while disconnected. */
    attach(socket) {
        this.socket = socket;
        this.flush();
        this.notify();
    }
    /** Mark the socket gone; subsequent sends buffer then drop. */
    detach() {
        this.socket = null;
        this.notify();
    }
    flush() {
        if (!this.socket || this.socket.readyState !== OPEN)
            return;
        while (this.buffer.length > 0) {
            this.socket.send(this.buffer.shift());
        }
    }
    send(msg) {
        const frame = JSON.stringify(msg);
        if (this.socket && this.socket.readyState === OPEN) {
            this.flush();
            this.socket.send(frame);
            return;
        }
        if (this.buffer.length >= this.maxBuffer) {
            this.droppedCount += 1;
        }
        else {
            this.buffer.push(frame);
        }
        this.notify();
    }
}
