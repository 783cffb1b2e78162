/** Outbound message channel with bounded buffering across disconnects.
 *
 * While the socket is open, messages go straight out in call order. While it
 * is closed, messages are buffered up to a bound and then dropped; listeners
 * are notified so the UI can show a banner. Reconnecting flushes whatever is
 * still buffered, preserving order.
 */
import type { ClientMessage } from "./protocol.js";

/** The subset of WebSocket the channel needs; tests supply fakes. */
export interface SocketLike {
  readyState: number;
  send(data: string): void;
}

const OPEN = 1;

export interface ChannelStatus {
  connected: boolean;
  buffered: number;
  dropped: number;
}

export class BufferedChannel {
  private socket: SocketLike | null = null;
  private buffer: string[] = [];
  private droppedCount = 0;
  private listeners: Array<(s: ChannelStatus) => void> = [];

  constructor(private readonly maxBuffer: number = 256) {}

  get status(): ChannelStatus {
    return {
      connected: this.socket !== null && this.socket.readyState === OPEN,
      buffered: this.buffer.length,
      dropped: this.droppedCount,
    };
  }

  onStatus(fn: (s: ChannelStatus) => void): void {
    this.listeners.push(fn);
  }

  private notify(): void {
    const s = this.status;
    for (const fn of this.listeners) fn(s);
  }

  /** Attach a live socket and flush anything buffered while disconnected. */
  attach(socket: SocketLike): void {
    this.socket = socket;
    this.flush();
    this.notify();
  }

  /** Mark the socket gone; subsequent sends buffer then drop. */
  detach(): void {
    this.socket = null;
    this.notify();
  }

  private flush(): void {
    if (!this.socket || this.socket.readyState !== OPEN) return;
    while (this.buffer.length > 0) {
      this.socket.send(this.buffer.shift()!);
    }
  }

  send(msg: ClientMessage): void {
    const frame = JSON.stringify(msg);
    if (this.socket && this.socket.readyState === OPEN) {
      this.flush();
      this.socket.send(frame);
      return;
    }
    if (this.buffer.length >= this.maxBuffer) {
      this.droppedCount += 1;
    } else {
      this.buffer.push(frame);
    }
    this.notify();
  }
}
