// WebSocket client with automatic reconnect. Controls go out as protocol
// messages; widget state only moves when the server echoes it back.

import { CHANNELS, Channel, ControlMessage, ServerMessage, parseServerMessage } from "./protocol.js";
import { ConsoleState } from "./state.js";

export interface WebSocketLike {
  onopen: ((ev?: unknown) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  send(data: string): void;
  close(): void;
  readyState: number;
}

export type SocketFactory = (url: string) => WebSocketLike;

export interface ClientOptions {
  /** Socket constructor; defaults to the browser WebSocket. */
  factory?: SocketFactory;
  /** Base reconnect delay in ms (doubles per attempt, capped). */
  backoffMs?: number;
  maxBackoffMs?: number;
  onChange?: (state: ConsoleState) => void;
  warn?: (message: string) => void;
}

const OPEN = 1;

export class ConsoleClient {
  readonly state = new ConsoleState();
  private socket: WebSocketLike | null = null;
  private attempts = 0;
  private stopped = false;
  private readonly factory: SocketFactory;
  private readonly backoffMs: number;
  private readonly maxBackoffMs: number;
  private readonly onChange: (state: ConsoleState) => void;
  private readonly warn: (message: string) => void;

  constructor(private url: string, options: ClientOptions = {}) {
    this.factory =
      options.factory ?? ((u) => new WebSocket(u) as unknown as WebSocketLike);
    this.backoffMs = options.backoffMs ?? 500;
    this.maxBackoffMs = options.maxBackoffMs ?? 15_000;
    this.onChange = options.onChange ?? (() => {});
    this.warn = options.warn ?? ((m) => console.warn(m));
  }

  connect(): void {
    this.stopped = false;
    const socket = this.factory(this.url);
    this.socket = socket;
    socket.onopen = () => {
      this.attempts = 0;
      this.state.connected = true;
      this.onChange(this.state);
    };
    socket.onmessage = (ev) => {
      const message = parseServerMessage(String(ev.data));
      if (message === null) {
        this.warn("ignoring malformed server message");
        return;
      }
      this.handle(message);
    };
    socket.onclose = () => {
      this.state.connected = false;
      this.onChange(this.state);
      this.scheduleReconnect();
    };
    socket.onerror = () => {
      // close follows; reconnect is handled there
    };
  }

  close(): void {
    this.stopped = true;
    this.socket?.close();
    this.socket = null;
  }

  get connected(): boolean {
    return this.state.connected && this.socket?.readyState === OPEN;
  }

  /** Send a control message; no-op with a warning while disconnected. */
  send(message: ControlMessage): boolean {
    if (!this.socket || this.socket.readyState !== OPEN) {
      this.warn("not connected; control dropped");
      return false;
    }
    this.socket.send(JSON.stringify(message));
    return true;
  }

  toggleTap(channel: Channel): boolean {
    const enabled = !this.state.taps[channel];
    return this.send({ type: "tap", channel, enabled });
  }

  setFader(target: Channel | "master", gain: number): boolean {
    const gains = [...this.state.mixer.gains];
    let master = this.state.mixer.master;
    if (target === "master") {
      master = gain;
    } else {
      gains[CHANNELS.indexOf(target)] = gain;
    }
    return this.send({ type: "mixer", gains, master });
  }

  setAlertParams(window: number, triggerCount: number, threshold: number): boolean {
    return this.send({
      type: "alert_params",
      window,
      trigger_count: triggerCount,
      threshold,
    });
  }

  private handle(message: ServerMessage): void {
    if (message.type === "disconnect") {
      this.warn(`server disconnected us: ${message.reason ?? "unspecified"}`);
    }
    this.state.apply(message);
    this.onChange(this.state);
  }

  private scheduleReconnect(): void {
    if (this.stopped) return;
    const delay = Math.min(this.backoffMs * 2 ** this.attempts, this.maxBackoffMs);
    this.attempts += 1;
    setTimeout(() => {
      if (!this.stopped) this.connect();
    }, delay);
  }
}
