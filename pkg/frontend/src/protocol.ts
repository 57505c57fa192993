// Wire types for the telemetry/control protocol. The server is the single
// source of truth; the console only renders what frames say.

export const CHANNELS = ["bs", "ps", "br", "pr"] as const;
export type Channel = (typeof CHANNELS)[number];

export interface ChannelParams {
  gain: number;
  center_hz: number;
  q: number;
  tap: boolean;
  mixer_gain: number;
}

export interface MixerState {
  gains: number[];
  master: number;
}

export interface Frame {
  type: "frame";
  index: number;
  t_start: number;
  sample: Record<Channel, number>;
  returns: { rbs: number; rps: number; rbr: number; rpr: number };
  channels: Record<Channel, ChannelParams>;
  mixer: MixerState;
  alert: boolean;
  aggregate: number;
}

export interface Snapshot {
  type: "snapshot";
  config: {
    downsample: number;
    window: number;
    taps: Record<Channel, boolean>;
    mixer: MixerState;
    alert: { window: number; trigger_count: number; threshold: number };
    [key: string]: unknown;
  };
  frames: Frame[];
  aggregate_series: { index: number; value: number }[];
}

export interface AlertMessage {
  type: "alert";
  index: number;
  firing: boolean;
}

export interface DisconnectMessage {
  type: "disconnect";
  reason?: string;
}

export type ServerMessage = Frame | Snapshot | AlertMessage | DisconnectMessage;

export type ControlMessage =
  | { type: "tap"; channel: Channel; enabled: boolean }
  | { type: "mixer"; gains: number[]; master: number }
  | {
      type: "scaler";
      channel: Channel;
      target: "gain" | "center";
      in_min: number;
      in_max: number;
      out_min: number;
      out_max: number;
    }
  | { type: "alert_params"; window: number; trigger_count: number; threshold: number };

/** Parse one server message; null for anything malformed (callers warn and move on). */
export function parseServerMessage(data: string): ServerMessage | null {
  let obj: unknown;
  try {
    obj = JSON.parse(data);
  } catch {
    return null;
  }
  if (typeof obj !== "object" || obj === null) return null;
  const msg = obj as Record<string, unknown>;
  switch (msg.type) {
    case "frame":
      if (
        typeof msg.index === "number" &&
        typeof msg.returns === "object" &&
        typeof msg.channels === "object" &&
        typeof msg.aggregate === "number"
      ) {
        return msg as unknown as Frame;
      }
      return null;
    case "snapshot":
      if (typeof msg.config === "object" && Array.isArray(msg.frames)) {
        return msg as unknown as Snapshot;
      }
      return null;
    case "alert":
      if (typeof msg.index === "number" && typeof msg.firing === "boolean") {
        return msg as unknown as AlertMessage;
      }
      return null;
    case "disconnect":
      return msg as unknown as DisconnectMessage;
    default:
      return null;
  }
}
