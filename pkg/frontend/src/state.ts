// Console state: rolling plot series plus the last server-acknowledged
// widget values. Every number here is copied out of a received message;
// nothing is recomputed client-side.

import {
  AlertMessage,
  CHANNELS,
  Channel,
  Frame,
  MixerState,
  ServerMessage,
  Snapshot,
} from "./protocol.js";

export interface SeriesPoint {
  index: number;
  value: number;
}

const RETURN_KEY: Record<Channel, keyof Frame["returns"]> = {
  bs: "rbs",
  ps: "rps",
  br: "rbr",
  pr: "rpr",
};

export class ConsoleState {
  connected = false;
  window = 300;
  downsample = 5;
  lastIndex = -1;
  alertFiring = false;
  taps: Record<Channel, boolean> = { bs: true, ps: true, br: true, pr: true };
  mixer: MixerState = { gains: [1, 1, 1, 1], master: 0.7 };
  alertParams = { window: 30, trigger_count: 10, threshold: 2.0 };
  series: Record<Channel, SeriesPoint[]> = { bs: [], ps: [], br: [], pr: [] };
  aggregate: SeriesPoint[] = [];
  /** Highest |return| seen per channel, for the persistent spike marker. */
  peak: Record<Channel, number> = { bs: 0, ps: 0, br: 0, pr: 0 };

  applySnapshot(snapshot: Snapshot): void {
    const cfg = snapshot.config;
    if (typeof cfg.window === "number") this.window = cfg.window;
    if (typeof cfg.downsample === "number") this.downsample = cfg.downsample;
    if (cfg.taps) this.taps = { ...this.taps, ...cfg.taps };
    if (cfg.mixer) this.mixer = cfg.mixer as MixerState;
    if (cfg.alert) this.alertParams = cfg.alert as ConsoleState["alertParams"];
    for (const ch of CHANNELS) this.series[ch] = [];
    this.aggregate = snapshot.aggregate_series.slice(-this.window);
    this.lastIndex = -1;
    for (const frame of snapshot.frames) this.applyFrame(frame);
  }

  applyFrame(frame: Frame): void {
    this.lastIndex = frame.index;
    this.alertFiring = frame.alert;
    this.mixer = frame.mixer;
    for (const ch of CHANNELS) {
      const params = frame.channels[ch];
      if (params) this.taps[ch] = params.tap;
      const value = frame.returns[RETURN_KEY[ch]];
      const series = this.series[ch];
      series.push({ index: frame.index, value });
      if (series.length > this.window) series.shift();
      const magnitude = Math.abs(value);
      if (magnitude > this.peak[ch]) this.peak[ch] = magnitude;
    }
    if (frame.index % this.downsample === 0) {
      this.aggregate.push({ index: frame.index, value: frame.aggregate });
      if (this.aggregate.length > this.window) this.aggregate.shift();
    }
  }

  apply(message: ServerMessage): void {
    switch (message.type) {
      case "snapshot":
        this.applySnapshot(message);
        break;
      case "frame":
        this.applyFrame(message);
        break;
      case "alert":
        this.alertFiring = (message as AlertMessage).firing;
        break;
      case "disconnect":
        this.connected = false;
        break;
    }
  }
}
