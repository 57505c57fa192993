import { describe, expect, it } from "vitest";

import { Frame, Snapshot, parseServerMessage } from "../src/protocol.js";
import { ConsoleState } from "../src/state.js";

export function makeFrame(index: number, overrides: Partial<Frame> = {}): Frame {
  const params = { gain: 0.5, center_hz: 800, q: 4, tap: true, mixer_gain: 1 };
  return {
    type: "frame",
    index,
    t_start: index,
    sample: { bs: 100, ps: 2, br: 50, pr: 1 },
    returns: { rbs: 0.1 * index, rps: 0, rbr: 0, rpr: 0 },
    channels: { bs: { ...params }, ps: { ...params }, br: { ...params }, pr: { ...params } },
    mixer: { gains: [1, 1, 1, 1], master: 0.7 },
    alert: false,
    aggregate: 150,
    ...overrides,
  };
}

export function makeSnapshot(overrides: Partial<Snapshot> = {}): Snapshot {
  return {
    type: "snapshot",
    config: {
      downsample: 5,
      window: 10,
      taps: { bs: true, ps: true, br: true, pr: true },
      mixer: { gains: [1, 1, 1, 1], master: 0.7 },
      alert: { window: 30, trigger_count: 10, threshold: 2.0 },
    },
    frames: [],
    aggregate_series: [],
    ...overrides,
  };
}

describe("ConsoleState", () => {
  it("applies snapshot config and replays its frames", () => {
    const state = new ConsoleState();
    const snapshot = makeSnapshot({ frames: [makeFrame(3), makeFrame(4)] });
    state.applySnapshot(snapshot);
    expect(state.window).toBe(10);
    expect(state.downsample).toBe(5);
    expect(state.series.bs.map((p) => p.index)).toEqual([3, 4]);
    expect(state.lastIndex).toBe(4);
  });

  it("keeps at most window points and scrolls the oldest off", () => {
    const state = new ConsoleState();
    state.applySnapshot(makeSnapshot());
    for (let i = 0; i < 25; i++) state.applyFrame(makeFrame(i));
    expect(state.series.bs.length).toBe(10);
    expect(state.series.bs[0].index).toBe(15); // oldest scrolled off
  });

  it("plot series equal the frame returns exactly", () => {
    const state = new ConsoleState();
    const frames = [0, 1, 2].map((i) =>
      makeFrame(i, { returns: { rbs: i + 0.25, rps: -i, rbr: 0.5 * i, rpr: 0 } }),
    );
    frames.forEach((f) => state.applyFrame(f));
    expect(state.series.bs.map((p) => p.value)).toEqual([0.25, 1.25, 2.25]);
    expect(state.series.ps.map((p) => p.value)).toEqual([-0, -1, -2]);
    expect(state.series.br.map((p) => p.value)).toEqual([0, 0.5, 1.0]);
  });

  it("downsamples the aggregate series by the configured factor", () => {
    const state = new ConsoleState();
    state.applySnapshot(makeSnapshot());
    const n = 23;
    for (let i = 0; i < n; i++) state.applyFrame(makeFrame(i));
    expect(state.aggregate.length).toBe(Math.ceil(n / 5));
    expect(state.aggregate.map((p) => p.index)).toEqual([0, 5, 10, 15, 20]);
  });

  it("widget state follows server echoes", () => {
    const state = new ConsoleState();
    state.applySnapshot(makeSnapshot());
    expect(state.taps.ps).toBe(true);
    const frame = makeFrame(1, { mixer: { gains: [0.2, 1, 1, 1], master: 0.5 } });
    frame.channels.ps.tap = false;
    state.applyFrame(frame);
    expect(state.taps.ps).toBe(false);
    expect(state.mixer.gains[0]).toBe(0.2);
    expect(state.mixer.master).toBe(0.5);
  });

  it("tracks the alert flag from frames and alert messages", () => {
    const state = new ConsoleState();
    state.applyFrame(makeFrame(0, { alert: true }));
    expect(state.alertFiring).toBe(true);
    state.apply({ type: "alert", index: 1, firing: false });
    expect(state.alertFiring).toBe(false);
  });

  it("keeps a persistent per-channel peak for spike markers", () => {
    const state = new ConsoleState();
    state.applySnapshot(makeSnapshot());
    state.applyFrame(makeFrame(0, { returns: { rbs: -6, rps: 0, rbr: 0, rpr: 0 } }));
    for (let i = 1; i < 15; i++) state.applyFrame(makeFrame(i, { returns: { rbs: 0, rps: 0, rbr: 0, rpr: 0 } }));
    expect(state.peak.bs).toBe(6); // spike stays visible after scrolling off
  });
});

describe("parseServerMessage", () => {
  it("accepts valid messages", () => {
    expect(parseServerMessage(JSON.stringify(makeFrame(1)))?.type).toBe("frame");
    expect(parseServerMessage(JSON.stringify(makeSnapshot()))?.type).toBe("snapshot");
    expect(parseServerMessage('{"type":"alert","index":3,"firing":true}')?.type).toBe("alert");
  });

  it("rejects malformed payloads", () => {
    expect(parseServerMessage("not json")).toBeNull();
    expect(parseServerMessage('{"type":"frame"}')).toBeNull();
    expect(parseServerMessage('{"type":"mystery"}')).toBeNull();
    expect(parseServerMessage("42")).toBeNull();
  });
});
