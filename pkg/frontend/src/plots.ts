// Canvas line charts: four per-tick return plots and the slower aggregate
// plot. Pure helpers are separated from drawing so the mapping from frames
// to pixels is testable without a canvas.

import { CHANNELS, Channel } from "./protocol.js";
import { ConsoleState, SeriesPoint } from "./state.js";

export interface PlotScale {
  min: number;
  max: number;
}

/** Y-range with headroom; the persistent peak keeps past spikes visible. */
export function plotScale(points: SeriesPoint[], persistentPeak = 0): PlotScale {
  let lo = 0;
  let hi = 0;
  for (const p of points) {
    if (p.value < lo) lo = p.value;
    if (p.value > hi) hi = p.value;
  }
  hi = Math.max(hi, persistentPeak);
  lo = Math.min(lo, -persistentPeak);
  if (hi === lo) {
    hi += 1;
    lo -= 1;
  }
  const pad = 0.1 * (hi - lo);
  return { min: lo - pad, max: hi + pad };
}

/** Values of a channel's plot, exactly as frames reported them. */
export function channelSeries(state: ConsoleState, channel: Channel): number[] {
  return state.series[channel].map((p) => p.value);
}

export function toPixels(
  points: SeriesPoint[],
  scale: PlotScale,
  width: number,
  height: number,
): Array<[number, number]> {
  if (points.length === 0) return [];
  const first = points[0].index;
  const span = Math.max(points[points.length - 1].index - first, 1);
  return points.map((p) => {
    const x = ((p.index - first) / span) * (width - 1);
    const y = (1 - (p.value - scale.min) / (scale.max - scale.min)) * (height - 1);
    return [x, y];
  });
}

function drawSeries(
  canvas: HTMLCanvasElement,
  points: SeriesPoint[],
  scale: PlotScale,
  color: string,
): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  ctx.strokeStyle = "#444";
  ctx.lineWidth = 1;
  const zeroY = (1 - (0 - scale.min) / (scale.max - scale.min)) * (height - 1);
  ctx.beginPath();
  ctx.moveTo(0, zeroY);
  ctx.lineTo(width, zeroY);
  ctx.stroke();
  const pixels = toPixels(points, scale, width, height);
  if (pixels.length === 0) return;
  ctx.strokeStyle = color;
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  pixels.forEach(([x, y], i) => (i === 0 ? ctx.moveTo(x, y) : ctx.lineTo(x, y)));
  ctx.stroke();
}

const COLORS: Record<Channel, string> = {
  bs: "#4fc3f7",
  ps: "#81c784",
  br: "#ffb74d",
  pr: "#e57373",
};

export class PlotPanel {
  private channelCanvases: Partial<Record<Channel, HTMLCanvasElement>> = {};
  private aggregateCanvas: HTMLCanvasElement | null = null;
  private dirty = false;

  bind(doc: Document): void {
    for (const ch of CHANNELS) {
      this.channelCanvases[ch] = doc.getElementById(`plot-${ch}`) as HTMLCanvasElement;
    }
    this.aggregateCanvas = doc.getElementById("plot-aggregate") as HTMLCanvasElement;
  }

  markDirty(): void {
    this.dirty = true;
  }

  /** Called on animation frames; draws only when new data arrived. */
  render(state: ConsoleState): void {
    if (!this.dirty) return;
    this.dirty = false;
    for (const ch of CHANNELS) {
      const canvas = this.channelCanvases[ch];
      if (!canvas) continue;
      const points = state.series[ch];
      drawSeries(canvas, points, plotScale(points, state.peak[ch]), COLORS[ch]);
    }
    if (this.aggregateCanvas) {
      const points = state.aggregate;
      drawSeries(this.aggregateCanvas, points, plotScale(points), "#b39ddb");
    }
  }
}
