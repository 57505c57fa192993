// DOM wiring for taps, faders and alert tuning. Widgets are disabled
// while disconnected and only display values the server has echoed.

import { ConsoleClient } from "./client.js";
import { CHANNELS, Channel } from "./protocol.js";
import { ConsoleState } from "./state.js";

export class ControlPanel {
  private doc: Document | null = null;
  private taps: Partial<Record<Channel, HTMLInputElement>> = {};
  private faders: Partial<Record<Channel, HTMLInputElement>> = {};
  private master: HTMLInputElement | null = null;
  private alertInputs: { window: HTMLInputElement; count: HTMLInputElement; threshold: HTMLInputElement } | null = null;
  private banner: HTMLElement | null = null;
  private status: HTMLElement | null = null;

  bind(doc: Document, client: ConsoleClient): void {
    this.doc = doc;
    for (const ch of CHANNELS) {
      const tap = doc.getElementById(`tap-${ch}`) as HTMLInputElement;
      tap.addEventListener("change", () => {
        client.send({ type: "tap", channel: ch, enabled: tap.checked });
      });
      this.taps[ch] = tap;

      const fader = doc.getElementById(`fader-${ch}`) as HTMLInputElement;
      fader.addEventListener("input", () => {
        client.setFader(ch, Number(fader.value));
      });
      this.faders[ch] = fader;
    }
    this.master = doc.getElementById("fader-master") as HTMLInputElement;
    this.master.addEventListener("input", () => {
      client.setFader("master", Number(this.master!.value));
    });

    this.alertInputs = {
      window: doc.getElementById("alert-window") as HTMLInputElement,
      count: doc.getElementById("alert-count") as HTMLInputElement,
      threshold: doc.getElementById("alert-threshold") as HTMLInputElement,
    };
    (doc.getElementById("alert-apply") as HTMLButtonElement).addEventListener("click", () => {
      const a = this.alertInputs!;
      const values = [Number(a.window.value), Number(a.count.value), Number(a.threshold.value)];
      if (values.every(Number.isFinite)) {
        client.setAlertParams(values[0], values[1], values[2]);
      }
    });
    this.banner = doc.getElementById("alert-banner");
    this.status = doc.getElementById("status");
  }

  /** Reflect echoed server state; never trusts local widget moves. */
  update(state: ConsoleState): void {
    const active = this.doc?.activeElement ?? null;
    for (const [i, ch] of CHANNELS.entries()) {
      const tap = this.taps[ch];
      if (tap) {
        tap.disabled = !state.connected;
        tap.checked = state.taps[ch];
      }
      const fader = this.faders[ch];
      if (fader) {
        fader.disabled = !state.connected;
        if (active !== fader) fader.value = String(state.mixer.gains[i]);
      }
    }
    if (this.master) {
      this.master.disabled = !state.connected;
      if (active !== this.master) this.master.value = String(state.mixer.master);
    }
    if (this.banner) {
      this.banner.hidden = !state.alertFiring;
    }
    if (this.status) {
      this.status.textContent = state.connected
        ? `live · tick ${state.lastIndex}`
        : "disconnected · retrying";
      this.status.className = state.connected ? "ok" : "down";
    }
  }
}
