import { ConsoleClient } from "./client.js";
import { ControlPanel } from "./controls.js";
import { PlotPanel } from "./plots.js";

function endpoint(): string {
  const params = new URLSearchParams(window.location.search);
  const override = params.get("endpoint");
  if (override) return override;
  const host = window.location.host || "127.0.0.1:8765";
  return `ws://${host}/ws`;
}

function boot(): void {
  const plots = new PlotPanel();
  const controls = new ControlPanel();
  const client = new ConsoleClient(endpoint(), {
    onChange: (state) => {
      plots.markDirty();
      controls.update(state);
    },
  });
  plots.bind(document);
  controls.bind(document, client);
  client.connect();

  const frame = () => {
    plots.render(client.state);
    window.requestAnimationFrame(frame);
  };
  window.requestAnimationFrame(frame);
}

window.addEventListener("load", boot);
