/** Browser entry point: wires the canvas, keyboard, drag, and progress bar
 * to a correction session on the service. */

import { ApiClient } from "./api.js";
import { paintScene } from "./canvas.js";
import { SessionController } from "./controller.js";
import { DragController, type CanvasView } from "./drag.js";
import { keyToEvent } from "./keyboard.js";
import { buildScene, progressInfo, scrubTarget } from "./scene.js";
import type { AoiRect } from "./types.js";
import { clampViewOptions, defaultViewOptions } from "./view.js";

function parseAoiCsv(text: string): AoiRect[] {
  const [header, ...rows] = text.trim().split("\n");
  const cols = header.split(",");
  const idx = (name: string) => cols.indexOf(name);
  return rows.map((row) => {
    const cells = row.split(",");
    return {
      x: Number(cells[idx("x")]),
      y: Number(cells[idx("y")]),
      width: Number(cells[idx("width")]),
      height: Number(cells[idx("height")]),
      line: Number(cells[idx("line")]),
      part: Number(cells[idx("part")]),
    };
  });
}

function downloadText(name: string, text: string): void {
  const blob = new Blob([text], { type: "application/json" });
  const a = document.createElement("a");
  a.href = URL.createObjectURL(blob);
  a.download = name;
  a.click();
  URL.revokeObjectURL(a.href);
}

async function boot(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const baseUrl = params.get("service") ?? "http://127.0.0.1:8000";
  const trialId = params.get("trial");
  const algorithm = params.get("algorithm") ?? "warp";
  if (!trialId) {
    document.body.textContent = "Pass ?trial=<id>&algorithm=<name> in the URL (and optionally &service=<base-url>).";
    return;
  }

  const api = new ApiClient(baseUrl);
  const created = await api.createSession(trialId, algorithm);
  const controller = new SessionController(api, created.session_id, created.state);
  const aois = parseAoiCsv(await api.getAoisCsv(trialId));

  const canvas = document.getElementById("scene") as HTMLCanvasElement;
  const progress = document.getElementById("progress") as HTMLProgressElement;
  const label = document.getElementById("label") as HTMLSpanElement;
  const exportButton = document.getElementById("export") as HTMLButtonElement;
  const ctx = canvas.getContext("2d")!;

  const view: CanvasView = { zoom: 1, width: canvas.width, height: canvas.height };
  const options = clampViewOptions(defaultViewOptions());
  const drag = new DragController(view);

  const backdrop = new Image();
  backdrop.src = api.stimulusUrl(trialId);
  backdrop.onerror = () => render(); // stimulus is optional
  backdrop.onload = () => render();

  function render(): void {
    const items = buildScene(controller.state, options, { aois, ghost: drag.ghost });
    paintScene(ctx, items, view, backdrop.complete && backdrop.naturalWidth > 0 ? backdrop : undefined);
    const info = progressInfo(controller.state);
    progress.max = info.total;
    progress.value = info.current;
    label.textContent = `${info.current} / ${info.total}${info.complete ? " (complete)" : ""}` +
      (controller.lastWarning ? ` — ${controller.lastWarning}` : "");
  }

  controller.onChange(render);

  window.addEventListener("keydown", (ev) => {
    const event = keyToEvent(ev);
    if (!event) return;
    ev.preventDefault();
    void controller.send(event);
  });

  canvas.addEventListener("mousedown", (ev) => {
    const rect = canvas.getBoundingClientRect();
    drag.begin(controller.state, ev.clientX - rect.left, ev.clientY - rect.top);
  });
  canvas.addEventListener("mousemove", (ev) => {
    if (!drag.active) return;
    const rect = canvas.getBoundingClientRect();
    drag.move(ev.clientX - rect.left, ev.clientY - rect.top);
    render();
  });
  window.addEventListener("mouseup", (ev) => {
    if (!drag.active) return;
    const rect = canvas.getBoundingClientRect();
    const event = drag.end(ev.clientX - rect.left, ev.clientY - rect.top);
    if (event) void controller.send(event);
    else render();
  });

  progress.addEventListener("click", (ev) => {
    const rect = progress.getBoundingClientRect();
    const fraction = (ev.clientX - rect.left) / rect.width;
    void controller.send({ kind: "seek", index: scrubTarget(controller.state, fraction) });
  });

  exportButton.addEventListener("click", async () => {
    const exported = await controller.export();
    downloadText(`${trialId}.corrected.json`, exported.trial_file);
    downloadText(`${trialId}.meta.json`, exported.log_file);
  });

  render();
}

void boot();
