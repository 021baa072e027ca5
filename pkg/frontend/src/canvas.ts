/** Thin painter: executes a scene list on a 2D canvas context. */

import type { SceneItem } from "./scene.js";
import type { CanvasView } from "./drag.js";

export function paintScene(
  ctx: CanvasRenderingContext2D,
  items: SceneItem[],
  view: CanvasView,
  backdrop?: CanvasImageSource,
): void {
  ctx.clearRect(0, 0, view.width, view.height);
  ctx.save();
  ctx.scale(view.zoom, view.zoom);
  if (backdrop) {
    ctx.drawImage(backdrop, 0, 0);
  }
  for (const item of items) {
    if (item.kind === "rect") {
      ctx.globalAlpha = 1;
      ctx.strokeStyle = item.color;
      ctx.lineWidth = 1 / view.zoom;
      ctx.strokeRect(item.x, item.y, item.width, item.height);
    } else if (item.kind === "line") {
      ctx.globalAlpha = 1;
      ctx.strokeStyle = item.color;
      ctx.lineWidth = item.width;
      ctx.beginPath();
      ctx.moveTo(item.x1, item.y1);
      ctx.lineTo(item.x2, item.y2);
      ctx.stroke();
    } else {
      ctx.globalAlpha = item.opacity;
      ctx.fillStyle = item.color;
      ctx.beginPath();
      ctx.arc(item.x, item.y, item.radius, 0, Math.PI * 2);
      ctx.fill();
    }
  }
  ctx.restore();
}
