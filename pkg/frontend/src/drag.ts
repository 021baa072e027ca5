/** Drag-and-drop of the current fixation.
 *
 * Pointer positions arrive in canvas coordinates; the emitted move event
 * carries stimulus coordinates (canvas maps 1:1 to stimulus pixels at zoom
 * 1, zoom is a pure view transform). Dragging anything but the current
 * fixation is ignored; dropping outside the canvas cancels.
 */

import { fixationPosition } from "./scene.js";
import type { SessionEvent, SessionState } from "./types.js";

export interface CanvasView {
  zoom: number;
  width: number;
  height: number;
}

export function canvasToStimulus(view: CanvasView, x: number, y: number): { x: number; y: number } {
  return { x: x / view.zoom, y: y / view.zoom };
}

export function stimulusToCanvas(view: CanvasView, x: number, y: number): { x: number; y: number } {
  return { x: x * view.zoom, y: y * view.zoom };
}

const GRAB_RADIUS_PX = 15;

export class DragController {
  private dragging = false;
  ghost: { x: number; y: number } | null = null;

  constructor(private readonly view: CanvasView) {}

  /** Begin a drag if the pointer grabbed the current fixation. */
  begin(state: SessionState, canvasX: number, canvasY: number): boolean {
    if (state.current >= state.n_fixations) return false;
    const pos = fixationPosition(state, state.current);
    const here = canvasToStimulus(this.view, canvasX, canvasY);
    const grab = Math.hypot(here.x - pos.x, here.y - pos.y) <= GRAB_RADIUS_PX / this.view.zoom;
    if (!grab) return false;
    this.dragging = true;
    this.ghost = here;
    return true;
  }

  /** Update the local ghost; no state mutation while dragging. */
  move(canvasX: number, canvasY: number): void {
    if (!this.dragging) return;
    this.ghost = canvasToStimulus(this.view, canvasX, canvasY);
  }

  /** Drop: emits the move event, or null when cancelled / not dragging. */
  end(canvasX: number, canvasY: number): SessionEvent | null {
    if (!this.dragging) return null;
    this.dragging = false;
    this.ghost = null;
    const inside = canvasX >= 0 && canvasY >= 0 && canvasX <= this.view.width && canvasY <= this.view.height;
    if (!inside) return null;
    const pos = canvasToStimulus(this.view, canvasX, canvasY);
    return { kind: "move", x: pos.x, y: pos.y };
  }

  cancel(): void {
    this.dragging = false;
    this.ghost = null;
  }

  get active(): boolean {
    return this.dragging;
  }
}
