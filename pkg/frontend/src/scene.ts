/** Pure scene construction: session state + view options -> draw list.
 *
 * Keeping this free of canvas APIs makes rendering testable; the painter in
 * canvas.ts just executes the list.
 */

import type { AoiRect, SessionState } from "./types.js";
import { RADIUS_PER_MS, type ViewOptions, effectiveColors } from "./view.js";

export type SceneItem =
  | { kind: "rect"; x: number; y: number; width: number; height: number; color: string; role: "aoi" }
  | {
      kind: "line";
      x1: number;
      y1: number;
      x2: number;
      y2: number;
      color: string;
      width: number;
      role: "saccade";
    }
  | {
      kind: "circle";
      x: number;
      y: number;
      radius: number;
      color: string;
      opacity: number;
      role: "previous" | "current" | "remaining" | "suggestion" | "ghost";
      index?: number;
    };

/** Display position of fixation i: the anchor wins once one exists. */
export function fixationPosition(state: SessionState, index: number): { x: number; y: number } {
  const anchor = state.anchors[String(index)];
  if (anchor) return { x: anchor.x, y: anchor.y };
  const [x, y] = state.fixations[index];
  return { x, y };
}

export function circleRadius(durationMs: number, radiusScale: number): number {
  return durationMs * RADIUS_PER_MS * radiusScale;
}

export interface BuildSceneExtras {
  aois?: AoiRect[];
  /** Local drag preview; rendered as a ghost without touching state. */
  ghost?: { x: number; y: number } | null;
}

export function buildScene(state: SessionState, options: ViewOptions, extras: BuildSceneExtras = {}): SceneItem[] {
  const items: SceneItem[] = [];
  const colors = effectiveColors(options);

  if (options.showAois && extras.aois) {
    for (const aoi of extras.aois) {
      items.push({ kind: "rect", x: aoi.x, y: aoi.y, width: aoi.width, height: aoi.height, color: colors.aoi, role: "aoi" });
    }
  }

  if (options.showSaccades) {
    for (let i = 0; i + 1 < state.fixations.length; i++) {
      const a = fixationPosition(state, i);
      const b = fixationPosition(state, i + 1);
      items.push({
        kind: "line",
        x1: a.x,
        y1: a.y,
        x2: b.x,
        y2: b.y,
        color: colors.saccade,
        width: options.saccadeWidth,
        role: "saccade",
      });
    }
  }

  if (options.showFixations) {
    for (let i = 0; i < state.fixations.length; i++) {
      const duration = state.fixations[i][2];
      const pos = fixationPosition(state, i);
      const radius = circleRadius(duration, options.radiusScale);
      if (i < state.current) {
        items.push({ kind: "circle", ...pos, radius, color: colors.fixation, opacity: options.opacity, role: "previous", index: i });
      } else if (i === state.current) {
        items.push({ kind: "circle", ...pos, radius, color: colors.current, opacity: options.opacity, role: "current", index: i });
      } else if (options.showRemaining) {
        items.push({ kind: "circle", ...pos, radius, color: colors.remaining, opacity: options.opacity, role: "remaining", index: i });
      }
    }
  }

  if (options.showSuggestion && state.current_suggestion && state.current < state.n_fixations) {
    const [x, , duration] = state.fixations[state.current];
    items.push({
      kind: "circle",
      x,
      y: state.current_suggestion.y,
      radius: circleRadius(duration, options.radiusScale),
      color: colors.suggestion,
      opacity: options.opacity,
      role: "suggestion",
      index: state.current,
    });
  }

  if (extras.ghost) {
    const duration = state.current < state.n_fixations ? state.fixations[state.current][2] : 100;
    items.push({
      kind: "circle",
      x: extras.ghost.x,
      y: extras.ghost.y,
      radius: circleRadius(duration, options.radiusScale),
      color: colors.current,
      opacity: options.opacity * 0.5,
      role: "ghost",
    });
  }

  return items;
}

export interface ProgressInfo {
  current: number;
  total: number;
  fraction: number;
  complete: boolean;
}

export function progressInfo(state: SessionState): ProgressInfo {
  const fraction = state.n_fixations === 0 ? 1 : state.current / state.n_fixations;
  return {
    current: state.current,
    total: state.n_fixations,
    fraction,
    complete: state.current >= state.n_fixations,
  };
}

/** Map a progress-bar fraction to the seek event's target index. */
export function scrubTarget(state: SessionState, fraction: number): number {
  const clamped = Math.min(Math.max(fraction, 0), 1);
  return Math.min(Math.round(clamped * state.n_fixations), state.n_fixations);
}
