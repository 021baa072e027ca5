/** View options: visibility toggles, colors, sizes, color-blind palette. */

export interface ViewOptions {
  showFixations: boolean;
  showSaccades: boolean;
  showAois: boolean;
  showRemaining: boolean;
  showSuggestion: boolean;
  fixationColor: string;
  currentColor: string;
  suggestionColor: string;
  remainingColor: string;
  aoiColor: string;
  saccadeColor: string;
  opacity: number;
  /** Circle radius is duration * RADIUS_PER_MS * radiusScale. */
  radiusScale: number;
  saccadeWidth: number;
  colorBlind: boolean;
}

/** Base radius contribution per millisecond of fixation duration. */
export const RADIUS_PER_MS = 0.05;

export const OPACITY_RANGE: [number, number] = [0, 1];
export const RADIUS_SCALE_RANGE: [number, number] = [0.1, 5];

export function defaultViewOptions(): ViewOptions {
  return {
    showFixations: true,
    showSaccades: true,
    showAois: true,
    showRemaining: true,
    showSuggestion: true,
    fixationColor: "red",
    currentColor: "magenta",
    suggestionColor: "blue",
    remainingColor: "grey",
    aoiColor: "black",
    saccadeColor: "red",
    opacity: 0.6,
    radiusScale: 1,
    saccadeWidth: 1,
    colorBlind: false,
  };
}

/**
 * Effective colors after the color-blind mode. The accessible palette is
 * magenta-green-blue: the red fixation/saccade class becomes green, the
 * current (magenta) and suggestion (blue) classes already fit.
 */
export function effectiveColors(options: ViewOptions): {
  fixation: string;
  current: string;
  suggestion: string;
  remaining: string;
  aoi: string;
  saccade: string;
} {
  const fixation = options.colorBlind ? "green" : options.fixationColor;
  return {
    fixation,
    current: options.currentColor,
    suggestion: options.suggestionColor,
    remaining: options.remainingColor,
    aoi: options.aoiColor,
    saccade: options.colorBlind ? "green" : options.saccadeColor,
  };
}

export function clampViewOptions(options: ViewOptions): ViewOptions {
  return {
    ...options,
    opacity: Math.min(Math.max(options.opacity, OPACITY_RANGE[0]), OPACITY_RANGE[1]),
    radiusScale: Math.min(Math.max(options.radiusScale, RADIUS_SCALE_RANGE[0]), RADIUS_SCALE_RANGE[1]),
  };
}
