import type { SessionState } from "../src/types.js";

/** Three fixations on a two-line stimulus, review at index 1. */
export function makeState(overrides: Partial<SessionState> = {}): SessionState {
  return {
    session_id: "s1",
    trial_id: "t1",
    algorithm: "attach",
    current: 1,
    finished: false,
    n_fixations: 3,
    fixations: [
      [50, 130, 200],
      [150, 130, 100],
      [250, 230, 400],
    ],
    anchors: {},
    suggestions: {
      "0": { line: 1, y: 100 },
      "1": { line: 1, y: 100 },
      "2": { line: 2, y: 200 },
    },
    current_suggestion: { line: 1, y: 100 },
    line_ys: [100, 200],
    word_centers: [
      [50, 100],
      [150, 100],
      [250, 200],
    ],
    ...overrides,
  };
}
