/** Shared types mirroring the correction service's JSON payloads. */

export type FixationTriple = [x: number, y: number, duration: number];

export interface AnchorState {
  x: number;
  y: number;
  line: number;
}

export interface SuggestionState {
  line: number;
  y: number;
}

/** Session state as returned by the service; the UI never mutates it locally. */
export interface SessionState {
  session_id: string;
  trial_id: string;
  algorithm: string;
  current: number;
  finished: boolean;
  n_fixations: number;
  fixations: FixationTriple[];
  anchors: Record<string, AnchorState>;
  suggestions: Record<string, SuggestionState>;
  current_suggestion: SuggestionState | null;
  line_ys: number[];
  word_centers: [number, number][];
}

export type EventKind =
  | "accept"
  | "move"
  | "line_above"
  | "line_below"
  | "line_n"
  | "back"
  | "next"
  | "undo"
  | "seek"
  | "finish";

export interface SessionEvent {
  kind: EventKind;
  x?: number;
  y?: number;
  n?: number;
  index?: number;
}

export interface EventResponse {
  state: SessionState;
  warning?: string;
}

export interface ExportResponse {
  trial: unknown;
  log: unknown[];
  /** Exact file text; saving this byte-for-byte matches the CLI output. */
  trial_file: string;
  log_file: string;
}

export interface AoiRect {
  x: number;
  y: number;
  width: number;
  height: number;
  line: number;
  part: number;
}
