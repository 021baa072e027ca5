/** Keyboard shortcut map: one key press -> at most one session event.
 *
 * space accepts, `a`/`z` move to the line above/below, 1-9 jump to that
 * line, arrows navigate, ctrl/cmd+z undoes.
 */

import type { SessionEvent } from "./types.js";

export interface KeyPress {
  key: string;
  ctrlKey?: boolean;
  metaKey?: boolean;
  altKey?: boolean;
}

export function keyToEvent(press: KeyPress): SessionEvent | null {
  const modifier = Boolean(press.ctrlKey || press.metaKey);
  if (modifier) {
    return press.key.toLowerCase() === "z" ? { kind: "undo" } : null;
  }
  if (press.altKey) return null;

  switch (press.key) {
    case " ":
    case "Spacebar":
      return { kind: "accept" };
    case "a":
    case "A":
      return { kind: "line_above" };
    case "z":
    case "Z":
      return { kind: "line_below" };
    case "ArrowLeft":
      return { kind: "back" };
    case "ArrowRight":
      return { kind: "next" };
    default:
      break;
  }
  if (press.key.length === 1 && press.key >= "1" && press.key <= "9") {
    return { kind: "line_n", n: Number(press.key) };
  }
  return null;
}
