/** Keyboard-first workflow: draw, toggle side, step frames, save, review. */

export type Mode = "annotate" | "review";

export type Action =
  | { kind: "save" }
  | { kind: "next-frame" }
  | { kind: "prev-frame" }
  | { kind: "cycle-side" }
  | { kind: "delete-box" }
  | { kind: "cycle-selection" }
  | { kind: "play-pause" }
  | { kind: "next-switch" }
  | { kind: "toggle-identity"; rank: number };

/**
 * Map a KeyboardEvent.key to a UI action for the given mode, or null when
 * the key is unbound. Frame stepping works in both modes; editing keys only
 * while annotating, playback keys only while reviewing.
 */
export function actionForKey(key: string, mode: Mode): Action | null {
  switch (key) {
    case "n":
    case "ArrowRight":
      return { kind: "next-frame" };
    case "p":
    case "ArrowLeft":
      return { kind: "prev-frame" };
  }
  if (mode === "annotate") {
    switch (key) {
      case "s":
        return { kind: "cycle-side" };
      case "Delete":
      case "Backspace":
        return { kind: "delete-box" };
      case "Tab":
        return { kind: "cycle-selection" };
      case "Enter":
        return { kind: "save" };
    }
    return null;
  }
  switch (key) {
    case " ":
      return { kind: "play-pause" };
    case "j":
      return { kind: "next-switch" };
  }
  if (key.length === 1 && key >= "0" && key <= "9") {
    return { kind: "toggle-identity", rank: Number(key) };
  }
  return null;
}
