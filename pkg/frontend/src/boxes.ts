import type { Side, WireHand } from "./types.js";

/** One editable hand box in image pixel coordinates. */
export interface CanvasBox {
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  side: Side;
  selected: boolean;
}

const SIDE_CYCLE: Record<Side, Side> = { U: "L", L: "R", R: "U" };

/** Advance the side label: U -> L -> R -> U. */
export function cycleSide(side: Side): Side {
  return SIDE_CYCLE[side];
}

/**
 * Normalize a drag gesture into a box, whatever corner the drag started
 * from. Returns null for a degenerate drag (zero width or height); those
 * are discarded client-side and never sent to the service.
 */
export function boxFromDrag(
  ax: number,
  ay: number,
  bx: number,
  by: number,
  side: Side = "U",
): CanvasBox | null {
  const x1 = Math.min(ax, bx);
  const x2 = Math.max(ax, bx);
  const y1 = Math.min(ay, by);
  const y2 = Math.max(ay, by);
  if (x2 - x1 <= 0 || y2 - y1 <= 0) {
    return null;
  }
  return { x1, y1, x2, y2, side, selected: false };
}

/** Clip a box to the image rectangle [0, width] x [0, height]. */
export function clampToImage(box: CanvasBox, width: number, height: number): CanvasBox {
  const clamp = (v: number, hi: number) => Math.min(Math.max(v, 0), hi);
  return {
    ...box,
    x1: clamp(box.x1, width),
    y1: clamp(box.y1, height),
    x2: clamp(box.x2, width),
    y2: clamp(box.y2, height),
  };
}

/** Index of the topmost box under the point, or -1. Later boxes draw on top. */
export function hitTest(boxes: readonly CanvasBox[], x: number, y: number): number {
  for (let i = boxes.length - 1; i >= 0; i--) {
    const b = boxes[i];
    if (x >= b.x1 && x <= b.x2 && y >= b.y1 && y <= b.y2) {
      return i;
    }
  }
  return -1;
}

export function toWire(box: CanvasBox): WireHand {
  return { box: [box.x1, box.y1, box.x2, box.y2], side: box.side };
}

export function fromWire(hand: WireHand): CanvasBox {
  const [x1, y1, x2, y2] = hand.box;
  return { x1, y1, x2, y2, side: hand.side, selected: false };
}

export function sameBox(a: CanvasBox, b: CanvasBox): boolean {
  return (
    a.x1 === b.x1 && a.y1 === b.y1 && a.x2 === b.x2 && a.y2 === b.y2 && a.side === b.side
  );
}
