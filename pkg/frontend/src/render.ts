import type { CanvasBox } from "./boxes.js";
import type { OverlayBox } from "./overlay.js";
import type { Side } from "./types.js";

/** The 2D-context subset the renderer touches. Structural, so tests can
 * substitute a recording stub for a real CanvasRenderingContext2D. */
export interface Context2D {
  strokeStyle: string | CanvasGradient | CanvasPattern;
  fillStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  font: string;
  clearRect(x: number, y: number, w: number, h: number): void;
  strokeRect(x: number, y: number, w: number, h: number): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  fillText(text: string, x: number, y: number): void;
  setLineDash(segments: number[]): void;
}

export interface Scene {
  width: number;
  height: number;
  /** Annotation layer: the draft's editable boxes. */
  boxes: readonly CanvasBox[];
  /** In-progress drag rectangle, drawn dashed; null when idle. */
  dragPreview: CanvasBox | null;
  /** Review layer: tracked boxes, drawn under the annotation layer. */
  overlay: readonly OverlayBox[];
}

const SIDE_COLORS: Record<Side, string> = {
  L: "#e45756",
  R: "#4c78a8",
  U: "#f2f2f2",
};

const LABEL_FONT = "12px sans-serif";

/**
 * Draw the full scene. Output is a function of the arguments alone: no
 * element state, no clock, no randomness, so one state renders one picture.
 */
export function renderScene(ctx: Context2D, scene: Scene): void {
  ctx.clearRect(0, 0, scene.width, scene.height);
  ctx.font = LABEL_FONT;

  for (const item of scene.overlay) {
    // coasted boxes are predictions, shown dashed to set them apart
    ctx.setLineDash(item.provenance === "pred" ? [6, 4] : []);
    ctx.strokeStyle = item.color;
    ctx.lineWidth = 2;
    const [x1, y1, x2, y2] = item.box;
    ctx.strokeRect(x1, y1, x2 - x1, y2 - y1);
    ctx.fillStyle = item.color;
    ctx.fillText(`hand ${item.identity}`, x1 + 2, y1 - 4);
  }

  for (const box of scene.boxes) {
    ctx.setLineDash(box.selected ? [4, 2] : []);
    ctx.strokeStyle = SIDE_COLORS[box.side];
    ctx.lineWidth = box.selected ? 3 : 2;
    ctx.strokeRect(box.x1, box.y1, box.x2 - box.x1, box.y2 - box.y1);
    ctx.fillStyle = SIDE_COLORS[box.side];
    ctx.fillText(box.side, box.x1 + 2, box.y1 - 4);
  }

  if (scene.dragPreview) {
    const d = scene.dragPreview;
    ctx.setLineDash([3, 3]);
    ctx.strokeStyle = "#aaaaaa";
    ctx.lineWidth = 1;
    ctx.strokeRect(d.x1, d.y1, d.x2 - d.x1, d.y2 - d.y1);
  }

  ctx.setLineDash([]);
}
