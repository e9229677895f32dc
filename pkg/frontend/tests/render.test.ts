import { describe, expect, it } from "vitest";

import { boxFromDrag } from "../src/boxes.js";
import { ReviewOverlay } from "../src/overlay.js";
import { renderScene } from "../src/render.js";
import type { Context2D, Scene } from "../src/render.js";
import type { TrackRecord } from "../src/types.js";

/** Records every draw call and property write in order. */
class RecordingContext implements Context2D {
  ops: unknown[][] = [];

  private _strokeStyle: string | CanvasGradient | CanvasPattern = "";
  private _fillStyle: string | CanvasGradient | CanvasPattern = "";
  private _lineWidth = 0;
  private _font = "";

  get strokeStyle() {
    return this._strokeStyle;
  }
  set strokeStyle(v) {
    this._strokeStyle = v;
    this.ops.push(["strokeStyle", v]);
  }
  get fillStyle() {
    return this._fillStyle;
  }
  set fillStyle(v) {
    this._fillStyle = v;
    this.ops.push(["fillStyle", v]);
  }
  get lineWidth() {
    return this._lineWidth;
  }
  set lineWidth(v) {
    this._lineWidth = v;
    this.ops.push(["lineWidth", v]);
  }
  get font() {
    return this._font;
  }
  set font(v) {
    this._font = v;
    this.ops.push(["font", v]);
  }

  clearRect(x: number, y: number, w: number, h: number): void {
    this.ops.push(["clearRect", x, y, w, h]);
  }
  strokeRect(x: number, y: number, w: number, h: number): void {
    this.ops.push(["strokeRect", x, y, w, h]);
  }
  fillRect(x: number, y: number, w: number, h: number): void {
    this.ops.push(["fillRect", x, y, w, h]);
  }
  fillText(text: string, x: number, y: number): void {
    this.ops.push(["fillText", text, x, y]);
  }
  setLineDash(segments: number[]): void {
    this.ops.push(["setLineDash", [...segments]]);
  }
}

const track: TrackRecord[] = [
  { video_id: "v", frame: 0, box: [5, 5, 45, 45], identity: 0, provenance: "det" },
  { video_id: "v", frame: 0, box: [60, 5, 100, 45], identity: 1, provenance: "pred" },
];

function scene(overrides: Partial<Scene> = {}): Scene {
  return {
    width: 640,
    height: 480,
    boxes: [],
    dragPreview: null,
    overlay: [],
    ...overrides,
  };
}

describe("renderScene", () => {
  it("is a pure function of the scene: same input, same draw calls", () => {
    const overlay = new ReviewOverlay(track);
    const s = scene({
      boxes: [boxFromDrag(10, 10, 50, 50, "L")!],
      overlay: overlay.boxesAt(0),
    });
    const first = new RecordingContext();
    const second = new RecordingContext();
    renderScene(first, s);
    renderScene(second, s);
    expect(first.ops).toEqual(second.ops);
    expect(first.ops.length).toBeGreaterThan(0);
  });

  it("clears the full canvas first", () => {
    const ctx = new RecordingContext();
    renderScene(ctx, scene());
    expect(ctx.ops[0]).toEqual(["clearRect", 0, 0, 640, 480]);
  });

  it("strokes each visible overlay box in its identity color", () => {
    const overlay = new ReviewOverlay(track);
    const ctx = new RecordingContext();
    renderScene(ctx, scene({ overlay: overlay.boxesAt(0) }));
    const strokes = ctx.ops.filter((op) => op[0] === "strokeRect");
    expect(strokes).toEqual([
      ["strokeRect", 5, 5, 40, 40],
      ["strokeRect", 60, 5, 40, 40],
    ]);
    const colors = ctx.ops.filter((op) => op[0] === "strokeStyle").map((op) => op[1]);
    expect(colors).toEqual([overlay.colorFor(0), overlay.colorFor(1)]);
  });

  it("omits hidden identities entirely", () => {
    const overlay = new ReviewOverlay(track);
    overlay.toggle(1);
    const ctx = new RecordingContext();
    renderScene(ctx, scene({ overlay: overlay.boxesAt(0) }));
    const labels = ctx.ops.filter((op) => op[0] === "fillText").map((op) => op[1]);
    expect(labels).toEqual(["hand 0"]);
  });

  it("dashes coasted boxes and solid-strokes detections", () => {
    const overlay = new ReviewOverlay(track);
    const ctx = new RecordingContext();
    renderScene(ctx, scene({ overlay: overlay.boxesAt(0) }));
    const dashes = ctx.ops.filter((op) => op[0] === "setLineDash").map((op) => op[1]);
    expect(dashes[0]).toEqual([]);
    expect(dashes[1]).toEqual([6, 4]);
  });

  it("labels annotation boxes with their side and widens the selection", () => {
    const selected = { ...boxFromDrag(10, 10, 50, 50, "R")!, selected: true };
    const ctx = new RecordingContext();
    renderScene(ctx, scene({ boxes: [selected] }));
    expect(ctx.ops).toContainEqual(["fillText", "R", 12, 6]);
    expect(ctx.ops).toContainEqual(["lineWidth", 3]);
    expect(ctx.ops).toContainEqual(["setLineDash", [4, 2]]);
  });

  it("draws the drag preview dashed and thin", () => {
    const ctx = new RecordingContext();
    renderScene(ctx, scene({ dragPreview: boxFromDrag(0, 0, 20, 10) }));
    expect(ctx.ops).toContainEqual(["strokeRect", 0, 0, 20, 10]);
    expect(ctx.ops).toContainEqual(["lineWidth", 1]);
  });
});
