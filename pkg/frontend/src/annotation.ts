import { cycleSide, fromWire, hitTest, sameBox, toWire } from "./boxes.js";
import type { CanvasBox } from "./boxes.js";
import type { AnnotationDocument } from "./types.js";

/**
 * Editable state for one frame's annotation.
 *
 * `rev` is the base revision the edits started from; every save sends it so
 * the service can reject writes that raced another annotator. After a
 * successful save the caller replaces the draft from the stored document,
 * after a conflict it calls mergeServer() with the current one.
 */
export class AnnotationDraft {
  readonly videoId: string;
  readonly frame: number;
  annotator: string;
  rev: number;
  boxes: CanvasBox[];
  dirty = false;

  constructor(
    videoId: string,
    frame: number,
    annotator = "",
    rev = 0,
    boxes: CanvasBox[] = [],
  ) {
    this.videoId = videoId;
    this.frame = frame;
    this.annotator = annotator;
    this.rev = rev;
    this.boxes = boxes;
  }

  static fromDocument(doc: AnnotationDocument): AnnotationDraft {
    return new AnnotationDraft(
      doc.video_id,
      doc.frame,
      doc.annotator,
      doc.rev,
      doc.hands.map(fromWire),
    );
  }

  /** Wire document for PUT. A zero-box draft is a valid empty annotation. */
  toDocument(annotator = this.annotator): AnnotationDocument {
    return {
      video_id: this.videoId,
      frame: this.frame,
      hands: this.boxes.map(toWire),
      annotator,
      rev: this.rev,
    };
  }

  get selected(): CanvasBox | null {
    return this.boxes.find((b) => b.selected) ?? null;
  }

  addBox(box: CanvasBox): void {
    for (const b of this.boxes) {
      b.selected = false;
    }
    this.boxes.push({ ...box, selected: true });
    this.dirty = true;
  }

  /** Select the topmost box under the point; returns its index or -1. */
  selectAt(x: number, y: number): number {
    const idx = hitTest(this.boxes, x, y);
    this.boxes.forEach((b, i) => {
      b.selected = i === idx;
    });
    return idx;
  }

  deleteSelected(): boolean {
    const before = this.boxes.length;
    this.boxes = this.boxes.filter((b) => !b.selected);
    if (this.boxes.length !== before) {
      this.dirty = true;
      return true;
    }
    return false;
  }

  toggleSelectedSide(): void {
    const box = this.selected;
    if (box) {
      box.side = cycleSide(box.side);
      this.dirty = true;
    }
  }

  /** Move selection to the next box in draw order (wraps; no-op when empty). */
  cycleSelection(): void {
    if (this.boxes.length === 0) {
      return;
    }
    const current = this.boxes.findIndex((b) => b.selected);
    const next = (current + 1) % this.boxes.length;
    this.boxes.forEach((b, i) => {
      b.selected = i === next;
    });
  }

  /**
   * Fold the current server document into a conflicted draft: adopt the
   * server's revision and box list, then re-append local boxes the server
   * does not have. Local additions survive; the next save uses the fresh
   * base revision.
   */
  mergeServer(server: AnnotationDocument): void {
    const merged = server.hands.map(fromWire);
    for (const mine of this.boxes) {
      if (!merged.some((b) => sameBox(b, mine))) {
        merged.push({ ...mine, selected: false });
      }
    }
    this.boxes = merged;
    this.rev = server.rev;
    this.dirty = merged.length !== server.hands.length;
  }
}
