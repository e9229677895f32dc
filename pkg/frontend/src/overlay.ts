import { colorForRank } from "./palette.js";
import type { Box, Provenance, TrackRecord } from "./types.js";

export interface OverlayBox {
  identity: number;
  box: Box;
  provenance: Provenance;
  color: string;
}

/**
 * Read-only playback model over one video's track records: per-frame box
 * lookup, identity show/hide toggles, and jump targets at the frames where
 * the identity set changes (the places switch errors hide).
 */
export class ReviewOverlay {
  /** Sorted unique frame indices that carry at least one box. */
  readonly frames: number[];
  /** Sorted unique identities; rank in this list picks the palette color. */
  readonly identities: number[];

  private readonly byFrame = new Map<number, TrackRecord[]>();
  private readonly colors = new Map<number, string>();
  private readonly hidden = new Set<number>();

  constructor(records: readonly TrackRecord[]) {
    for (const rec of records) {
      const bucket = this.byFrame.get(rec.frame);
      if (bucket) {
        bucket.push(rec);
      } else {
        this.byFrame.set(rec.frame, [rec]);
      }
    }
    this.frames = [...this.byFrame.keys()].sort((a, b) => a - b);
    this.identities = [...new Set(records.map((r) => r.identity))].sort((a, b) => a - b);
    this.identities.forEach((identity, rank) => {
      this.colors.set(identity, colorForRank(rank));
    });
  }

  get empty(): boolean {
    return this.frames.length === 0;
  }

  colorFor(identity: number): string {
    return this.colors.get(identity) ?? colorForRank(0);
  }

  isVisible(identity: number): boolean {
    return !this.hidden.has(identity);
  }

  setVisible(identity: number, on: boolean): void {
    if (on) {
      this.hidden.delete(identity);
    } else {
      this.hidden.add(identity);
    }
  }

  toggle(identity: number): void {
    this.setVisible(identity, !this.isVisible(identity));
  }

  /** Boxes to draw at `frame`, hidden identities filtered out. */
  boxesAt(frame: number): OverlayBox[] {
    const records = this.byFrame.get(frame) ?? [];
    return records
      .filter((r) => this.isVisible(r.identity))
      .map((r) => ({
        identity: r.identity,
        box: r.box,
        provenance: r.provenance,
        color: this.colorFor(r.identity),
      }));
  }

  /**
   * Frames whose identity set differs from the previous populated frame's.
   * Appearances and disappearances are where identity switches happen, so
   * reviewing these frames covers most of the risk.
   */
  switchCandidates(): number[] {
    const candidates: number[] = [];
    let prev: Set<number> | null = null;
    for (const frame of this.frames) {
      const here = new Set((this.byFrame.get(frame) ?? []).map((r) => r.identity));
      if (prev !== null && !sameSet(prev, here)) {
        candidates.push(frame);
      }
      prev = here;
    }
    return candidates;
  }

  nextCandidate(after: number): number | null {
    for (const frame of this.switchCandidates()) {
      if (frame > after) {
        return frame;
      }
    }
    return null;
  }

  /**
   * The populated frame `delta` playback steps away from `current`, clamped
   * to the ends. `current` need not itself be populated; stepping starts
   * from its insertion position.
   */
  step(current: number, delta: number): number {
    if (this.frames.length === 0) {
      return current;
    }
    let pos = this.frames.findIndex((f) => f >= current);
    if (pos < 0) {
      pos = this.frames.length - 1;
    }
    const target = Math.min(Math.max(pos + delta, 0), this.frames.length - 1);
    return this.frames[target];
  }
}

function sameSet(a: Set<number>, b: Set<number>): boolean {
  if (a.size !== b.size) {
    return false;
  }
  for (const v of a) {
    if (!b.has(v)) {
      return false;
    }
  }
  return true;
}
