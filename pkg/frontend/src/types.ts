/** Wire documents exchanged with the annotation service. */

export type Side = "L" | "R" | "U";

/** [x1, y1, x2, y2] in image pixels, x2 >= x1 and y2 >= y1. */
export type Box = [number, number, number, number];

export interface WireHand {
  box: Box;
  side: Side;
}

export interface AnnotationDocument {
  video_id: string;
  frame: number;
  hands: WireHand[];
  annotator: string;
  rev: number;
}

export interface VideoManifest {
  video_id: string;
  category: string;
  duration_s: number;
  native_fps: number;
  resolution: [number, number];
}

export interface FramePlan {
  video_id: string;
  working_fps: number;
  window: [number, number];
  frames: number[];
  urls: string[];
}

/** "det" means a matched detection backed the box, "pred" a coasted estimate. */
export type Provenance = "det" | "pred";

export interface TrackRecord {
  video_id: string;
  frame: number;
  box: Box;
  identity: number;
  provenance: Provenance;
}

export function parseTrackNdjson(text: string): TrackRecord[] {
  const records: TrackRecord[] = [];
  for (const line of text.split("\n")) {
    if (line.trim() === "") continue;
    records.push(JSON.parse(line) as TrackRecord);
  }
  return records;
}
