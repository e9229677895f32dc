import { parseTrackNdjson } from "./types.js";
import type {
  AnnotationDocument,
  FramePlan,
  TrackRecord,
  VideoManifest,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;

  constructor(status: number, message: string) {
    super(message);
    this.status = status;
  }
}

/** Save rejected because the frame moved on under us. Carries the server's
 * current revision so the caller can reload and merge. */
export class ConflictError extends ApiError {
  readonly serverRev: number;

  constructor(serverRev: number, message: string) {
    super(409, message);
    this.serverRev = serverRev;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Typed client over the annotation service. The UI owns no storage and no
 * validation authority; everything goes through these endpoints. */
export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl = "", fetchFn: FetchLike = fetch) {
    this.baseUrl = baseUrl;
    this.fetchFn = fetchFn;
  }

  async listVideos(): Promise<VideoManifest[]> {
    const doc = await this.getJson<{ videos: VideoManifest[] }>("/api/videos");
    return doc.videos;
  }

  async framePlan(videoId: string): Promise<FramePlan> {
    return this.getJson<FramePlan>(`/api/videos/${encodeURIComponent(videoId)}/frames`);
  }

  frameImageUrl(videoId: string, frame: number): string {
    return `${this.baseUrl}/api/frames/${encodeURIComponent(videoId)}/${frame}`;
  }

  async getAnnotation(videoId: string, frame: number): Promise<AnnotationDocument> {
    return this.getJson<AnnotationDocument>(
      `/api/annotations/${encodeURIComponent(videoId)}/${frame}`,
    );
  }

  /**
   * Persist an annotation. doc.rev must be the revision the client last
   * saw; a stale value raises ConflictError carrying the current server
   * revision, anything else invalid raises ApiError with the field path the
   * service reported.
   */
  async putAnnotation(doc: AnnotationDocument): Promise<AnnotationDocument> {
    const res = await this.fetchFn(
      `${this.baseUrl}/api/annotations/${encodeURIComponent(doc.video_id)}/${doc.frame}`,
      {
        method: "PUT",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(doc),
      },
    );
    if (res.status === 409) {
      const body = (await res.json()) as { error: string; rev: number };
      throw new ConflictError(body.rev, body.error);
    }
    if (!res.ok) {
      throw new ApiError(res.status, await errorMessage(res));
    }
    return (await res.json()) as AnnotationDocument;
  }

  /** Track overlay records. A video with no track file yields an empty
   * list, which the UI shows as an empty review state. */
  async tracks(videoId: string): Promise<TrackRecord[]> {
    const res = await this.fetchFn(
      `${this.baseUrl}/api/tracks/${encodeURIComponent(videoId)}`,
    );
    if (res.status === 404) {
      return [];
    }
    if (!res.ok) {
      throw new ApiError(res.status, await errorMessage(res));
    }
    return parseTrackNdjson(await res.text());
  }

  private async getJson<T>(path: string): Promise<T> {
    const res = await this.fetchFn(this.baseUrl + path);
    if (!res.ok) {
      throw new ApiError(res.status, await errorMessage(res));
    }
    return (await res.json()) as T;
  }
}

// Service errors use {"error": ...}; framework-level ones use {"detail": ...}.
async function errorMessage(res: Response): Promise<string> {
  try {
    const body = (await res.json()) as { error?: string; detail?: string };
    return body.error ?? body.detail ?? `HTTP ${res.status}`;
  } catch {
    return `HTTP ${res.status}`;
  }
}
