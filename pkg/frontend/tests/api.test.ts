import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, ConflictError } from "../src/api.js";
import type { AnnotationDocument } from "../src/types.js";

type Call = { url: string; init?: RequestInit };

function stubFetch(responses: Record<string, () => Response>) {
  const calls: Call[] = [];
  const fetchFn = (url: string, init?: RequestInit): Promise<Response> => {
    calls.push({ url, init });
    const make = responses[url];
    if (!make) {
      return Promise.resolve(new Response("not stubbed", { status: 500 }));
    }
    return Promise.resolve(make());
  };
  return { calls, fetchFn };
}

function json(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

const doc: AnnotationDocument = {
  video_id: "vid_a",
  frame: 5400,
  hands: [{ box: [1.5, 2.5, 3.5, 4.5], side: "U" }],
  annotator: "alice",
  rev: 0,
};

describe("ApiClient", () => {
  it("unwraps the video list", async () => {
    const { fetchFn } = stubFetch({
      "/api/videos": () => json({ videos: [{ video_id: "vid_a" }] }),
    });
    const client = new ApiClient("", fetchFn);
    const videos = await client.listVideos();
    expect(videos.map((v) => v.video_id)).toEqual(["vid_a"]);
  });

  it("PUTs the annotation as JSON and returns the stored document", async () => {
    const { calls, fetchFn } = stubFetch({
      "/api/annotations/vid_a/5400": () => json({ ...doc, rev: 1 }),
    });
    const client = new ApiClient("", fetchFn);
    const stored = await client.putAnnotation(doc);
    expect(stored.rev).toBe(1);
    expect(calls[0].init?.method).toBe("PUT");
    expect(JSON.parse(calls[0].init?.body as string)).toEqual(doc);
  });

  it("turns a 409 into ConflictError carrying the server revision", async () => {
    const { fetchFn } = stubFetch({
      "/api/annotations/vid_a/5400": () =>
        json({ error: "stale revision: current is 7", rev: 7 }, 409),
    });
    const client = new ApiClient("", fetchFn);
    const err = await client.putAnnotation(doc).catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ConflictError);
    expect((err as ConflictError).serverRev).toBe(7);
    expect((err as ConflictError).message).toContain("stale");
  });

  it("surfaces validation errors with the service's field path", async () => {
    const { fetchFn } = stubFetch({
      "/api/annotations/vid_a/5400": () =>
        json({ error: "hands[0].box: box has negative extent" }, 422),
    });
    const client = new ApiClient("", fetchFn);
    const err = await client.putAnnotation(doc).catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(422);
    expect((err as ApiError).message).toContain("hands[0].box");
  });

  it("treats missing tracks as an empty overlay, not an error", async () => {
    const { fetchFn } = stubFetch({
      "/api/tracks/vid_a": () => json({ detail: "no tracks for 'vid_a'" }, 404),
    });
    const client = new ApiClient("", fetchFn);
    expect(await client.tracks("vid_a")).toEqual([]);
  });

  it("parses track NDJSON bodies", async () => {
    const body =
      '{"video_id":"vid_a","frame":0,"box":[1.0,2.0,3.0,4.0],"identity":0,"provenance":"det"}\n';
    const { fetchFn } = stubFetch({
      "/api/tracks/vid_a": () => new Response(body, { status: 200 }),
    });
    const client = new ApiClient("", fetchFn);
    const records = await client.tracks("vid_a");
    expect(records).toHaveLength(1);
    expect(records[0].box).toEqual([1, 2, 3, 4]);
  });

  it("prefixes every request with the base URL", async () => {
    const { calls, fetchFn } = stubFetch({
      "http://example.test/api/videos": () => json({ videos: [] }),
    });
    const client = new ApiClient("http://example.test", fetchFn);
    await client.listVideos();
    expect(calls[0].url).toBe("http://example.test/api/videos");
    expect(client.frameImageUrl("vid_a", 5400)).toBe(
      "http://example.test/api/frames/vid_a/5400",
    );
  });
});
