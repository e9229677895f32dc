import { AnnotationDraft } from "./annotation.js";
import { ApiClient, ConflictError } from "./api.js";
import { boxFromDrag, clampToImage } from "./boxes.js";
import type { CanvasBox } from "./boxes.js";
import { actionForKey } from "./keyboard.js";
import type { Action, Mode } from "./keyboard.js";
import { ReviewOverlay } from "./overlay.js";
import { renderScene } from "./render.js";
import type { FramePlan, VideoManifest } from "./types.js";

const api = new ApiClient("");

function must<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) {
    throw new Error(`missing element #${id}`);
  }
  return el as T;
}

const videoSelect = must<HTMLSelectElement>("video-select");
const frameSelect = must<HTMLSelectElement>("frame-select");
const annotatorInput = must<HTMLInputElement>("annotator");
const modeAnnotate = must<HTMLInputElement>("mode-annotate");
const modeReview = must<HTMLInputElement>("mode-review");
const frameImage = must<HTMLImageElement>("frame-image");
const canvas = must<HTMLCanvasElement>("scene-canvas");
const saveButton = must<HTMLButtonElement>("save-button");
const statusLine = must<HTMLElement>("status");
const conflictBanner = must<HTMLElement>("conflict-banner");
const mergeButton = must<HTMLButtonElement>("merge-button");
const annotateControls = must<HTMLElement>("annotate-controls");
const reviewControls = must<HTMLElement>("review-controls");
const playButton = must<HTMLButtonElement>("play-button");
const rateSelect = must<HTMLSelectElement>("rate-select");
const nextSwitchButton = must<HTMLButtonElement>("next-switch-button");
const identityToggles = must<HTMLElement>("identity-toggles");

interface AppState {
  videos: VideoManifest[];
  manifest: VideoManifest | null;
  plan: FramePlan | null;
  overlay: ReviewOverlay;
  mode: Mode;
  frame: number;
  draft: AnnotationDraft | null;
  dragStart: { x: number; y: number } | null;
  dragPreview: CanvasBox | null;
  playTimer: number | null;
}

const state: AppState = {
  videos: [],
  manifest: null,
  plan: null,
  overlay: new ReviewOverlay([]),
  mode: "annotate",
  frame: 0,
  draft: null,
  dragStart: null,
  dragPreview: null,
  playTimer: null,
};

function setStatus(text: string): void {
  statusLine.textContent = text;
}

function redraw(): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) {
    return;
  }
  renderScene(ctx, {
    width: canvas.width,
    height: canvas.height,
    boxes: state.mode === "annotate" && state.draft ? state.draft.boxes : [],
    dragPreview: state.dragPreview,
    overlay: state.mode === "review" ? state.overlay.boxesAt(state.frame) : [],
  });
}

// The frame list differs per mode: sampled frames carry images and
// annotations, tracked frames carry overlay boxes (images optional).
function frameList(): number[] {
  if (state.mode === "annotate") {
    return state.plan ? state.plan.frames : [];
  }
  return state.overlay.frames;
}

function fillFrameSelect(): void {
  const frames = frameList();
  frameSelect.innerHTML = "";
  for (const f of frames) {
    const opt = document.createElement("option");
    opt.value = String(f);
    opt.textContent = `frame ${f}`;
    frameSelect.appendChild(opt);
  }
  frameSelect.disabled = frames.length === 0;
}

async function goToFrame(frame: number): Promise<void> {
  state.frame = frame;
  frameSelect.value = String(frame);
  hideConflict();
  if (!state.manifest) {
    return;
  }
  frameImage.style.visibility = "visible";
  frameImage.src = api.frameImageUrl(state.manifest.video_id, frame);
  if (state.mode === "annotate") {
    try {
      const doc = await api.getAnnotation(state.manifest.video_id, frame);
      state.draft = AnnotationDraft.fromDocument(doc);
      state.draft.annotator = annotatorInput.value;
      setStatus(`frame ${frame}, rev ${doc.rev}, ${doc.hands.length} box(es)`);
    } catch (err) {
      state.draft = null;
      setStatus(`failed to load annotation: ${String(err)}`);
    }
  } else {
    setStatus(`frame ${frame}, ${state.overlay.boxesAt(frame).length} tracked box(es)`);
  }
  redraw();
}

function stepFrame(delta: number): void {
  const frames = frameList();
  if (frames.length === 0) {
    return;
  }
  const pos = frames.indexOf(state.frame);
  const next = Math.min(Math.max((pos < 0 ? 0 : pos) + delta, 0), frames.length - 1);
  void goToFrame(frames[next]);
}

async function selectVideo(videoId: string): Promise<void> {
  stopPlayback();
  const manifest = state.videos.find((v) => v.video_id === videoId) ?? null;
  state.manifest = manifest;
  state.plan = null;
  state.overlay = new ReviewOverlay([]);
  if (!manifest) {
    return;
  }
  canvas.width = manifest.resolution[0];
  canvas.height = manifest.resolution[1];
  try {
    state.plan = await api.framePlan(videoId);
  } catch (err) {
    setStatus(`no sampling plan: ${String(err)}`);
  }
  try {
    state.overlay = new ReviewOverlay(await api.tracks(videoId));
  } catch (err) {
    setStatus(`failed to load tracks: ${String(err)}`);
  }
  buildIdentityToggles();
  fillFrameSelect();
  const frames = frameList();
  if (frames.length > 0) {
    await goToFrame(frames[0]);
  } else {
    setStatus(state.mode === "review" ? "no tracks for this video" : "no frames");
    redraw();
  }
}

function setMode(mode: Mode): void {
  stopPlayback();
  state.mode = mode;
  annotateControls.style.display = mode === "annotate" ? "" : "none";
  reviewControls.style.display = mode === "review" ? "" : "none";
  fillFrameSelect();
  const frames = frameList();
  if (frames.length > 0) {
    void goToFrame(frames.includes(state.frame) ? state.frame : frames[0]);
  } else {
    setStatus(mode === "review" ? "no tracks for this video" : "no frames");
    redraw();
  }
}

// -- saving and conflict handling --------------------------------------

function showConflict(serverRev: number): void {
  conflictBanner.style.display = "";
  conflictBanner.dataset.rev = String(serverRev);
  const text = conflictBanner.querySelector(".conflict-text");
  if (text) {
    text.textContent =
      `This frame was saved by someone else (now rev ${serverRev}). ` +
      `Merge their boxes with yours, then save again.`;
  }
}

function hideConflict(): void {
  conflictBanner.style.display = "none";
}

async function save(): Promise<void> {
  if (!state.draft) {
    return;
  }
  state.draft.annotator = annotatorInput.value;
  try {
    const stored = await api.putAnnotation(state.draft.toDocument());
    state.draft = AnnotationDraft.fromDocument(stored);
    state.draft.annotator = annotatorInput.value;
    setStatus(`saved rev ${stored.rev}`);
    hideConflict();
  } catch (err) {
    if (err instanceof ConflictError) {
      showConflict(err.serverRev);
      setStatus(err.message);
    } else {
      setStatus(`save failed: ${String(err)}`);
    }
  }
  redraw();
}

async function mergeAndRetry(): Promise<void> {
  if (!state.draft || !state.manifest) {
    return;
  }
  const server = await api.getAnnotation(state.manifest.video_id, state.frame);
  state.draft.mergeServer(server);
  hideConflict();
  setStatus(`merged onto rev ${server.rev}; review and save`);
  redraw();
}

// -- review playback ----------------------------------------------------

function stopPlayback(): void {
  if (state.playTimer !== null) {
    window.clearInterval(state.playTimer);
    state.playTimer = null;
    playButton.textContent = "play";
  }
}

function togglePlayback(): void {
  if (state.mode !== "review" || state.overlay.empty) {
    return;
  }
  if (state.playTimer !== null) {
    stopPlayback();
    return;
  }
  const rate = Number(rateSelect.value);
  const intervalMs = 1000 / (state.plan ? state.plan.working_fps : 15) / rate;
  state.playTimer = window.setInterval(() => {
    const next = state.overlay.step(state.frame, 1);
    if (next === state.frame) {
      stopPlayback();
      return;
    }
    void goToFrame(next);
  }, intervalMs);
  playButton.textContent = "pause";
}

function buildIdentityToggles(): void {
  identityToggles.innerHTML = "";
  for (const identity of state.overlay.identities) {
    const label = document.createElement("label");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.checked = true;
    box.addEventListener("change", () => {
      state.overlay.setVisible(identity, box.checked);
      redraw();
    });
    const swatch = document.createElement("span");
    swatch.className = "swatch";
    swatch.style.background = state.overlay.colorFor(identity);
    label.append(box, swatch, ` hand ${identity}`);
    identityToggles.appendChild(label);
  }
}

function toggleIdentityRank(rank: number): void {
  const identity = state.overlay.identities[rank];
  if (identity === undefined) {
    return;
  }
  state.overlay.toggle(identity);
  const input = identityToggles.querySelectorAll<HTMLInputElement>("input")[rank];
  if (input) {
    input.checked = state.overlay.isVisible(identity);
  }
  redraw();
}

// -- input wiring -------------------------------------------------------

function canvasPoint(ev: MouseEvent): { x: number; y: number } {
  const rect = canvas.getBoundingClientRect();
  return {
    x: ((ev.clientX - rect.left) / rect.width) * canvas.width,
    y: ((ev.clientY - rect.top) / rect.height) * canvas.height,
  };
}

canvas.addEventListener("mousedown", (ev) => {
  if (state.mode !== "annotate" || !state.draft) {
    return;
  }
  const p = canvasPoint(ev);
  state.dragStart = p;
  state.dragPreview = null;
});

canvas.addEventListener("mousemove", (ev) => {
  if (!state.dragStart) {
    return;
  }
  const p = canvasPoint(ev);
  state.dragPreview = boxFromDrag(state.dragStart.x, state.dragStart.y, p.x, p.y);
  redraw();
});

canvas.addEventListener("mouseup", (ev) => {
  if (!state.dragStart || !state.draft) {
    state.dragStart = null;
    return;
  }
  const p = canvasPoint(ev);
  const box = boxFromDrag(state.dragStart.x, state.dragStart.y, p.x, p.y);
  state.dragStart = null;
  state.dragPreview = null;
  if (box) {
    state.draft.addBox(clampToImage(box, canvas.width, canvas.height));
  } else {
    // a plain click selects instead of drawing
    state.draft.selectAt(p.x, p.y);
  }
  redraw();
});

function dispatch(action: Action): void {
  switch (action.kind) {
    case "next-frame":
      stepFrame(1);
      break;
    case "prev-frame":
      stepFrame(-1);
      break;
    case "save":
      void save();
      break;
    case "cycle-side":
      state.draft?.toggleSelectedSide();
      redraw();
      break;
    case "delete-box":
      state.draft?.deleteSelected();
      redraw();
      break;
    case "cycle-selection":
      state.draft?.cycleSelection();
      redraw();
      break;
    case "play-pause":
      togglePlayback();
      break;
    case "next-switch": {
      const next = state.overlay.nextCandidate(state.frame);
      if (next !== null) {
        void goToFrame(next);
      }
      break;
    }
    case "toggle-identity":
      toggleIdentityRank(action.rank);
      break;
  }
}

document.addEventListener("keydown", (ev) => {
  const target = ev.target as HTMLElement | null;
  if (target && ["INPUT", "SELECT", "TEXTAREA"].includes(target.tagName)) {
    return;
  }
  const action = actionForKey(ev.key, state.mode);
  if (action) {
    ev.preventDefault();
    dispatch(action);
  }
});

videoSelect.addEventListener("change", () => void selectVideo(videoSelect.value));
frameSelect.addEventListener("change", () => void goToFrame(Number(frameSelect.value)));
modeAnnotate.addEventListener("change", () => setMode("annotate"));
modeReview.addEventListener("change", () => setMode("review"));
saveButton.addEventListener("click", () => void save());
mergeButton.addEventListener("click", () => void mergeAndRetry());
playButton.addEventListener("click", togglePlayback);
nextSwitchButton.addEventListener("click", () => dispatch({ kind: "next-switch" }));
frameImage.addEventListener("error", () => {
  // review frames between samples have no image on disk; keep the boxes
  frameImage.style.visibility = "hidden";
});

async function start(): Promise<void> {
  try {
    state.videos = await api.listVideos();
  } catch (err) {
    setStatus(`failed to list videos: ${String(err)}`);
    return;
  }
  videoSelect.innerHTML = "";
  for (const v of state.videos) {
    const opt = document.createElement("option");
    opt.value = v.video_id;
    opt.textContent = `${v.video_id} (${v.category})`;
    videoSelect.appendChild(opt);
  }
  setMode("annotate");
  if (state.videos.length > 0) {
    await selectVideo(state.videos[0].video_id);
  } else {
    setStatus("no videos on the service");
  }
}

void start();
