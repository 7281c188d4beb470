/** Studio app wiring: session lifecycle, stroke capture, sync, preview,
 * generate, and playback with overlays. */

import { ApiError, StudioClient, type Health } from "./api";
import { Scrubber, badgesFromReport, formatEpeBadge, overlayMarkersAtFrame } from "./playback";
import { drawMarkers, drawStroke, drawVideoFrame, trackColor } from "./render";
import { buildTrajectoryFile, validateTrajectoryFile } from "./tracks";
import type { GenerateParams, Geometry, Stroke, StrokePoint } from "./types";
import type { Tensor } from "./wmt";

const DEFAULT_GEOMETRY: Geometry = {
  f_t: 4,
  f_s: 4,
  channels: 3,
  video_frames: 9,
  height: 32,
  width: 32,
};
const ZOOM = 12;

class StudioApp {
  client = new StudioClient(location.protocol === "file:" ? "http://127.0.0.1:8787" : "");
  geometry = DEFAULT_GEOMETRY;
  sessionId: string | null = null;
  strokes: Stroke[] = [];
  activeStroke: Stroke | null = null;
  frameBitmap: ImageBitmap | null = null;
  playbackVideo: Tensor | null = null;
  scrubber = new Scrubber(DEFAULT_GEOMETRY.video_frames);
  params: GenerateParams = { w: 5.0, steps: 50, seed: 0 };
  ranges: Health["ranges"] | null = null;
  lastReport: ReturnType<typeof badgesFromReport> = [];
  epeSummary = "";

  canvas = document.getElementById("stage") as HTMLCanvasElement;
  status = document.getElementById("status") as HTMLDivElement;
  badges = document.getElementById("badges") as HTMLDivElement;
  frameSlider = document.getElementById("frame") as HTMLInputElement;

  async start(): Promise<void> {
    try {
      const health = await this.client.health();
      this.ranges = health.ranges;
      if (health.geometry) this.geometry = health.geometry;
      this.scrubber = new Scrubber(this.geometry.video_frames);
      this.say(`service up, model ${health.model_loaded ? "loaded" : "missing"}`);
    } catch (err) {
      this.say(`service unreachable: ${err}`);
    }
    this.canvas.width = this.geometry.width * ZOOM;
    this.canvas.height = this.geometry.height * ZOOM;
    this.bind();
    this.redraw();
  }

  bind(): void {
    document.getElementById("new-session")!.addEventListener("click", () => this.newSession());
    const upload = document.getElementById("upload") as HTMLInputElement;
    upload.addEventListener("change", () => this.uploadFrame(upload.files?.[0] ?? null));
    document.getElementById("sync")!.addEventListener("click", () => this.syncTracks());
    document.getElementById("preview")!.addEventListener("click", () => this.preview());
    document.getElementById("generate")!.addEventListener("click", () => this.generate());
    document.getElementById("clear")!.addEventListener("click", () => {
      this.strokes = [];
      this.playbackVideo = null;
      this.redraw();
    });
    this.frameSlider.max = String(this.geometry.video_frames - 1);
    this.frameSlider.addEventListener("input", () => {
      this.scrubber.seek(Number(this.frameSlider.value));
      this.redraw();
    });
    for (const key of ["w", "steps", "seed"] as const) {
      const input = document.getElementById(`param-${key}`) as HTMLInputElement;
      input.value = String(this.params[key]);
      input.addEventListener("change", () => {
        const range = this.ranges?.[key];
        let v = Number(input.value);
        if (range) v = Math.min(Math.max(v, range[0]), range[1]);
        this.params[key] = key === "w" ? v : Math.round(v);
        input.value = String(this.params[key]);
      });
    }

    this.canvas.addEventListener("pointerdown", (e) => this.strokeStart(e));
    this.canvas.addEventListener("pointermove", (e) => this.strokeMove(e));
    window.addEventListener("pointerup", () => this.strokeEnd());
  }

  canvasPoint(e: PointerEvent): StrokePoint {
    const rect = this.canvas.getBoundingClientRect();
    return {
      x: (e.clientX - rect.left) / ZOOM,
      y: (e.clientY - rect.top) / ZOOM,
      t: performance.now(),
      visible: !e.shiftKey, // hold shift to author an occluded segment
    };
  }

  strokeStart(e: PointerEvent): void {
    this.activeStroke = { trackId: this.strokes.length, points: [this.canvasPoint(e)] };
  }

  strokeMove(e: PointerEvent): void {
    if (!this.activeStroke) return;
    this.activeStroke.points.push(this.canvasPoint(e));
    this.redraw();
  }

  strokeEnd(): void {
    if (!this.activeStroke) return;
    if (this.activeStroke.points.length >= 1) this.strokes.push(this.activeStroke);
    this.activeStroke = null;
    this.redraw();
  }

  async newSession(): Promise<void> {
    try {
      this.sessionId = await this.client.createSession(this.geometry);
      this.strokes = [];
      this.playbackVideo = null;
      this.say(`session ${this.sessionId}`);
    } catch (err) {
      this.sayError(err);
    }
    this.redraw();
  }

  async uploadFrame(file: File | null): Promise<void> {
    if (!file || !this.sessionId) return;
    try {
      const bytes = await file.arrayBuffer();
      await this.client.uploadFrame(this.sessionId, bytes);
      this.frameBitmap = await createImageBitmap(new Blob([bytes]));
      this.say("frame uploaded");
    } catch (err) {
      this.sayError(err);
    }
    this.redraw();
  }

  async syncTracks(): Promise<void> {
    if (!this.sessionId) return;
    const file = buildTrajectoryFile(this.strokes, this.geometry);
    const local = validateTrajectoryFile(file);
    if (local.length > 0) {
      this.say(`not sent, local violations: ${local.map((v) => v.message).join("; ")}`);
      return;
    }
    try {
      const result = await this.client.putTracks(this.sessionId, file);
      this.say(
        result.accepted
          ? `synced ${file.tracks.length} tracks`
          : `server violations: ${result.violations.map((v) => `track ${v.track_id} ${v.kind}`).join("; ")}`,
      );
    } catch (err) {
      this.sayError(err);
    }
  }

  async preview(): Promise<void> {
    if (!this.sessionId) return;
    try {
      this.playbackVideo = await this.client.preview(this.sessionId, this.params.seed);
      this.scrubber.seek(0);
      this.say("preview ready: scrub to watch the source patch travel");
    } catch (err) {
      this.sayError(err);
    }
    this.redraw();
  }

  async generate(): Promise<void> {
    if (!this.sessionId) return;
    try {
      this.say("generating...");
      const rid = await this.client.generate(this.sessionId, this.params);
      const { report, video } = await this.client.getResult(this.sessionId, rid);
      this.playbackVideo = video;
      this.lastReport = badgesFromReport(report);
      this.epeSummary = formatEpeBadge(report.epe);
      this.scrubber.seek(0);
      this.say(`result ${rid}: ${this.epeSummary}`);
    } catch (err) {
      this.sayError(err);
    }
    this.redraw();
  }

  redraw(): void {
    const ctx = this.canvas.getContext("2d")!;
    ctx.fillStyle = "#111";
    ctx.fillRect(0, 0, this.canvas.width, this.canvas.height);
    if (this.playbackVideo) {
      drawVideoFrame(ctx, this.playbackVideo, this.scrubber.frame, ZOOM);
    } else if (this.frameBitmap) {
      ctx.imageSmoothingEnabled = false;
      ctx.drawImage(this.frameBitmap, 0, 0, this.canvas.width, this.canvas.height);
    }
    for (const stroke of this.strokes) drawStroke(ctx, stroke, ZOOM);
    if (this.activeStroke) drawStroke(ctx, this.activeStroke, ZOOM);

    const file = buildTrajectoryFile(this.strokes, this.geometry);
    if (file.tracks.length > 0) {
      drawMarkers(ctx, overlayMarkersAtFrame(file.tracks, this.scrubber.frame), ZOOM);
    }
    (document.getElementById("frame-label") as HTMLSpanElement).textContent =
      this.scrubber.label;
    this.badges.innerHTML = "";
    for (const badge of this.lastReport) {
      const el = document.createElement("span");
      el.className = "badge";
      el.style.borderColor = trackColor(badge.trackId);
      el.textContent = `track ${badge.trackId}: ${badge.text}`;
      this.badges.appendChild(el);
    }
  }

  say(message: string): void {
    this.status.textContent = message;
  }

  sayError(err: unknown): void {
    if (err instanceof ApiError) {
      this.say(`${err.code}: ${err.message}`);
    } else {
      this.say(String(err));
    }
  }
}

new StudioApp().start();
