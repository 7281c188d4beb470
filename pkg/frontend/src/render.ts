/** Canvas painters for video frames and stroke/track overlays. */

import type { OverlayMarker } from "./playback";
import type { Stroke } from "./types";
import { videoAt, type Tensor } from "./wmt";

export const TRACK_COLORS = ["#ff5252", "#40c4ff", "#69f0ae", "#ffd740", "#e040fb", "#ffab40"];

export function trackColor(trackId: number): string {
  return TRACK_COLORS[trackId % TRACK_COLORS.length];
}

/** Paint one frame of a float video tensor, scaled up by `zoom`. */
export function drawVideoFrame(
  ctx: CanvasRenderingContext2D,
  video: Tensor,
  frame: number,
  zoom: number,
): void {
  const [, H, W] = video.dims;
  const image = ctx.createImageData(W, H);
  for (let r = 0; r < H; r++) {
    for (let c = 0; c < W; c++) {
      const i = (r * W + c) * 4;
      image.data[i] = clamp255(videoAt(video, frame, r, c, 0));
      image.data[i + 1] = clamp255(videoAt(video, frame, r, c, 1));
      image.data[i + 2] = clamp255(videoAt(video, frame, r, c, 2));
      image.data[i + 3] = 255;
    }
  }
  const off = new OffscreenCanvas(W, H);
  const octx = off.getContext("2d")!;
  octx.putImageData(image, 0, 0);
  ctx.imageSmoothingEnabled = false;
  ctx.drawImage(off, 0, 0, W * zoom, H * zoom);
}

export function drawStroke(ctx: CanvasRenderingContext2D, stroke: Stroke, zoom: number): void {
  if (stroke.points.length === 0) return;
  ctx.save();
  ctx.strokeStyle = trackColor(stroke.trackId);
  ctx.lineWidth = 2;
  ctx.lineJoin = "round";
  ctx.lineCap = "round";
  ctx.beginPath();
  ctx.moveTo(stroke.points[0].x * zoom, stroke.points[0].y * zoom);
  for (let i = 1; i < stroke.points.length; i++) {
    const p = stroke.points[i];
    // dash the occluded segments
    ctx.setLineDash(p.visible ? [] : [4, 4]);
    ctx.lineTo(p.x * zoom, p.y * zoom);
  }
  ctx.stroke();
  ctx.restore();
}

export function drawMarkers(
  ctx: CanvasRenderingContext2D,
  markers: OverlayMarker[],
  zoom: number,
): void {
  for (const m of markers) {
    ctx.save();
    ctx.strokeStyle = trackColor(m.trackId);
    ctx.fillStyle = m.visible ? trackColor(m.trackId) : "transparent";
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.arc(m.x * zoom, m.y * zoom, 5, 0, 2 * Math.PI);
    ctx.fill();
    ctx.stroke();
    ctx.restore();
  }
}

function clamp255(v: number): number {
  return Math.max(0, Math.min(255, Math.round(v * 255)));
}
