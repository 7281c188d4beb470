/** Stroke resampling: a drawn polyline becomes a trajectory with exactly
 * 1+T points, uniformly spaced along arc length with endpoints preserved. */

import type { Stroke, StrokePoint, Track } from "./types";

function dist(a: StrokePoint, b: StrokePoint): number {
  return Math.hypot(a.x - b.x, a.y - b.y);
}

/** Arc-length uniform resampling to exactly `frames` points.
 *
 * Endpoints are preserved exactly.  A single-point (or zero-length) stroke
 * becomes a stationary track.  Each resampled point inherits visibility from
 * the nearest original point along the arc. */
export function resampleStroke(points: StrokePoint[], frames: number): StrokePoint[] {
  if (frames < 2) throw new Error(`frames must be >= 2, got ${frames}`);
  if (points.length === 0) throw new Error("empty stroke");
  if (points.length === 1) {
    return Array.from({ length: frames }, () => ({ ...points[0] }));
  }

  const cumulative: number[] = [0];
  for (let i = 1; i < points.length; i++) {
    cumulative.push(cumulative[i - 1] + dist(points[i - 1], points[i]));
  }
  const total = cumulative[points.length - 1];
  if (total === 0) {
    return Array.from({ length: frames }, () => ({ ...points[0] }));
  }

  const out: StrokePoint[] = [];
  let seg = 0;
  for (let i = 0; i < frames; i++) {
    const target = (i / (frames - 1)) * total;
    while (seg < points.length - 2 && cumulative[seg + 1] < target) seg++;
    const segLen = cumulative[seg + 1] - cumulative[seg];
    const u = segLen === 0 ? 0 : (target - cumulative[seg]) / segLen;
    const a = points[seg];
    const b = points[seg + 1];
    out.push({
      x: a.x + (b.x - a.x) * u,
      y: a.y + (b.y - a.y) * u,
      t: a.t + (b.t - a.t) * u,
      visible: u < 0.5 ? a.visible : b.visible,
    });
  }
  // endpoints exact, independent of accumulated float error
  out[0] = { ...points[0] };
  out[frames - 1] = { ...points[points.length - 1] };
  return out;
}

/** Resample and clamp into the frame so the server's validator accepts it. */
export function strokeToTrack(
  stroke: Stroke,
  frames: number,
  height: number,
  width: number,
): Track {
  const resampled = resampleStroke(stroke.points, frames);
  return {
    id: stroke.trackId,
    points: resampled.map((p) => [
      Math.min(Math.max(p.x, 0), width - 1),
      Math.min(Math.max(p.y, 0), height - 1),
    ]),
    visible: resampled.map((p) => p.visible),
  };
}
