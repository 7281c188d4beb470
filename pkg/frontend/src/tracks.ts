/** Trajectory file assembly and the client-side pre-validation that keeps the
 * server's structural validator quiet. */

import { strokeToTrack } from "./stroke";
import type { Geometry, Stroke, TrajectoryFile } from "./types";

export function buildTrajectoryFile(strokes: Stroke[], geom: Geometry): TrajectoryFile {
  return {
    version: 1,
    frames: geom.video_frames,
    height: geom.height,
    width: geom.width,
    tracks: strokes.map((s) =>
      strokeToTrack(s, geom.video_frames, geom.height, geom.width),
    ),
  };
}

export interface LocalViolation {
  trackId: number;
  kind: "length" | "bounds" | "non_finite" | "duplicate_id";
  message: string;
}

/** Mirror of the server's structural checks: per-track length, bounds,
 * finiteness, and id uniqueness. */
export function validateTrajectoryFile(file: TrajectoryFile): LocalViolation[] {
  const out: LocalViolation[] = [];
  const seen = new Set<number>();
  for (const track of file.tracks) {
    if (seen.has(track.id)) {
      out.push({ trackId: track.id, kind: "duplicate_id", message: `id ${track.id} repeats` });
    }
    seen.add(track.id);
    if (track.points.length !== file.frames || track.visible.length !== file.frames) {
      out.push({
        trackId: track.id,
        kind: "length",
        message: `${track.points.length} points for ${file.frames} frames`,
      });
      continue;
    }
    for (const [x, y] of track.points) {
      if (!Number.isFinite(x) || !Number.isFinite(y)) {
        out.push({ trackId: track.id, kind: "non_finite", message: "non-finite coordinate" });
        break;
      }
      if (x < 0 || x > file.width - 1 || y < 0 || y > file.height - 1) {
        out.push({
          trackId: track.id,
          kind: "bounds",
          message: `(${x}, ${y}) outside ${file.width}x${file.height}`,
        });
        break;
      }
    }
  }
  return out;
}
