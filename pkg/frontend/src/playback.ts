/** Scrubber state and the overlay/badge view model, kept free of DOM code so
 * the logic is directly testable. */

import type { ResultReport, Track } from "./types";

export class Scrubber {
  frame = 0;

  constructor(public totalFrames: number) {
    if (totalFrames < 1) throw new Error("totalFrames must be >= 1");
  }

  seek(frame: number): number {
    this.frame = Math.min(Math.max(Math.round(frame), 0), this.totalFrames - 1);
    return this.frame;
  }

  step(delta: number): number {
    return this.seek(this.frame + delta);
  }

  get label(): string {
    return `frame ${this.frame + 1} / ${this.totalFrames}`;
  }
}

export interface OverlayMarker {
  trackId: number;
  x: number;
  y: number;
  visible: boolean;
}

/** Authored track positions at one frame, exactly as serialized (no
 * re-projection): keyframe overlays must match the drawn points. */
export function overlayMarkersAtFrame(tracks: Track[], frame: number): OverlayMarker[] {
  return tracks.map((t) => ({
    trackId: t.id,
    x: t.points[frame][0],
    y: t.points[frame][1],
    visible: t.visible[frame],
  }));
}

/** EPE badge text: two decimals, matching the displayed precision contract. */
export function formatEpeBadge(value: number | undefined): string {
  if (value === undefined || !Number.isFinite(value)) return "EPE –";
  return `EPE ${value.toFixed(2)} px`;
}

export interface TrackBadge {
  trackId: number;
  text: string;
}

/** Per-track badges straight from the server report. */
export function badgesFromReport(report: ResultReport): TrackBadge[] {
  const per = report.per_track_epe ?? {};
  return Object.keys(per)
    .sort((a, b) => Number(a) - Number(b))
    .map((k) => ({ trackId: Number(k), text: formatEpeBadge(per[k]) }));
}
