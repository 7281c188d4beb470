/** Shared studio types. Positions follow the wire convention: x = column,
 * y = row, in pixels, origin top-left. */

export interface StrokePoint {
  x: number;
  y: number;
  /** capture timestamp in ms, monotonically increasing within a stroke */
  t: number;
  /** false while the author held the occlusion toggle */
  visible: boolean;
}

export interface Stroke {
  trackId: number;
  points: StrokePoint[];
}

export interface Track {
  id: number;
  points: [number, number][];
  visible: boolean[];
}

export interface TrajectoryFile {
  version: 1;
  frames: number;
  height: number;
  width: number;
  tracks: Track[];
}

export interface Geometry {
  f_t: number;
  f_s: number;
  channels: number;
  video_frames: number;
  height: number;
  width: number;
}

export interface ParameterRanges {
  w: [number, number];
  steps: [number, number];
  seed: [number, number];
}

export interface GenerateParams {
  w: number;
  steps: number;
  seed: number;
}

export interface ResultReport {
  w: number;
  steps: number;
  seed: number;
  epe?: number;
  per_track_epe?: Record<string, number>;
  tracks?: Record<string, { points: [number, number][]; visible: boolean[] }>;
}

export interface StudioState {
  sessionId: string | null;
  geometry: Geometry;
  frameImage: ImageBitmap | null;
  strokes: Stroke[];
  lastPreview: Float32Array | null;
  lastResult: { video: number[][][][]; report: ResultReport } | null;
  params: GenerateParams;
}
