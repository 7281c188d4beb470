"""Synthetic moving-blob videos with analytic ground-truth tracks.

Each sample is 1-3 Gaussian blobs on distinct color channels drifting over a
static low-amplitude texture.  Blob centers are known exactly, which makes
these videos usable both as training data and as re-trackable evaluation
clips.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import LatentGeometry
from .trajectory import PixelTrajectory, TrajectorySet

BLOB_PEAK = 0.8
BLOB_SIGMA = 2.0
BACKGROUND_AMPLITUDE = 0.15
EDGE_MARGIN = 6.0


@dataclass
class BlobSample:
    video: np.ndarray  # (1+T, H, W, 3) float32 in [0, 1]
    tracks: TrajectorySet  # analytic blob centers, always visible
    channels: dict[int, int] = field(default_factory=dict)  # track id -> color channel


def render_blob_video(
    geom: LatentGeometry,
    centers: list[np.ndarray],
    channels: list[int],
    background: np.ndarray,
    peak: float = BLOB_PEAK,
    sigma: float = BLOB_SIGMA,
) -> BlobSample:
    """Render blobs at explicit per-frame centers over a static background.

    centers: one (1+T, 2) row/col array per blob; channels: color channel per
    blob.  Ground-truth tracks are exactly the given centers.
    """
    frames = np.repeat(background[None], geom.video_frames, axis=0).astype(np.float64)
    rr, cc = np.meshgrid(np.arange(geom.height), np.arange(geom.width), indexing="ij")
    for pts, ch in zip(centers, channels):
        for f in range(geom.video_frames):
            r0, c0 = pts[f]
            bump = peak * np.exp(-((rr - r0) ** 2 + (cc - c0) ** 2) / (2 * sigma**2))
            frames[f, :, :, ch] += bump
    video = np.clip(frames, 0.0, 1.0).astype(np.float32)
    tracks = {
        i: PixelTrajectory(
            positions=np.asarray(pts, dtype=np.float64),
            visible=np.ones(geom.video_frames, dtype=bool),
        )
        for i, pts in enumerate(centers)
    }
    return BlobSample(
        video=video,
        tracks=TrajectorySet(geometry=geom, tracks=tracks),
        channels={i: ch for i, ch in enumerate(channels)},
    )


def _piecewise_path(rng, geom, frames, family, margin=EDGE_MARGIN, v_max=3.0):
    lo = np.array([margin, margin])
    hi = np.array([geom.height - 1 - margin, geom.width - 1 - margin])
    start = rng.uniform(lo, hi)
    if family == "static":
        return np.tile(start, (frames, 1))
    n_segments = 1 if family == "linear" else int(rng.integers(1, 3))
    waypoints = [start]
    for _ in range(n_segments):
        step = rng.uniform(-v_max, v_max, 2) * (frames - 1) / n_segments
        waypoints.append(np.clip(waypoints[-1] + step, lo, hi))
    pts = np.empty((frames, 2))
    seg_len = (frames - 1) / n_segments
    for f in range(frames):
        s = min(int(f / seg_len), n_segments - 1) if f < frames - 1 else n_segments - 1
        u = f / seg_len - s
        pts[f] = waypoints[s] * (1 - u) + waypoints[s + 1] * u
    return pts


def make_blob_dataset(
    rng: np.random.Generator,
    count: int,
    geom: LatentGeometry,
    family: str = "piecewise",
    blob_range: tuple[int, int] = (1, 3),
) -> list[BlobSample]:
    """Generate blob videos along `family` paths: 'static', 'linear', or
    'piecewise'.  Deterministic given the generator state."""
    if family not in ("static", "linear", "piecewise"):
        raise ValueError(f"unknown motion family {family!r}")
    samples = []
    for _ in range(count):
        background = rng.uniform(0.0, BACKGROUND_AMPLITUDE, (geom.height, geom.width, 3))
        n_blobs = int(rng.integers(blob_range[0], blob_range[1] + 1))
        channels = list(rng.permutation(3)[:n_blobs])
        centers = [
            _piecewise_path(rng, geom, geom.video_frames, family) for _ in range(n_blobs)
        ]
        samples.append(render_blob_video(geom, centers, [int(c) for c in channels], background))
    return samples


def track_blobs_oracle(
    video: np.ndarray, channel: int, min_contrast: float = 0.08
) -> PixelTrajectory:
    """Re-track a single dominant blob on one channel.

    Per frame: estimate the background level as the channel median, keep mass
    above halfway between background and peak, and take the intensity-weighted
    centroid.  Frames whose peak never clears the background by min_contrast
    are flagged invisible and carry the last known position (frame center if
    the blob was never seen).
    """
    video = np.asarray(video)
    frames, H, W = video.shape[0], video.shape[1], video.shape[2]
    rr, cc = np.meshgrid(np.arange(H), np.arange(W), indexing="ij")
    positions = np.empty((frames, 2))
    visible = np.empty(frames, dtype=bool)
    last = np.array([(H - 1) / 2.0, (W - 1) / 2.0])
    for f in range(frames):
        ch = video[f, :, :, channel].astype(np.float64)
        floor = np.median(ch)
        peak = ch.max()
        if peak - floor < min_contrast:
            positions[f] = last
            visible[f] = False
            continue
        w = np.maximum(ch - (floor + 0.5 * (peak - floor)), 0.0)
        total = w.sum()
        positions[f] = [float((w * rr).sum() / total), float((w * cc).sum() / total)]
        visible[f] = True
        last = positions[f]
    return PixelTrajectory(positions=positions, visible=visible)


def grid_truth_tracks(
    sample: BlobSample, n_per_side: int, sigma: float = BLOB_SIGMA
) -> TrajectorySet:
    """Analytic dense-grid tracks for a blob video.

    Grid seeds within 2*sigma of a blob's frame-0 center ride along with that
    blob; everything else is static background.  Background points are flagged
    occluded on frames where a blob passes over them, the way a real tracker
    would report them.  Ids start after the blob track ids.
    """
    from .synth import grid_tracks

    geom = sample.tracks.geometry
    seeds = grid_tracks(geom, n_per_side)
    blob_ids = sample.tracks.ids()
    starts = {tid: sample.tracks.tracks[tid].positions[0] for tid in blob_ids}
    tracks = dict(sample.tracks.tracks)
    next_id = (max(blob_ids) + 1) if blob_ids else 0
    for seed in seeds:
        owner = None
        best = 2.0 * sigma
        for tid in blob_ids:
            d = float(np.linalg.norm(seed - starts[tid]))
            if d <= best:
                owner, best = tid, d
        if owner is None:
            pos = np.tile(seed, (geom.video_frames, 1))
            visible = np.ones(geom.video_frames, dtype=bool)
            for tid in blob_ids:
                centers = sample.tracks.tracks[tid].positions
                covered = np.linalg.norm(centers - seed, axis=1) <= 2.0 * sigma
                visible &= ~covered
        else:
            offset = seed - starts[owner]
            pos = sample.tracks.tracks[owner].positions + offset
            pos = np.clip(pos, [0, 0], [geom.height - 1, geom.width - 1])
            visible = np.ones(geom.video_frames, dtype=bool)
        tracks[next_id] = PixelTrajectory(positions=pos, visible=visible)
        next_id += 1
    return TrajectorySet(geometry=geom, tracks=tracks)
