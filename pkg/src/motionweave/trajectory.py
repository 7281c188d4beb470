"""Point trajectories, the pixel-to-latent mapping, and training-time subsampling.

Positions are stored internally as (row, col) in fractional pixels with the
origin at the top-left and pixel centers on integer coordinates.  The JSON
trajectory file stores points as [x, y] = [col, row]; the loader converts.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .geometry import LatentGeometry

logger = logging.getLogger(__name__)

TRAJECTORY_SCHEMA_VERSION = 1


@dataclass
class PixelTrajectory:
    """One tracked point: (1+T, 2) float positions and (1+T,) visibility flags."""

    positions: np.ndarray
    visible: np.ndarray

    def __post_init__(self):
        self.positions = np.asarray(self.positions, dtype=np.float64)
        self.visible = np.asarray(self.visible, dtype=bool)
        if self.positions.ndim != 2 or self.positions.shape[1] != 2:
            raise ValueError(f"positions must be (frames, 2), got {self.positions.shape}")
        if self.visible.shape != (self.positions.shape[0],):
            raise ValueError("visible flags must match the number of frames")

    @property
    def frames(self) -> int:
        return self.positions.shape[0]


@dataclass
class TrajectorySet:
    """Trajectories sharing one geometry, keyed by stable integer ids."""

    geometry: LatentGeometry
    tracks: dict[int, PixelTrajectory] = field(default_factory=dict)

    def __post_init__(self):
        for tid, tr in self.tracks.items():
            if tr.frames != self.geometry.video_frames:
                raise ValueError(
                    f"track {tid} has {tr.frames} frames, geometry expects "
                    f"{self.geometry.video_frames}"
                )

    def __len__(self) -> int:
        return len(self.tracks)

    def ids(self) -> list[int]:
        return sorted(self.tracks)


@dataclass
class LatentTrajectory:
    """Trajectory mapped onto the latent grid: (1 + T/f_t, 2) fractional cells."""

    positions: np.ndarray
    visible: np.ndarray


@dataclass
class QuantizedTrack:
    """Integer latent cells (row, col) per latent frame, with visibility."""

    cells: np.ndarray
    visible: np.ndarray


def map_to_latent(traj: PixelTrajectory, geom: LatentGeometry) -> LatentTrajectory:
    """Map a pixel trajectory into latent coordinates.

    Latent frame 0 is the first position divided by f_s; latent frame n >= 1
    averages the f_t pixel positions of frames (n-1)*f_t+1 .. n*f_t and divides
    by f_s.  The group average includes occluded frames; visibility is
    aggregated separately.
    """
    if traj.frames != geom.video_frames:
        raise ValueError(
            f"trajectory has {traj.frames} frames, geometry expects {geom.video_frames}"
        )
    T, f_t, f_s = geom.motion_frames, geom.f_t, geom.f_s
    out = np.empty((1 + T // f_t, 2), dtype=np.float64)
    out[0] = traj.positions[0] / f_s
    if T:
        groups = traj.positions[1:].reshape(T // f_t, f_t, 2)
        out[1:] = groups.sum(axis=1) / (f_t * f_s)
    return LatentTrajectory(positions=out, visible=aggregate_visibility(traj, geom))


def aggregate_visibility(traj: PixelTrajectory, geom: LatentGeometry) -> np.ndarray:
    """Collapse per-pixel-frame visibility onto latent frames.

    Latent frame 0 copies pixel frame 0.  A later latent frame is visible only
    when a strict majority of its f_t contributing pixel frames are visible.
    """
    if traj.frames != geom.video_frames:
        raise ValueError(
            f"trajectory has {traj.frames} frames, geometry expects {geom.video_frames}"
        )
    T, f_t = geom.motion_frames, geom.f_t
    out = np.empty(1 + T // f_t, dtype=bool)
    out[0] = traj.visible[0]
    if T:
        groups = traj.visible[1:].reshape(T // f_t, f_t)
        out[1:] = groups.sum(axis=1) * 2 > f_t
    return out


def quantize(lt: LatentTrajectory, geom: LatentGeometry) -> QuantizedTrack:
    """Round latent positions half-up to integer cells, clamped to the grid."""
    cells = np.floor(np.asarray(lt.positions, dtype=np.float64) + 0.5).astype(np.int64)
    cells[:, 0] = np.clip(cells[:, 0], 0, geom.latent_height - 1)
    cells[:, 1] = np.clip(cells[:, 1], 0, geom.latent_width - 1)
    return QuantizedTrack(cells=cells, visible=np.asarray(lt.visible, dtype=bool).copy())


def quantized_tracks(ts: TrajectorySet) -> dict[int, QuantizedTrack]:
    """map_to_latent + quantize for every track in the set, keyed by id."""
    return {tid: quantize(map_to_latent(tr, ts.geometry), ts.geometry) for tid, tr in ts.tracks.items()}


def sample_training_tracks(
    ts: TrajectorySet, rng: np.random.Generator, n_max: int = 200
) -> TrajectorySet:
    """Draw the per-iteration trajectory subset used during training.

    With probability 0.05 returns the empty set (the no-guidance branch);
    otherwise k is uniform on {1 .. min(n_max, len(ts))} and k distinct tracks
    are chosen uniformly without replacement.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if len(ts) == 0:
        logger.warning("sample_training_tracks called on an empty set")
        return TrajectorySet(geometry=ts.geometry, tracks={})
    if rng.random() < 0.05:
        return TrajectorySet(geometry=ts.geometry, tracks={})
    ids = ts.ids()
    k = int(rng.integers(1, min(n_max, len(ids)) + 1))
    chosen = rng.choice(len(ids), size=k, replace=False)
    picked = {ids[i]: ts.tracks[ids[i]] for i in sorted(chosen)}
    return TrajectorySet(geometry=ts.geometry, tracks=picked)


@dataclass
class Violation:
    track_id: int
    frame: int | None
    kind: str
    message: str


def validate_set(ts: TrajectorySet) -> list[Violation]:
    """Report structural problems per track; never raises."""
    geom = ts.geometry
    out: list[Violation] = []
    for tid in ts.ids():
        tr = ts.tracks[tid]
        if tr.frames != geom.video_frames:
            out.append(
                Violation(tid, None, "length", f"{tr.frames} frames, expected {geom.video_frames}")
            )
            continue
        bad = ~np.isfinite(tr.positions)
        for fr in np.nonzero(bad.any(axis=1))[0]:
            out.append(Violation(tid, int(fr), "non_finite", "non-finite coordinate"))
        finite = np.isfinite(tr.positions).all(axis=1)
        rows, cols = tr.positions[:, 0], tr.positions[:, 1]
        oob = finite & (
            (rows < 0) | (rows > geom.height - 1) | (cols < 0) | (cols > geom.width - 1)
        )
        for fr in np.nonzero(oob)[0]:
            r, c = tr.positions[fr]
            out.append(Violation(tid, int(fr), "out_of_bounds", f"({r}, {c}) outside image"))
    return out


def clamp_positions(positions: np.ndarray, geom: LatentGeometry) -> tuple[np.ndarray, bool]:
    """Clamp (frames, 2) row/col positions into image bounds. Returns (clamped, changed)."""
    clamped = np.array(positions, dtype=np.float64, copy=True)
    clamped[:, 0] = np.clip(clamped[:, 0], 0.0, geom.height - 1)
    clamped[:, 1] = np.clip(clamped[:, 1], 0.0, geom.width - 1)
    changed = bool(np.any(clamped != positions))
    return clamped, changed


def load_trajectories(path: str | Path, geom: LatentGeometry | None = None) -> TrajectorySet:
    """Load the trajectory JSON file, converting [x, y] points to (row, col).

    Out-of-bounds positions are clamped with a warning; trackers routinely
    overshoot the frame by fractions of a pixel.
    """
    with open(path) as f:
        doc = json.load(f)
    return parse_trajectories(doc, geom)


def parse_trajectories(doc: dict, geom: LatentGeometry | None = None) -> TrajectorySet:
    """Parse an already-decoded trajectory JSON document."""
    if doc.get("version") != TRAJECTORY_SCHEMA_VERSION:
        raise ValueError(f"unsupported trajectory file version {doc.get('version')!r}")
    frames, height, width = int(doc["frames"]), int(doc["height"]), int(doc["width"])
    if geom is None:
        geom = _bare_geometry(frames, height, width)
    else:
        if (frames, height, width) != (geom.video_frames, geom.height, geom.width):
            raise ValueError(
                f"trajectory file is {frames}x{height}x{width}, geometry expects "
                f"{geom.video_frames}x{geom.height}x{geom.width}"
            )
    tracks: dict[int, PixelTrajectory] = {}
    for entry in doc["tracks"]:
        tid = int(entry["id"])
        if tid in tracks:
            raise ValueError(f"duplicate track id {tid}")
        pts = np.asarray(entry["points"], dtype=np.float64)
        if pts.ndim != 2 or pts.shape != (frames, 2):
            raise ValueError(f"track {tid}: points must be (frames, 2)")
        positions = pts[:, ::-1].copy()  # [x, y] -> (row, col)
        if np.isfinite(positions).all():
            positions, changed = clamp_positions(positions, geom)
            if changed:
                logger.warning("track %d: clamped out-of-bounds positions into the frame", tid)
        visible = np.asarray(entry["visible"], dtype=bool)
        tracks[tid] = PixelTrajectory(positions=positions, visible=visible)
    return TrajectorySet(geometry=geom, tracks=tracks)


def trajectories_to_doc(ts: TrajectorySet) -> dict:
    """Serialize a TrajectorySet to the trajectory JSON document ((row, col) -> [x, y])."""
    geom = ts.geometry
    return {
        "version": TRAJECTORY_SCHEMA_VERSION,
        "frames": geom.video_frames,
        "height": geom.height,
        "width": geom.width,
        "tracks": [
            {
                "id": tid,
                "points": ts.tracks[tid].positions[:, ::-1].tolist(),
                "visible": [bool(v) for v in ts.tracks[tid].visible],
            }
            for tid in ts.ids()
        ],
    }


def save_trajectories(ts: TrajectorySet, path: str | Path) -> None:
    with open(path, "w") as f:
        json.dump(trajectories_to_doc(ts), f)


def _bare_geometry(frames: int, height: int, width: int) -> LatentGeometry:
    # Trajectory files carry no compression factors; stand in with f_t = f_s = 1.
    return LatentGeometry(
        f_t=1, f_s=1, channels=3, video_frames=frames, height=height, width=width
    )
