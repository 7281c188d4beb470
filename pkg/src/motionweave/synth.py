"""Trajectory generators: dense grids, camera moves over a depth point cloud
with z-buffer occlusion, virtual-sphere rotation, depth-based 3D object
rotation, and motion transfer between geometries.

Conventions: image positions are (row, col) with pixel centers on integers;
camera space is right-handed with +z along the optical axis (depth), x along
columns, y along rows; poses are world-to-camera.  All generators clamp
emitted positions into the frame so their outputs validate cleanly; points
that left the frame or the front half-space are flagged invisible instead.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import LatentGeometry
from .trajectory import PixelTrajectory, TrajectorySet


@dataclass(frozen=True)
class Intrinsics:
    fx: float
    fy: float
    cx: float
    cy: float

    def __post_init__(self):
        if self.fx <= 0 or self.fy <= 0:
            raise ValueError("focal lengths must be positive")


@dataclass
class CameraPath:
    """World-to-camera rigid poses, one per frame."""

    rotations: np.ndarray  # (frames, 3, 3)
    translations: np.ndarray  # (frames, 3)

    def __post_init__(self):
        self.rotations = np.asarray(self.rotations, dtype=np.float64)
        self.translations = np.asarray(self.translations, dtype=np.float64)
        if self.rotations.ndim != 3 or self.rotations.shape[1:] != (3, 3):
            raise ValueError("rotations must be (frames, 3, 3)")
        if self.translations.shape != (self.rotations.shape[0], 3):
            raise ValueError("translations must be (frames, 3)")
        for i, R in enumerate(self.rotations):
            if not np.allclose(R @ R.T, np.eye(3), atol=1e-6) or not np.isclose(
                np.linalg.det(R), 1.0, atol=1e-6
            ):
                raise ValueError(f"pose {i}: rotation is not orthonormal with determinant 1")

    @property
    def frames(self) -> int:
        return self.rotations.shape[0]


@dataclass(frozen=True)
class SpherePrimitive:
    center: tuple[float, float]  # (row, col) in pixels
    radius: float
    axis: tuple[float, float, float]  # unit 3-vector (x=col, y=row, z=optical)
    angle: float  # total rotation in radians

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        if abs(np.linalg.norm(self.axis) - 1.0) > 1e-6:
            raise ValueError("axis must be unit-norm")


def check_depth(depth: np.ndarray) -> np.ndarray:
    depth = np.asarray(depth, dtype=np.float64)
    if depth.ndim != 2:
        raise ValueError("depth map must be 2-D")
    if not np.isfinite(depth).all() or (depth <= 0).any():
        raise ValueError("depths must be finite and strictly positive")
    return depth


def rotation_matrix(axis, angle: float) -> np.ndarray:
    """Rodrigues rotation about a unit axis."""
    x, y, z = axis
    K = np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])
    return np.eye(3) + np.sin(angle) * K + (1.0 - np.cos(angle)) * (K @ K)


def grid_tracks(geom: LatentGeometry, n_per_side: int) -> np.ndarray:
    """Frame-0 seed points at the patch centers of a uniform n x n grid.

    Center convention: coordinate i maps to (i + 0.5) * extent / n - 0.5, which
    reduces to the pixel index itself when n equals the extent.
    """
    if n_per_side < 1:
        raise ValueError("n_per_side must be >= 1")
    rows = (np.arange(n_per_side) + 0.5) * geom.height / n_per_side - 0.5
    cols = (np.arange(n_per_side) + 0.5) * geom.width / n_per_side - 0.5
    rr, cc = np.meshgrid(rows, cols, indexing="ij")
    return np.stack([rr.ravel(), cc.ravel()], axis=1)


def backproject(seeds: np.ndarray, depth: np.ndarray, K: Intrinsics) -> np.ndarray:
    """Lift frame-0 pixel points to camera-space 3D using the depth at the
    nearest pixel."""
    seeds = np.asarray(seeds, dtype=np.float64)
    px = np.floor(seeds + 0.5).astype(np.int64)
    px[:, 0] = np.clip(px[:, 0], 0, depth.shape[0] - 1)
    px[:, 1] = np.clip(px[:, 1], 0, depth.shape[1] - 1)
    z = depth[px[:, 0], px[:, 1]]
    x = (seeds[:, 1] - K.cx) / K.fx * z
    y = (seeds[:, 0] - K.cy) / K.fy * z
    return np.stack([x, y, z], axis=1)


def project(points: np.ndarray, K: Intrinsics) -> tuple[np.ndarray, np.ndarray]:
    """Pinhole projection to (row, col); returns (positions, depths)."""
    z = points[:, 2]
    safe = np.where(np.abs(z) < 1e-12, 1e-12, z)
    col = K.fx * points[:, 0] / safe + K.cx
    row = K.fy * points[:, 1] / safe + K.cy
    return np.stack([row, col], axis=1), z


def _zbuffer_visibility(positions: np.ndarray, depths: np.ndarray, H: int, W: int) -> np.ndarray:
    """Per-point visibility under 1-pixel-cell z-buffering.

    Visible iff depth > 0, the half-up-rounded cell is inside the image, and
    no other positive-depth point shares the cell with strictly smaller depth
    (ties keep both).
    """
    cells = np.floor(positions + 0.5).astype(np.int64)
    inside = (
        (depths > 0)
        & (cells[:, 0] >= 0)
        & (cells[:, 0] < H)
        & (cells[:, 1] >= 0)
        & (cells[:, 1] < W)
    )
    nearest: dict[tuple[int, int], float] = {}
    for i in np.nonzero(inside)[0]:
        key = (int(cells[i, 0]), int(cells[i, 1]))
        d = float(depths[i])
        if key not in nearest or d < nearest[key]:
            nearest[key] = d
    visible = np.zeros(len(positions), dtype=bool)
    for i in np.nonzero(inside)[0]:
        key = (int(cells[i, 0]), int(cells[i, 1]))
        visible[i] = depths[i] <= nearest[key]
    return visible


def _clamp_into(positions: np.ndarray, H: int, W: int) -> np.ndarray:
    out = positions.copy()
    out[:, 0] = np.clip(out[:, 0], 0.0, H - 1)
    out[:, 1] = np.clip(out[:, 1], 0.0, W - 1)
    return out


def _assemble(geom: LatentGeometry, positions: np.ndarray, visible: np.ndarray) -> TrajectorySet:
    """positions: (frames, n, 2); visible: (frames, n)."""
    tracks = {
        i: PixelTrajectory(positions=positions[:, i, :].copy(), visible=visible[:, i].copy())
        for i in range(positions.shape[1])
    }
    return TrajectorySet(geometry=geom, tracks=tracks)


def camera_tracks(
    depth: np.ndarray,
    K: Intrinsics,
    path: CameraPath,
    seeds: np.ndarray,
    geom: LatentGeometry,
) -> TrajectorySet:
    """Track a depth-lifted point cloud through a camera move.

    Frame 0's pose must be the identity: it defines the point cloud.  Each
    seed is back-projected, transformed by every pose, re-projected, and
    z-buffered against the other tracked points.
    """
    depth = check_depth(depth)
    if depth.shape != (geom.height, geom.width):
        raise ValueError("depth map does not match geometry")
    if path.frames != geom.video_frames:
        raise ValueError(f"path has {path.frames} poses, geometry expects {geom.video_frames}")
    if not np.allclose(path.rotations[0], np.eye(3), atol=1e-7) or not np.allclose(
        path.translations[0], 0.0, atol=1e-7
    ):
        raise ValueError("first pose must be the identity")
    world = backproject(seeds, depth, K)
    n = world.shape[0]
    positions = np.empty((path.frames, n, 2))
    visible = np.empty((path.frames, n), dtype=bool)
    prev = np.asarray(seeds, dtype=np.float64).copy()
    for f in range(path.frames):
        cam = world @ path.rotations[f].T + path.translations[f]
        pos, z = project(cam, K)
        degenerate = np.abs(cam[:, 2]) < 1e-12
        pos[degenerate] = prev[degenerate]
        visible[f] = _zbuffer_visibility(pos, z, geom.height, geom.width)
        positions[f] = _clamp_into(pos, geom.height, geom.width)
        prev = positions[f]
    return _assemble(geom, positions, visible)


def sphere_tracks(
    sph: SpherePrimitive, seeds: np.ndarray, geom: LatentGeometry
) -> TrajectorySet:
    """Rotate points on a virtual sphere and project them orthographically.

    Seeds must lie inside the projected disc; they are lifted onto the front
    hemisphere (z = -sqrt(R^2 - x^2 - y^2)), rotated by angle * n / T about
    the axis, and dropped back to (row, col).  A point is visible while its
    rotated z stays negative (front hemisphere).
    """
    seeds = np.asarray(seeds, dtype=np.float64)
    cr, cc = sph.center
    x = seeds[:, 1] - cc
    y = seeds[:, 0] - cr
    r2 = x * x + y * y
    if (r2 > sph.radius**2).any():
        raise ValueError("seed outside the sphere's projected disc")
    z = -np.sqrt(np.maximum(sph.radius**2 - r2, 0.0))
    local = np.stack([x, y, z], axis=1)
    T = geom.motion_frames
    positions = np.empty((geom.video_frames, len(seeds), 2))
    visible = np.empty((geom.video_frames, len(seeds)), dtype=bool)
    for f in range(geom.video_frames):
        theta = sph.angle * (f / T if T else 0.0)
        rotated = local @ rotation_matrix(sph.axis, theta).T
        pos = np.stack([cr + rotated[:, 1], cc + rotated[:, 0]], axis=1)
        visible[f] = rotated[:, 2] < 0
        positions[f] = _clamp_into(pos, geom.height, geom.width)
    return _assemble(geom, positions, visible)


def rotate3d_tracks(
    depth: np.ndarray,
    K: Intrinsics,
    mask: np.ndarray,
    axis,
    angle: float,
    geom: LatentGeometry,
    pivot: np.ndarray | None = None,
) -> TrajectorySet:
    """Rotate the depth-lifted masked pixels about a pivot and re-project.

    pivot defaults to the 3D centroid of the masked points.  Visibility uses
    the same z-buffer rule as camera_tracks, restricted to the tracked set.
    """
    depth = check_depth(depth)
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != depth.shape:
        raise ValueError("mask and depth shapes differ")
    if not mask.any():
        raise ValueError("mask selects no pixels")
    axis = np.asarray(axis, dtype=np.float64)
    if abs(np.linalg.norm(axis) - 1.0) > 1e-6:
        raise ValueError("axis must be unit-norm")
    rows, cols = np.nonzero(mask)
    seeds = np.stack([rows, cols], axis=1).astype(np.float64)
    points = backproject(seeds, depth, K)
    if pivot is None:
        pivot = points.mean(axis=0)
    pivot = np.asarray(pivot, dtype=np.float64)
    T = geom.motion_frames
    positions = np.empty((geom.video_frames, len(seeds), 2))
    visible = np.empty((geom.video_frames, len(seeds)), dtype=bool)
    for f in range(geom.video_frames):
        theta = angle * (f / T if T else 0.0)
        rotated = (points - pivot) @ rotation_matrix(axis, theta).T + pivot
        pos, z = project(rotated, K)
        degenerate = np.abs(rotated[:, 2]) < 1e-12
        if degenerate.any():
            pos[degenerate] = seeds[degenerate]
        visible[f] = _zbuffer_visibility(pos, z, geom.height, geom.width)
        positions[f] = _clamp_into(pos, geom.height, geom.width)
    return _assemble(geom, positions, visible)


def motion_transfer(tracks: TrajectorySet, target_geom: LatentGeometry) -> TrajectorySet:
    """Rescale a trajectory set onto a new geometry's pixel grid.

    Coordinates scale by target/source extent; frame counts must match.  The
    scaled endpoint can overshoot the last pixel when downscaling, so results
    are clamped back into bounds.
    """
    src = tracks.geometry
    if src.video_frames != target_geom.video_frames:
        raise ValueError(
            f"frame count mismatch: source {src.video_frames}, target {target_geom.video_frames}"
        )
    sr = target_geom.height / src.height
    sc = target_geom.width / src.width
    out = {}
    for tid, tr in tracks.tracks.items():
        pos = tr.positions * np.array([sr, sc])
        out[tid] = PixelTrajectory(
            positions=_clamp_into(pos, target_geom.height, target_geom.width),
            visible=tr.visible.copy(),
        )
    return TrajectorySet(geometry=target_geom, tracks=out)
