"""Trajectory generators for the application modes.

Camera motion over a depth point cloud with z-buffer occlusion, a spinning
virtual sphere, depth-based 3D object rotation, and motion transfer between
image sizes.
"""

import numpy as np

from motionweave import (
    CameraPath,
    Intrinsics,
    LatentGeometry,
    SpherePrimitive,
    camera_tracks,
    grid_tracks,
    motion_transfer,
    rotate3d_tracks,
    sphere_tracks,
    validate_set,
)

geom = LatentGeometry(f_t=4, f_s=4, channels=3, video_frames=9, height=32, width=32)
K = Intrinsics(fx=32.0, fy=32.0, cx=15.5, cy=15.5)

# --- camera: truck right over a two-plane scene -----------------------------
depth = np.full((32, 32), 3.0)
depth[:, 16:] = 1.5  # near slab on the right half
path = CameraPath(
    rotations=np.repeat(np.eye(3)[None], 9, axis=0),
    translations=np.array([[-0.06 * f, 0.0, 0.0] for f in range(9)]),
)
cam = camera_tracks(depth, K, path, grid_tracks(geom, 6), geom)
occluded = sum(1 for tr in cam.tracks.values() if not tr.visible.all())
print(f"camera truck: {len(cam)} tracks, {occluded} lose visibility to the z-buffer")

# --- sphere: quarter turn about the vertical axis ---------------------------
sph = SpherePrimitive(center=(15.5, 15.5), radius=10.0, axis=(0.0, 1.0, 0.0), angle=np.pi / 2)
seeds = grid_tracks(geom, 8)
inside = np.linalg.norm(seeds - np.array([15.5, 15.5]), axis=1) <= 9.0
globe = sphere_tracks(sph, seeds[inside], geom)
gone = sum(1 for tr in globe.tracks.values() if not tr.visible[-1])
print(f"sphere spin: {len(globe)} tracks, {gone} rotate past the limb by the last frame")

# --- 3d rotation of a masked slab -------------------------------------------
mask = np.zeros((32, 32), dtype=bool)
mask[12:20, 10:22] = True
rot = rotate3d_tracks(np.full((32, 32), 3.0), K, mask, (0.0, 1.0, 0.0), np.pi / 3, geom)
spread = [float(np.ptp([tr.positions[f, 1] for tr in rot.tracks.values()])) for f in (0, 8)]
print(f"3d rotation: column spread shrinks {spread[0]:.1f} -> {spread[1]:.1f} px as the slab turns")

# --- motion transfer ---------------------------------------------------------
big = LatentGeometry(f_t=4, f_s=4, channels=3, video_frames=9, height=64, width=64)
src = camera_tracks(np.full((64, 64), 3.0), Intrinsics(64, 64, 31.5, 31.5), CameraPath(
    rotations=np.repeat(np.eye(3)[None], 9, axis=0),
    translations=np.array([[-0.05 * f, 0.0, 0.0] for f in range(9)]),
), grid_tracks(big, 4), big)
moved = motion_transfer(src, geom)
print(f"motion transfer: 64x64 tracks rescaled onto 32x32, violations: {len(validate_set(moved))}")

for name, ts in (("camera", cam), ("sphere", globe), ("rotate3d", rot), ("transfer", moved)):
    assert validate_set(ts) == [], name
print("all generated sets validate cleanly")
