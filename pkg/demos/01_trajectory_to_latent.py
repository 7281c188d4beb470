"""From pixel trajectories to latent cells.

Walks one drawn point path through the whole trajectory pipeline: mapping
into latent coordinates (first frame divided by the spatial factor, later
frames group-averaged), visibility aggregation, and quantization onto the
latent grid.
"""

import numpy as np

from motionweave import (
    LatentGeometry,
    PixelTrajectory,
    aggregate_visibility,
    map_to_latent,
    quantize,
)

geom = LatentGeometry(f_t=4, f_s=4, channels=3, video_frames=9, height=32, width=32)
print(f"geometry: {geom.video_frames} frames of {geom.height}x{geom.width} px")
print(f"latent:   {geom.latent_frames} frames of {geom.latent_height}x{geom.latent_width} cells\n")

# a point sweeping left to right, dipping briefly behind an occluder
positions = np.stack([np.full(9, 16.0), np.linspace(4.0, 28.0, 9)], axis=1)
visible = np.array([True, True, True, False, False, False, True, True, True])
track = PixelTrajectory(positions=positions, visible=visible)

latent = map_to_latent(track, geom)
print("pixel positions (row, col):")
print(np.round(positions, 2))
print("\nlatent positions (frame 0 is p/f_s, later frames average each f_t group):")
print(np.round(latent.positions, 3))

agg = aggregate_visibility(track, geom)
print(f"\npixel visibility:  {visible.astype(int)}")
print(f"latent visibility: {agg.astype(int)}  (strict majority per group)")

cells = quantize(latent, geom)
print(f"\nquantized cells (half-up, clamped to the {geom.latent_height}x{geom.latent_width} grid):")
print(cells.cells)
