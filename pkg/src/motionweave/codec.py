"""Mock translation-equivariant video codec.

Encoding is a block mean: latent frame 0 averages each non-overlapping
f_s x f_s patch of pixel frame 0; latent frame n >= 1 averages the
f_s x f_s x f_t block spanning pixel frames (n-1)*f_t+1 .. n*f_t.  Decoding is
nearest-neighbor upsampling.  Shifting the input by whole multiples of f_s
shifts the latent by the matching number of cells, exactly, which is the
property feature replication leans on.

Tensors are float32; block means accumulate in float64 before the cast back,
so patch-constant videos round-trip bit-exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import LatentGeometry


@dataclass(frozen=True)
class MockCodec:
    geometry: LatentGeometry

    def __post_init__(self):
        if self.geometry.channels != 3:
            raise ValueError("the mock codec carries RGB straight through; channels must be 3")


def check_video(video: np.ndarray, geom: LatentGeometry) -> np.ndarray:
    video = np.asarray(video)
    if video.shape != geom.video_shape:
        raise ValueError(f"video shape {video.shape} does not match geometry {geom.video_shape}")
    return video


def check_latent(latent: np.ndarray, geom: LatentGeometry) -> np.ndarray:
    latent = np.asarray(latent)
    if latent.shape != geom.latent_shape:
        raise ValueError(
            f"latent shape {latent.shape} does not match geometry {geom.latent_shape}"
        )
    return latent


def encode(codec: MockCodec, video: np.ndarray) -> np.ndarray:
    geom = codec.geometry
    video = check_video(video, geom).astype(np.float64, copy=False)
    T, f_t, f_s = geom.motion_frames, geom.f_t, geom.f_s
    Hl, Wl = geom.latent_height, geom.latent_width
    out = np.empty(geom.latent_shape, dtype=np.float64)
    out[0] = video[0].reshape(Hl, f_s, Wl, f_s, 3).mean(axis=(1, 3))
    if T:
        blocks = video[1:].reshape(T // f_t, f_t, Hl, f_s, Wl, f_s, 3)
        out[1:] = blocks.mean(axis=(1, 3, 5))
    return out.astype(np.float32)


def decode(codec: MockCodec, latent: np.ndarray) -> np.ndarray:
    geom = codec.geometry
    latent = check_latent(latent, geom)
    f_t, f_s = geom.f_t, geom.f_s
    up = latent.repeat(f_s, axis=1).repeat(f_s, axis=2)
    out = np.empty(geom.video_shape, dtype=np.float32)
    out[0] = up[0]
    if geom.motion_frames:
        out[1:] = up[1:].repeat(f_t, axis=0)
    return out


def encode_condition(codec: MockCodec, first_frame: np.ndarray, T: int | None = None) -> np.ndarray:
    """Encode [first frame, zeros, ..., zeros]: the un-replicated condition tensor."""
    geom = codec.geometry
    if T is not None and T != geom.motion_frames:
        raise ValueError(f"T={T} does not match geometry T={geom.motion_frames}")
    first_frame = np.asarray(first_frame)
    if first_frame.shape != (geom.height, geom.width, 3):
        raise ValueError(
            f"first frame shape {first_frame.shape}, expected {(geom.height, geom.width, 3)}"
        )
    video = np.zeros(geom.video_shape, dtype=np.float32)
    video[0] = first_frame
    return encode(codec, video)


def shift_video(video: np.ndarray, dr: int, dc: int) -> np.ndarray:
    """Translate every frame by (dr, dc) pixels, zero-filling the uncovered band."""
    out = np.zeros_like(video)
    H, W = video.shape[1], video.shape[2]
    src_r = slice(max(0, -dr), min(H, H - dr))
    src_c = slice(max(0, -dc), min(W, W - dc))
    dst_r = slice(max(0, dr), min(H, H + dr))
    dst_c = slice(max(0, dc), min(W, W + dc))
    out[:, dst_r, dst_c] = video[:, src_r, src_c]
    return out
