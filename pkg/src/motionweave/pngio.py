"""PNG helpers: single frames, 8-bit grayscale depth maps, and animated
previews.  Raw float tensors travel as WMT1; PNG is the human-facing edge."""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np
from PIL import Image

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def frame_to_png_bytes(frame: np.ndarray) -> bytes:
    """Encode an (H, W, 3) float [0,1] frame as PNG bytes."""
    arr = np.clip(np.asarray(frame), 0.0, 1.0)
    img = Image.fromarray((arr * 255.0 + 0.5).astype(np.uint8), mode="RGB")
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()


def png_bytes_to_frame(data: bytes) -> np.ndarray:
    """Decode PNG bytes to an (H, W, 3) float32 frame in [0, 1]."""
    img = Image.open(io.BytesIO(data)).convert("RGB")
    return np.asarray(img, dtype=np.float32) / 255.0


def save_frame_png(frame: np.ndarray, path: str | Path) -> None:
    Path(path).write_bytes(frame_to_png_bytes(frame))


def load_frame_png(path: str | Path) -> np.ndarray:
    return png_bytes_to_frame(Path(path).read_bytes())


def load_depth_png(path: str | Path, depth_scale: float = 1.0) -> np.ndarray:
    """8-bit grayscale PNG -> positive depth map: (value + 1) * scale / 256."""
    img = Image.open(path).convert("L")
    raw = np.asarray(img, dtype=np.float64)
    return (raw + 1.0) * depth_scale / 256.0


def video_to_apng_bytes(video: np.ndarray, fps: float = 8.0) -> bytes:
    """Encode a (frames, H, W, 3) float video as an animated PNG."""
    video = np.clip(np.asarray(video), 0.0, 1.0)
    frames = [
        Image.fromarray((video[f] * 255.0 + 0.5).astype(np.uint8), mode="RGB")
        for f in range(video.shape[0])
    ]
    buf = io.BytesIO()
    frames[0].save(
        buf,
        format="PNG",
        save_all=True,
        append_images=frames[1:],
        duration=int(1000 / fps),
        loop=0,
    )
    return buf.getvalue()


def apng_bytes_to_video(data: bytes) -> np.ndarray:
    """Decode an animated PNG back to (frames, H, W, 3) float32."""
    img = Image.open(io.BytesIO(data))
    frames = []
    try:
        while True:
            frames.append(np.asarray(img.convert("RGB"), dtype=np.float32) / 255.0)
            img.seek(img.tell() + 1)
    except EOFError:
        pass
    return np.stack(frames)
