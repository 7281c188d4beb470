import numpy as np

from motionweave.pngio import (
    PNG_MAGIC,
    apng_bytes_to_video,
    frame_to_png_bytes,
    load_depth_png,
    png_bytes_to_frame,
    video_to_apng_bytes,
)


def test_frame_round_trip_8bit_exact(rng):
    frame = (rng.integers(0, 256, (16, 16, 3)) / 255.0).astype(np.float32)
    back = png_bytes_to_frame(frame_to_png_bytes(frame))
    assert back.shape == (16, 16, 3)
    assert np.allclose(back, frame, atol=1e-7)


def test_png_magic():
    data = frame_to_png_bytes(np.zeros((4, 4, 3)))
    assert data[:8] == PNG_MAGIC


def test_apng_round_trip(rng):
    video = (rng.integers(0, 256, (5, 8, 8, 3)) / 255.0).astype(np.float32)
    back = apng_bytes_to_video(video_to_apng_bytes(video))
    assert back.shape == video.shape
    assert np.allclose(back, video, atol=1e-7)


def test_depth_png_strictly_positive(tmp_path):
    from PIL import Image

    path = tmp_path / "d.png"
    Image.fromarray(np.zeros((8, 8), dtype=np.uint8), mode="L").save(path)
    depth = load_depth_png(path, depth_scale=2.0)
    assert (depth > 0).all()
    assert np.allclose(depth, 2.0 / 256.0)


def test_depth_png_scaling(tmp_path):
    from PIL import Image

    path = tmp_path / "d.png"
    Image.fromarray(np.full((4, 4), 255, dtype=np.uint8), mode="L").save(path)
    assert np.allclose(load_depth_png(path, depth_scale=4.0), 4.0)
