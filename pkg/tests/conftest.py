import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from motionweave.geometry import LatentGeometry


def default_geometry():
    return LatentGeometry(f_t=4, f_s=4, channels=3, video_frames=9, height=32, width=32)


@pytest.fixture
def geom():
    """Default desk-scale geometry: 9 frames of 32x32, f_t=4, f_s=4."""
    return default_geometry()


@pytest.fixture
def rng():
    return np.random.default_rng(0)


def random_geometry(rng):
    f_t = int(rng.integers(1, 5))
    f_s = int(rng.integers(1, 5))
    T = f_t * int(rng.integers(1, 4))
    H = f_s * int(rng.integers(2, 7))
    W = f_s * int(rng.integers(2, 7))
    return LatentGeometry(f_t=f_t, f_s=f_s, channels=3, video_frames=1 + T, height=H, width=W)


@pytest.fixture(scope="session")
def micro_checkpoint(tmp_path_factory):
    """A briefly trained checkpoint at the default geometry, shared by bench,
    CLI, and service tests: sampling quality is irrelevant there, determinism
    and interfaces are what matter."""
    from motionweave.blobs import grid_truth_tracks, make_blob_dataset
    from motionweave.checkpoint import save_checkpoint
    from motionweave.codec import MockCodec
    from motionweave.training import TrainConfig, train

    g = default_geometry()
    codec = MockCodec(geometry=g)
    data = make_blob_dataset(np.random.default_rng(0), 8, g, blob_range=(1, 1))
    for s in data:
        s.tracks = grid_truth_tracks(s, 4)
    cfg = TrainConfig(total_steps=40, batch_size=4, warmup_steps=5, seed=0)
    result = train(cfg, data, codec)
    path = tmp_path_factory.mktemp("ckpt") / "micro"
    save_checkpoint(result.model, path, config=cfg.to_dict(), seed=cfg.seed)
    return path


@pytest.fixture(scope="session")
def blob_benchmark(tmp_path_factory):
    """A small manifest of blob cases with ground-truth videos on disk."""
    import json

    from motionweave.blobs import make_blob_dataset
    from motionweave.bench import BenchmarkCase, save_manifest
    from motionweave.pngio import save_frame_png
    from motionweave.trajectory import save_trajectories
    from motionweave.wmt import save_tensor

    g = default_geometry()
    root = tmp_path_factory.mktemp("bench")
    samples = make_blob_dataset(
        np.random.default_rng(77), 4, g, family="linear", blob_range=(1, 1)
    )
    cases = []
    for i, s in enumerate(samples):
        cid = f"case{i:03d}"
        (root / cid).mkdir()
        save_frame_png(s.video[0], root / cid / "first.png")
        save_tensor(s.video, root / cid / "video.wmt1")
        save_trajectories(s.tracks, root / cid / "tracks.json")
        cases.append(
            BenchmarkCase(
                case_id=cid,
                category="single-blob",
                first_frame=f"{cid}/first.png",
                video=f"{cid}/video.wmt1",
                trajectories=f"{cid}/tracks.json",
                caption="one blob drifting over a textured background",
            )
        )
    manifest = root / "manifest.jsonl"
    save_manifest(cases, manifest)
    return manifest
