"""Build a small benchmark on disk, run the deterministic runner twice, and
show the reports agree byte for byte.

The same flow via the CLI:

    motionweave bench run --manifest <dir>/manifest.jsonl --ckpt <ckpt> --seed 0 --out out/
"""

import tempfile
from pathlib import Path

import numpy as np

from motionweave import (
    BenchmarkCase,
    LatentGeometry,
    MockCodec,
    RunConfig,
    TrainConfig,
    load_manifest,
    make_blob_dataset,
    run_benchmark,
    save_manifest,
    save_tensor,
    train,
)
from motionweave.bench import report_to_json
from motionweave.blobs import grid_truth_tracks
from motionweave.pngio import save_frame_png
from motionweave.trajectory import save_trajectories

geom = LatentGeometry(f_t=4, f_s=4, channels=3, video_frames=9, height=32, width=32)
codec = MockCodec(geometry=geom)

root = Path(tempfile.mkdtemp(prefix="mw-bench-"))
samples = make_blob_dataset(np.random.default_rng(7), 6, geom, family="linear", blob_range=(1, 1))
cases = []
for i, s in enumerate(samples):
    cid = f"case{i:03d}"
    (root / cid).mkdir()
    save_frame_png(s.video[0], root / cid / "first.png")
    save_tensor(s.video, root / cid / "video.wmt1")
    save_trajectories(s.tracks, root / cid / "tracks.json")
    cases.append(BenchmarkCase(
        case_id=cid, category="single-blob",
        first_frame=f"{cid}/first.png", video=f"{cid}/video.wmt1",
        trajectories=f"{cid}/tracks.json", caption="one blob on a textured background",
    ))
save_manifest(cases, root / "manifest.jsonl")
print(f"benchmark with {len(cases)} cases at {root}")

data = make_blob_dataset(np.random.default_rng(0), 40, geom, blob_range=(1, 3))
for s in data:
    s.tracks = grid_truth_tracks(s, 8)
print("training a small model (~1 min)...")
model = train(TrainConfig(total_steps=600, batch_size=16, learning_rate=5e-3,
                          warmup_steps=60, seed=0), data, codec).model

run = RunConfig(seed=0, checkpoint_id="demo")
reports = [
    report_to_json(run_benchmark(load_manifest(root / "manifest.jsonl"), model, root, run))
    for _ in range(2)
]
assert reports[0] == reports[1]
print("two runs produced byte-identical reports")

import json

agg = json.loads(reports[0])["aggregate"]
print(f"aggregate: EPE {agg['epe']:.2f} px, PSNR {agg['psnr']:.1f} dB, SSIM {agg['ssim']:.3f}")
