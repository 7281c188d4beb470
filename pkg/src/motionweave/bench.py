"""Benchmark manifests and the deterministic evaluation runner.

A manifest is JSON lines, one case per line, all paths relative to the
manifest file.  The runner builds each case's condition from its trajectory
file, samples the model, re-tracks the result (or accepts externally supplied
predicted tracks), and scores EPE / PSNR / SSIM.  Reports serialize with a
stable field order so identical runs produce identical bytes.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .codec import MockCodec, decode, encode_condition
from .condition import replicate_features
from .geometry import LatentGeometry
from .metrics import epe, psnr, ssim
from .model import ConditionBundle, ToyDenoiser
from .blobs import track_blobs_oracle
from .pngio import load_frame_png
from .sampling import DEFAULT_GUIDANCE, DEFAULT_STEPS, sample
from .trajectory import (
    TrajectorySet,
    load_trajectories,
    quantized_tracks,
    validate_set,
)
from .wmt import load_tensor

logger = logging.getLogger(__name__)


@dataclass
class BenchmarkCase:
    case_id: str
    category: str
    first_frame: str
    video: str
    trajectories: str
    caption: str = ""
    masks: list[str] = field(default_factory=list)
    predicted_tracks: str | None = None  # optional externally supplied re-tracking

    @classmethod
    def from_json(cls, doc: dict) -> "BenchmarkCase":
        return cls(
            case_id=str(doc["case_id"]),
            category=str(doc.get("category", "")),
            first_frame=str(doc["first_frame"]),
            video=str(doc["video"]),
            trajectories=str(doc["trajectories"]),
            caption=str(doc.get("caption", "")),
            masks=[str(m) for m in doc.get("masks", [])],
            predicted_tracks=doc.get("predicted_tracks"),
        )

    def to_json(self) -> dict:
        doc = {
            "case_id": self.case_id,
            "category": self.category,
            "first_frame": self.first_frame,
            "video": self.video,
            "trajectories": self.trajectories,
            "caption": self.caption,
            "masks": self.masks,
        }
        if self.predicted_tracks is not None:
            doc["predicted_tracks"] = self.predicted_tracks
        return doc


def load_manifest(path: str | Path) -> list[BenchmarkCase]:
    path = Path(path)
    cases = []
    with open(path) as f:
        for line in f:
            line = line.strip()
            if line:
                cases.append(BenchmarkCase.from_json(json.loads(line)))
    return cases


def save_manifest(cases: list[BenchmarkCase], path: str | Path) -> None:
    with open(path, "w") as f:
        for case in cases:
            f.write(json.dumps(case.to_json(), sort_keys=True) + "\n")


def _load_frame(path: Path) -> np.ndarray:
    if path.suffix == ".png":
        return load_frame_png(path)
    return load_tensor(path)


def validate_case(case: BenchmarkCase, root: Path, geom: LatentGeometry) -> list[str]:
    """Check referenced files exist, parse, and agree on the frame count."""
    problems = []
    for attr in ("first_frame", "video", "trajectories"):
        p = root / getattr(case, attr)
        if not p.exists():
            problems.append(f"{attr} missing: {p}")
    if problems:
        return problems
    try:
        video = load_tensor(root / case.video)
        if video.shape != geom.video_shape:
            problems.append(f"video shape {video.shape} != {geom.video_shape}")
        ts = load_trajectories(root / case.trajectories, geom)
        if validate_set(ts):
            problems.append("trajectory file has validation violations")
    except (ValueError, KeyError) as exc:
        problems.append(f"parse failure: {exc}")
    return problems


def infer_track_channel(first_frame: np.ndarray, start: np.ndarray) -> int:
    """Dominant color channel in a 3x3 patch around a track's start position,
    after removing each channel's median background level."""
    H, W = first_frame.shape[0], first_frame.shape[1]
    r = int(np.clip(np.floor(start[0] + 0.5), 0, H - 1))
    c = int(np.clip(np.floor(start[1] + 0.5), 0, W - 1))
    patch = first_frame[max(0, r - 1) : r + 2, max(0, c - 1) : c + 2, :]
    floors = np.median(first_frame.reshape(-1, 3), axis=0)
    return int(np.argmax(patch.mean(axis=(0, 1)) - floors))


def retrack_video(video: np.ndarray, first_frame: np.ndarray, gt: TrajectorySet) -> TrajectorySet:
    """Estimate realized trajectories from a generated video by following each
    commanded track's dominant blob channel."""
    tracks = {}
    for tid in gt.ids():
        channel = infer_track_channel(first_frame, gt.tracks[tid].positions[0])
        tracks[tid] = track_blobs_oracle(video, channel)
    return TrajectorySet(geometry=gt.geometry, tracks=tracks)


@dataclass
class RunConfig:
    seed: int = 0
    guidance: float = DEFAULT_GUIDANCE
    steps: int = DEFAULT_STEPS
    checkpoint_id: str = ""


def run_benchmark(
    cases: list[BenchmarkCase],
    model: ToyDenoiser,
    root: str | Path,
    run: RunConfig,
) -> dict:
    """Evaluate every case and assemble the report dict (stable key order).

    Per-case failures are recorded in the row and the run continues.  FID and
    FVD are intentionally absent from the schema.
    """
    root = Path(root)
    geom = model.geometry
    codec = MockCodec(geometry=geom)
    rows = []
    track_counts = []
    for index, case in enumerate(cases):
        try:
            rows.append(_run_case(case, model, codec, root, run, index, track_counts))
        except Exception as exc:  # recorded, run continues
            logger.warning("case %s failed: %s", case.case_id, exc)
            rows.append({"case_id": case.case_id, "error": f"{type(exc).__name__}: {exc}"})
    scored = [r for r in rows if "error" not in r]
    aggregate = {
        metric: (float(np.mean([r[metric] for r in scored])) if scored else None)
        for metric in ("epe", "psnr", "ssim")
    }
    return {
        "cases": rows,
        "aggregate": aggregate,
        "metadata": {
            "checkpoint_id": run.checkpoint_id,
            "seed": run.seed,
            "guidance": run.guidance,
            "steps": run.steps,
            "case_count": len(cases),
            "track_count_used": int(sum(track_counts)),
        },
    }


def _run_case(case, model, codec, root, run, index, track_counts):
    geom = model.geometry
    problems = validate_case(case, root, geom)
    if problems:
        raise ValueError("; ".join(problems))
    first_frame = _load_frame(root / case.first_frame)
    gt_video = load_tensor(root / case.video)
    gt_tracks = load_trajectories(root / case.trajectories, geom)

    base = encode_condition(codec, first_frame).astype(np.float64)
    case_rng = np.random.default_rng([run.seed, index])
    cond = replicate_features(base, quantized_tracks(gt_tracks), case_rng).astype(np.float64)
    bundle = ConditionBundle(condition=cond, uncond_condition=base)
    latent = sample(model, bundle, w=run.guidance, steps=run.steps, rng=case_rng)
    video = decode(codec, latent.astype(np.float32))
    track_counts.append(len(gt_tracks))

    if case.predicted_tracks:
        pred = load_trajectories(root / case.predicted_tracks, geom)
    else:
        pred = retrack_video(video, first_frame, gt_tracks)
    return {
        "case_id": case.case_id,
        "category": case.category,
        "epe": epe(gt_tracks, pred),
        "psnr": psnr(video, gt_video),
        "ssim": ssim(video, gt_video),
    }


def report_to_json(report: dict) -> str:
    """Canonical serialization: sorted keys, fixed separators, trailing newline."""
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def report_to_csv(report: dict) -> str:
    lines = ["case_id,category,epe,psnr,ssim,error"]
    for row in report["cases"]:
        if "error" in row:
            lines.append(f"{row['case_id']},,,,,\"{row['error']}\"")
        else:
            lines.append(
                f"{row['case_id']},{row['category']},{row['epe']!r},{row['psnr']!r},{row['ssim']!r},"
            )
    return "\n".join(lines) + "\n"


def score_passthrough(case: BenchmarkCase, root: str | Path, geom: LatentGeometry) -> dict:
    """Score the ground-truth video against itself (oracle pass-through)."""
    root = Path(root)
    gt_video = load_tensor(root / case.video)
    gt_tracks = load_trajectories(root / case.trajectories, geom)
    return {
        "case_id": case.case_id,
        "epe": epe(gt_tracks, gt_tracks),
        "psnr": psnr(gt_video, gt_video),
        "ssim": ssim(gt_video, gt_video),
    }
