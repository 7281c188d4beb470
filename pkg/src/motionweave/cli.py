"""Command-line entry points: trajectory synthesis, training, sampling,
benchmarking, and the HTTP service."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # 3.10
    import tomli as tomllib

from .blobs import grid_truth_tracks, make_blob_dataset
from .bench import RunConfig, load_manifest, report_to_csv, report_to_json, run_benchmark
from .checkpoint import checkpoint_id, load_checkpoint, save_checkpoint
from .codec import MockCodec, decode, encode_condition
from .condition import replicate_features
from .geometry import LatentGeometry
from .model import ConditionBundle
from .pngio import load_depth_png, load_frame_png, save_frame_png, video_to_apng_bytes
from .sampling import DEFAULT_GUIDANCE, DEFAULT_STEPS, sample
from .synth import (
    CameraPath,
    Intrinsics,
    SpherePrimitive,
    camera_tracks,
    grid_tracks,
    motion_transfer,
    rotate3d_tracks,
    sphere_tracks,
)
from .trajectory import (
    PixelTrajectory,
    TrajectorySet,
    load_trajectories,
    quantized_tracks,
    save_trajectories,
)
from .training import TrainConfig, train
from .wmt import load_tensor, save_tensor


def _pixel_geometry(frames: int, height: int, width: int) -> LatentGeometry:
    return LatentGeometry(
        f_t=1, f_s=1, channels=3, video_frames=frames, height=height, width=width
    )


def _load_depth(path: str, depth_scale: float) -> np.ndarray:
    p = Path(path)
    if p.suffix == ".png":
        return load_depth_png(p, depth_scale)
    return load_tensor(p).astype(np.float64)


def _load_mask(path: str) -> np.ndarray:
    p = Path(path)
    if p.suffix == ".png":
        from PIL import Image

        return np.asarray(Image.open(p).convert("L")) > 127
    return load_tensor(p) > 0.5


def _load_camera_path(path: str) -> CameraPath:
    with open(path) as f:
        doc = json.load(f)
    rotations = np.array([pose["rotation"] for pose in doc["poses"]], dtype=np.float64)
    translations = np.array([pose["translation"] for pose in doc["poses"]], dtype=np.float64)
    return CameraPath(rotations=rotations, translations=translations)


def _seed_points(args, geom: LatentGeometry) -> np.ndarray:
    if args.seeds:
        ts = load_trajectories(args.seeds)
        return np.stack([ts.tracks[tid].positions[0] for tid in ts.ids()])
    return grid_tracks(geom, args.grid)


def _parse_vec3(text: str) -> tuple[float, float, float]:
    parts = [float(v) for v in text.split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected three comma-separated numbers")
    return (parts[0], parts[1], parts[2])


def cmd_synth(args) -> int:
    geom = _pixel_geometry(args.frames, args.height, args.width)
    if args.mode == "grid":
        seeds = grid_tracks(geom, args.grid)
        tracks = {
            i: PixelTrajectory(
                positions=np.tile(seed, (geom.video_frames, 1)),
                visible=np.ones(geom.video_frames, dtype=bool),
            )
            for i, seed in enumerate(seeds)
        }
        ts = TrajectorySet(geometry=geom, tracks=tracks)
    elif args.mode == "camera":
        depth = _load_depth(args.depth, args.depth_scale)
        K = Intrinsics(fx=args.fx, fy=args.fy, cx=args.cx, cy=args.cy)
        path = _load_camera_path(args.path)
        ts = camera_tracks(depth, K, path, _seed_points(args, geom), geom)
    elif args.mode == "sphere":
        sph = SpherePrimitive(
            center=(args.center_row, args.center_col),
            radius=args.radius,
            axis=args.axis,
            angle=args.angle,
        )
        if args.seeds:
            seeds = _seed_points(args, geom)
        else:
            seeds = grid_tracks(geom, args.grid)
            cr, cc = sph.center
            inside = ((seeds[:, 0] - cr) ** 2 + (seeds[:, 1] - cc) ** 2) <= sph.radius**2
            seeds = seeds[inside]
        ts = sphere_tracks(sph, seeds, geom)
    elif args.mode == "rotate3d":
        depth = _load_depth(args.depth, args.depth_scale)
        K = Intrinsics(fx=args.fx, fy=args.fy, cx=args.cx, cy=args.cy)
        mask = _load_mask(args.mask)
        pivot = np.array(args.pivot) if args.pivot else None
        ts = rotate3d_tracks(depth, K, mask, args.axis, args.angle, geom, pivot=pivot)
    elif args.mode == "transfer":
        src = load_trajectories(args.tracks)
        ts = motion_transfer(src, geom)
    else:
        raise ValueError(f"unknown synth mode {args.mode!r}")
    save_trajectories(ts, args.out)
    print(f"wrote {len(ts)} tracks to {args.out}")
    return 0


def cmd_train(args) -> int:
    with open(args.config, "rb") as f:
        doc = tomllib.load(f)
    geom = LatentGeometry.from_dict(doc["geometry"])
    codec = MockCodec(geometry=geom)
    ds = doc.get("dataset", {})
    rng = np.random.default_rng(int(ds.get("seed", 0)))
    dataset = make_blob_dataset(
        rng,
        int(ds.get("count", 100)),
        geom,
        family=ds.get("family", "piecewise"),
        blob_range=(int(ds.get("blob_min", 1)), int(ds.get("blob_max", 3))),
    )
    per_side = int(ds.get("grid_tracks_per_side", 8))
    if per_side > 0:
        for s in dataset:
            s.tracks = grid_truth_tracks(s, per_side)
    config = TrainConfig(**doc.get("train", {}))
    result = train(config, dataset, codec)
    out = Path(doc.get("output", {}).get("dir", "run"))
    save_checkpoint(result.model, out / "checkpoint", config=config.to_dict(), seed=config.seed)
    curve = {
        "losses": result.losses,
        "empty_condition_draws": result.empty_condition_draws,
        "sample_draws": result.sample_draws,
        "config": config.to_dict(),
    }
    with open(out / "loss_curve.json", "w") as f:
        json.dump(curve, f)
    print(
        f"trained {config.total_steps} steps; final-100 mean loss "
        f"{float(np.mean(result.losses[-100:])):.4f}; checkpoint at {out / 'checkpoint'}"
    )
    return 0


def cmd_sample(args) -> int:
    model = load_checkpoint(args.ckpt)
    geom = model.geometry
    codec = MockCodec(geometry=geom)
    frame_path = Path(args.frame)
    first = load_frame_png(frame_path) if frame_path.suffix == ".png" else load_tensor(frame_path)
    base = encode_condition(codec, first).astype(np.float64)
    rng = np.random.default_rng(args.seed)
    if args.tracks:
        ts = load_trajectories(args.tracks, geom)
        cond = replicate_features(base, quantized_tracks(ts), rng).astype(np.float64)
    else:
        cond = base
    bundle = ConditionBundle(condition=cond, uncond_condition=base)
    latent = sample(model, bundle, w=args.w, steps=args.steps, rng=rng)
    video = decode(codec, latent.astype(np.float32))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    save_tensor(video, out / "video.wmt1")
    save_tensor(latent.astype(np.float32), out / "latent.wmt1")
    (out / "video.apng").write_bytes(video_to_apng_bytes(video))
    save_frame_png(video[-1], out / "last_frame.png")
    with open(out / "run.json", "w") as f:
        json.dump(
            {"w": args.w, "steps": args.steps, "seed": args.seed, "ckpt": str(args.ckpt)}, f
        )
    print(f"sampled video written to {out}")
    return 0


def cmd_bench(args) -> int:
    if args.bench_command != "run":
        raise ValueError(f"unknown bench subcommand {args.bench_command!r}")
    manifest_path = Path(args.manifest)
    cases = load_manifest(manifest_path)
    model = load_checkpoint(args.ckpt)
    run = RunConfig(
        seed=args.seed, guidance=args.w, steps=args.steps, checkpoint_id=checkpoint_id(args.ckpt)
    )
    report = run_benchmark(cases, model, manifest_path.parent, run)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(report_to_json(report))
    if args.csv:
        (out / "report.csv").write_text(report_to_csv(report))
    agg = report["aggregate"]
    print(f"evaluated {len(cases)} cases: epe={agg['epe']} psnr={agg['psnr']} ssim={agg['ssim']}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import build_app, ServiceConfig

    config = ServiceConfig.from_toml(args.config) if args.config else ServiceConfig()
    if args.ckpt:
        config.checkpoint = str(args.ckpt)
    if args.port:
        config.port = args.port
    app = build_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="motionweave")
    sub = parser.add_subparsers(dest="command", required=True)

    synth = sub.add_parser("synth", help="generate trajectory files")
    synth_sub = synth.add_subparsers(dest="mode", required=True)
    for mode in ("camera", "sphere", "rotate3d", "grid", "transfer"):
        p = synth_sub.add_parser(mode)
        p.add_argument("--frames", type=int, default=9)
        p.add_argument("--height", type=int, default=32)
        p.add_argument("--width", type=int, default=32)
        p.add_argument("--out", required=True)
        p.add_argument("--seeds", help="trajectory JSON whose frame-0 points seed the generator")
        p.add_argument("--grid", type=int, default=8, help="grid side when --seeds is absent")
        if mode in ("camera", "rotate3d"):
            p.add_argument("--depth", required=True, help="depth map (PNG or WMT1)")
            p.add_argument("--depth-scale", type=float, default=1.0)
            p.add_argument("--fx", type=float, default=32.0)
            p.add_argument("--fy", type=float, default=32.0)
            p.add_argument("--cx", type=float, default=15.5)
            p.add_argument("--cy", type=float, default=15.5)
        if mode == "camera":
            p.add_argument("--path", required=True, help="camera path JSON")
        if mode == "sphere":
            p.add_argument("--center-row", type=float, required=True)
            p.add_argument("--center-col", type=float, required=True)
            p.add_argument("--radius", type=float, required=True)
            p.add_argument("--axis", type=_parse_vec3, default=(0.0, 1.0, 0.0))
            p.add_argument("--angle", type=float, required=True)
        if mode == "rotate3d":
            p.add_argument("--mask", required=True)
            p.add_argument("--axis", type=_parse_vec3, default=(0.0, 1.0, 0.0))
            p.add_argument("--angle", type=float, required=True)
            p.add_argument("--pivot", type=_parse_vec3, default=None)
        if mode == "transfer":
            p.add_argument("--tracks", required=True, help="source trajectory JSON")
    synth.set_defaults(func=cmd_synth)

    tr = sub.add_parser("train", help="train the toy generator")
    tr.add_argument("--config", required=True, help="TOML config")
    tr.set_defaults(func=cmd_train)

    sa = sub.add_parser("sample", help="sample a video from a checkpoint")
    sa.add_argument("--ckpt", required=True)
    sa.add_argument("--tracks", help="trajectory JSON (omit for plain image-to-video)")
    sa.add_argument("--frame", required=True, help="first frame (PNG or WMT1)")
    sa.add_argument("--w", type=float, default=DEFAULT_GUIDANCE)
    sa.add_argument("--steps", type=int, default=DEFAULT_STEPS)
    sa.add_argument("--seed", type=int, default=0)
    sa.add_argument("--out", required=True)
    sa.set_defaults(func=cmd_sample)

    be = sub.add_parser("bench", help="benchmark runner")
    be_sub = be.add_subparsers(dest="bench_command", required=True)
    run = be_sub.add_parser("run")
    run.add_argument("--manifest", required=True)
    run.add_argument("--ckpt", required=True)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--w", type=float, default=DEFAULT_GUIDANCE)
    run.add_argument("--steps", type=int, default=DEFAULT_STEPS)
    run.add_argument("--out", required=True)
    run.add_argument("--csv", action="store_true", help="also write a CSV summary")
    be.set_defaults(func=cmd_bench)

    sv = sub.add_parser("serve", help="run the HTTP service")
    sv.add_argument("--config", help="TOML service config")
    sv.add_argument("--port", type=int)
    sv.add_argument("--ckpt")
    sv.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
