"""motionweave: desk-scale trajectory-guided image-to-video generation.

Point trajectories are mapped into a compressed latent grid, the first
latent frame's features are replicated along each track to build a
motion-aware condition tensor, and a tiny flow-matching model is trained and
sampled under that condition.  Companion tooling synthesizes trajectories
(camera moves, sphere spins, 3D rotations, motion transfer) and scores motion
fidelity (EPE) and visual quality (PSNR, SSIM).
"""

from .geometry import LatentGeometry
from .trajectory import (
    LatentTrajectory,
    PixelTrajectory,
    QuantizedTrack,
    TrajectorySet,
    aggregate_visibility,
    load_trajectories,
    map_to_latent,
    quantize,
    quantized_tracks,
    sample_training_tracks,
    save_trajectories,
    validate_set,
)
from .codec import MockCodec, decode, encode, encode_condition
from .condition import (
    EmbeddingTable,
    pixel_replication_baseline,
    random_embedding_baseline,
    replicate_features,
)
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
from .blobs import BlobSample, grid_truth_tracks, make_blob_dataset, render_blob_video, track_blobs_oracle
from .model import ConditionBundle, FlowSample, ToyDenoiser, fm_loss, forward, make_flow_sample
from .training import TrainConfig, TrainResult, train
from .sampling import cfg_field, sample, sample_batch
from .checkpoint import load_checkpoint, save_checkpoint
from .metrics import epe, psnr, ssim, stability_score
from .bench import BenchmarkCase, RunConfig, load_manifest, run_benchmark, save_manifest
from .wmt import load_tensor, save_tensor

__version__ = "0.1.0"

__all__ = [
    "LatentGeometry",
    "PixelTrajectory",
    "TrajectorySet",
    "LatentTrajectory",
    "QuantizedTrack",
    "map_to_latent",
    "aggregate_visibility",
    "quantize",
    "quantized_tracks",
    "sample_training_tracks",
    "validate_set",
    "load_trajectories",
    "save_trajectories",
    "MockCodec",
    "encode",
    "decode",
    "encode_condition",
    "replicate_features",
    "pixel_replication_baseline",
    "random_embedding_baseline",
    "EmbeddingTable",
    "Intrinsics",
    "CameraPath",
    "SpherePrimitive",
    "grid_tracks",
    "camera_tracks",
    "sphere_tracks",
    "rotate3d_tracks",
    "motion_transfer",
    "BlobSample",
    "make_blob_dataset",
    "render_blob_video",
    "track_blobs_oracle",
    "grid_truth_tracks",
    "ToyDenoiser",
    "FlowSample",
    "ConditionBundle",
    "make_flow_sample",
    "forward",
    "fm_loss",
    "TrainConfig",
    "TrainResult",
    "train",
    "cfg_field",
    "sample",
    "sample_batch",
    "save_checkpoint",
    "load_checkpoint",
    "epe",
    "psnr",
    "ssim",
    "stability_score",
    "BenchmarkCase",
    "RunConfig",
    "load_manifest",
    "save_manifest",
    "run_benchmark",
    "load_tensor",
    "save_tensor",
]
