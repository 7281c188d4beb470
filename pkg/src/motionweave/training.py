"""Training loop: trajectory subsampling, condition building, and AdamW with
linear warmup over the flow-matching objective."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .blobs import BlobSample
from .codec import MockCodec, encode, encode_condition
from .condition import EmbeddingTable, pixel_replication_baseline, random_embedding_baseline, replicate_features
from .model import ToyDenoiser, fm_loss_batch
from .trajectory import TrajectorySet, quantized_tracks, sample_training_tracks

logger = logging.getLogger(__name__)


class TrainingDiverged(RuntimeError):
    def __init__(self, step: int):
        super().__init__(f"loss became non-finite at step {step}")
        self.step = step


@dataclass
class TrainConfig:
    learning_rate: float = 3e-3
    weight_decay: float = 1e-3
    warmup_steps: int = 50
    total_steps: int = 600
    batch_size: int = 8
    time_steps: int = 1000
    n_max_tracks: int = 200
    seed: int = 0
    guidance: str = "latent"  # latent | pixel | random_embedding | disabled

    def __post_init__(self):
        if min(self.warmup_steps, self.total_steps, self.batch_size, self.time_steps) < 1:
            raise ValueError("counts must be positive")
        if self.warmup_steps > self.total_steps:
            raise ValueError("warmup_steps must not exceed total_steps")
        if self.guidance not in ("latent", "pixel", "random_embedding", "disabled"):
            raise ValueError(f"unknown guidance strategy {self.guidance!r}")

    def to_dict(self) -> dict:
        return {
            "learning_rate": self.learning_rate,
            "weight_decay": self.weight_decay,
            "warmup_steps": self.warmup_steps,
            "total_steps": self.total_steps,
            "batch_size": self.batch_size,
            "time_steps": self.time_steps,
            "n_max_tracks": self.n_max_tracks,
            "seed": self.seed,
            "guidance": self.guidance,
        }


@dataclass
class TrainResult:
    model: ToyDenoiser
    losses: list[float]
    empty_condition_draws: int
    sample_draws: int
    config: TrainConfig


def effective_lr(config: TrainConfig, step: int) -> float:
    """Linear warmup: lr * step / warmup for the first warmup steps (1-based)."""
    if step <= config.warmup_steps:
        return config.learning_rate * step / config.warmup_steps
    return config.learning_rate


@dataclass
class _PreparedSample:
    x_data: np.ndarray
    cond_base: np.ndarray
    tracks: TrajectorySet
    first_frame: np.ndarray


def _prepare(dataset: list[BlobSample], codec: MockCodec) -> list[_PreparedSample]:
    prepared = []
    for s in dataset:
        prepared.append(
            _PreparedSample(
                x_data=encode(codec, s.video).astype(np.float64),
                cond_base=encode_condition(codec, s.video[0]).astype(np.float64),
                tracks=s.tracks,
                first_frame=s.video[0],
            )
        )
    return prepared


def build_condition(
    prep: _PreparedSample,
    subset: TrajectorySet,
    codec: MockCodec,
    rng: np.random.Generator,
    guidance: str = "latent",
    table: EmbeddingTable | None = None,
) -> np.ndarray:
    """Apply the configured guidance write to the base condition tensor."""
    if len(subset) == 0 or guidance == "disabled":
        return prep.cond_base
    if guidance == "latent":
        return replicate_features(prep.cond_base, quantized_tracks(subset), rng).astype(np.float64)
    if guidance == "pixel":
        return pixel_replication_baseline(codec, prep.first_frame, subset, rng).astype(np.float64)
    if guidance == "random_embedding":
        assert table is not None
        return random_embedding_baseline(
            prep.cond_base, quantized_tracks(subset), table, rng
        ).astype(np.float64)
    raise ValueError(f"unknown guidance strategy {guidance!r}")


def make_embedding_table(dataset: list[BlobSample], codec: MockCodec, seed: int) -> EmbeddingTable:
    """Table covering every track id in the dataset, scaled to the first
    sample's condition tensor."""
    reference = encode_condition(codec, dataset[0].video[0])
    ids = sorted({tid for s in dataset for tid in s.tracks.ids()})
    return EmbeddingTable.build(seed, ids, reference)


def train(config: TrainConfig, dataset: list[BlobSample], codec: MockCodec) -> TrainResult:
    """Run the full loop and return the trained model plus its loss curve.

    Per step: draw a batch, draw each sample's trajectory subset, build the
    condition tensors, draw (t, eps) per sample on the discrete time grid,
    and apply one decoupled-weight-decay adaptive-moment update.
    """
    if not dataset:
        raise ValueError("dataset is empty")
    geom = codec.geometry
    rng = np.random.default_rng(config.seed)
    prepared = _prepare(dataset, codec)
    table = (
        make_embedding_table(dataset, codec, config.seed)
        if config.guidance == "random_embedding"
        else None
    )
    model = ToyDenoiser.init(geom, rng)

    m = np.zeros_like(model.theta)
    v = np.zeros_like(model.theta)
    beta1, beta2, eps_adam = 0.9, 0.999, 1e-8
    losses: list[float] = []
    empty_draws = 0
    draws = 0

    for step in range(1, config.total_steps + 1):
        idx = rng.integers(0, len(prepared), size=config.batch_size)
        x_t = np.empty((config.batch_size, *geom.latent_shape))
        cond = np.empty_like(x_t)
        target = np.empty_like(x_t)
        ts = np.empty(config.batch_size)
        for b, i in enumerate(idx):
            prep = prepared[int(i)]
            subset = sample_training_tracks(prep.tracks, rng, n_max=config.n_max_tracks)
            draws += 1
            if len(subset) == 0:
                empty_draws += 1
            cond[b] = build_condition(prep, subset, codec, rng, config.guidance, table)
            t = (int(rng.integers(config.time_steps)) + 0.5) / config.time_steps
            eps = rng.standard_normal(geom.latent_shape)
            x_t[b] = (1.0 - t) * prep.x_data + t * eps
            target[b] = eps - prep.x_data
            ts[b] = t
        loss, grad = fm_loss_batch(model, x_t, ts, cond, target)
        if not np.isfinite(loss):
            raise TrainingDiverged(step)
        losses.append(loss)

        lr = effective_lr(config, step)
        m = beta1 * m + (1 - beta1) * grad
        v = beta2 * v + (1 - beta2) * grad**2
        m_hat = m / (1 - beta1**step)
        v_hat = v / (1 - beta2**step)
        model.theta -= lr * (m_hat / (np.sqrt(v_hat) + eps_adam) + config.weight_decay * model.theta)

        if step % 100 == 0:
            logger.debug("step %d loss %.5f lr %.2e", step, loss, lr)

    return TrainResult(
        model=model,
        losses=losses,
        empty_condition_draws=empty_draws,
        sample_draws=draws,
        config=config,
    )
