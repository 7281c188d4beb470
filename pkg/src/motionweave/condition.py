"""Motion guidance by editing the condition tensor.

The main mechanism copies each track's first-latent-frame feature vector into
that track's cell on every later, visible latent frame.  Two alternative
write schemes used as ablation baselines live here as well: copy-pasting the
source pixel in pixel space before encoding, and stamping per-track random
embeddings.

When several tracks land on one (frame, row, col) cell, exactly one writer is
chosen uniformly at random.  Writes are collected in ascending (track, frame)
order and collisions resolved cell by cell in sorted order, so a fixed seed
gives a fixed output.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .codec import MockCodec, check_latent, encode
from .geometry import LatentGeometry
from .trajectory import QuantizedTrack, TrajectorySet


def _resolve_overlaps(
    writes: list[tuple[tuple[int, int, int], int]], rng: np.random.Generator
) -> dict[tuple[int, int, int], int]:
    """Pick one writer per cell; rng is consumed only for genuine collisions."""
    by_cell: dict[tuple[int, int, int], list[int]] = {}
    for cell, writer in writes:
        by_cell.setdefault(cell, []).append(writer)
    chosen: dict[tuple[int, int, int], int] = {}
    for cell in sorted(by_cell):
        writers = by_cell[cell]
        if len(writers) == 1:
            chosen[cell] = writers[0]
        else:
            chosen[cell] = writers[int(rng.integers(len(writers)))]
    return chosen


def replicate_features(
    z: np.ndarray,
    tracks: list[QuantizedTrack] | dict[int, QuantizedTrack],
    rng: np.random.Generator,
    geom: LatentGeometry | None = None,
) -> np.ndarray:
    """Copy each track's frame-0 feature along its cells on later visible frames.

    Frame 0 is never modified; every cell not written is bit-identical to the
    input.  Returns a new tensor.
    """
    z = np.asarray(z)
    if geom is not None:
        check_latent(z, geom)
    track_list = _as_track_list(tracks)
    _check_cells(track_list, z.shape)
    out = z.copy()
    writes: list[tuple[tuple[int, int, int], int]] = []
    for ti, tr in enumerate(track_list):
        for n in range(1, tr.cells.shape[0]):
            if tr.visible[n]:
                writes.append(((n, int(tr.cells[n, 0]), int(tr.cells[n, 1])), ti))
    for (n, r, c), ti in _resolve_overlaps(writes, rng).items():
        src = track_list[ti].cells[0]
        out[n, r, c, :] = z[0, int(src[0]), int(src[1]), :]
    return out


def pixel_replication_baseline(
    codec: MockCodec,
    first_frame: np.ndarray,
    tracks: TrajectorySet,
    rng: np.random.Generator,
) -> np.ndarray:
    """Copy-paste each track's source pixel along its path, then encode.

    The source is the first frame's pixel at the track's rounded frame-0
    position; it is written at the rounded position of every later visible
    frame of the zero-padded video.  Collisions use the same one-writer rule
    as latent replication, in pixel space.
    """
    geom = codec.geometry
    first_frame = np.asarray(first_frame)
    if first_frame.shape != (geom.height, geom.width, 3):
        raise ValueError(
            f"first frame shape {first_frame.shape}, expected {(geom.height, geom.width, 3)}"
        )
    video = np.zeros(geom.video_shape, dtype=np.float32)
    video[0] = first_frame

    ids = tracks.ids()
    writes: list[tuple[tuple[int, int, int], int]] = []
    sources = []
    for ti, tid in enumerate(ids):
        tr = tracks.tracks[tid]
        px = _round_half_up(tr.positions)
        px[:, 0] = np.clip(px[:, 0], 0, geom.height - 1)
        px[:, 1] = np.clip(px[:, 1], 0, geom.width - 1)
        sources.append(first_frame[px[0, 0], px[0, 1], :])
        for n in range(1, tr.frames):
            if tr.visible[n]:
                writes.append(((n, int(px[n, 0]), int(px[n, 1])), ti))
    for (n, r, c), ti in _resolve_overlaps(writes, rng).items():
        video[n, r, c, :] = sources[ti]
    return encode(codec, video)


@dataclass
class EmbeddingTable:
    """Fixed per-track-id random vectors, scaled to the condition tensor's spread.

    Each id's raw vector comes from a generator seeded with (table seed, id),
    so the same id maps to the same vector no matter which ids the table was
    built with.  Lookups of unknown ids raise.
    """

    seed: int
    scale: np.ndarray
    vectors: dict[int, np.ndarray] = field(default_factory=dict)

    @classmethod
    def build(cls, seed: int, ids: list[int], reference: np.ndarray) -> "EmbeddingTable":
        """Draw one unit-Gaussian vector per id, scaled by the reference tensor's
        per-channel standard deviation."""
        reference = np.asarray(reference, dtype=np.float64)
        scale = reference.reshape(-1, reference.shape[-1]).std(axis=0)
        table = cls(seed=seed, scale=scale)
        for tid in ids:
            table.vectors[int(tid)] = table._draw(int(tid))
        return table

    def _draw(self, tid: int) -> np.ndarray:
        raw = np.random.default_rng([self.seed, tid]).standard_normal(self.scale.shape[0])
        return (raw * self.scale).astype(np.float32)

    def vector(self, tid: int) -> np.ndarray:
        if tid not in self.vectors:
            raise KeyError(f"track id {tid} missing from embedding table")
        return self.vectors[tid]


def random_embedding_baseline(
    z: np.ndarray,
    tracks: dict[int, QuantizedTrack],
    table: EmbeddingTable,
    rng: np.random.Generator,
) -> np.ndarray:
    """Stamp each track's table embedding along its cells.

    Write pattern matches replicate_features on frames >= 1, and additionally
    stamps frame 0 at the start cell: the embedding has to be present where
    the track begins to be identifiable.
    """
    z = np.asarray(z)
    ids = sorted(tracks)
    track_list = [tracks[tid] for tid in ids]
    _check_cells(track_list, z.shape)
    vectors = [table.vector(tid) for tid in ids]
    out = z.copy()
    writes: list[tuple[tuple[int, int, int], int]] = []
    for ti, tr in enumerate(track_list):
        writes.append(((0, int(tr.cells[0, 0]), int(tr.cells[0, 1])), ti))
        for n in range(1, tr.cells.shape[0]):
            if tr.visible[n]:
                writes.append(((n, int(tr.cells[n, 0]), int(tr.cells[n, 1])), ti))
    for (n, r, c), ti in _resolve_overlaps(writes, rng).items():
        out[n, r, c, :] = vectors[ti]
    return out


def _as_track_list(tracks) -> list[QuantizedTrack]:
    if isinstance(tracks, dict):
        return [tracks[tid] for tid in sorted(tracks)]
    return list(tracks)


def _check_cells(track_list: list[QuantizedTrack], latent_shape: tuple) -> None:
    N, H, W = latent_shape[0], latent_shape[1], latent_shape[2]
    for tr in track_list:
        if tr.cells.shape[0] != N:
            raise ValueError(f"track has {tr.cells.shape[0]} latent frames, tensor has {N}")
        if (
            tr.cells[:, 0].min() < 0
            or tr.cells[:, 0].max() >= H
            or tr.cells[:, 1].min() < 0
            or tr.cells[:, 1].max() >= W
        ):
            raise RuntimeError("quantized cell outside the latent grid; quantize() must clamp")


def _round_half_up(positions: np.ndarray) -> np.ndarray:
    return np.floor(np.asarray(positions, dtype=np.float64) + 0.5).astype(np.int64)
