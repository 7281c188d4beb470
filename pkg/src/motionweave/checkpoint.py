"""Model checkpoints: a directory of WMT1 parameter blocks plus a JSON header."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .geometry import LatentGeometry
from .model import ToyDenoiser
from .wmt import load_tensor, save_tensor

HEADER_NAME = "header.json"
BLOCK_NAMES = ("w1", "b1", "w2", "b2", "w3", "b3")


def save_checkpoint(
    model: ToyDenoiser, path: str | Path, config: dict | None = None, seed: int | None = None
) -> Path:
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    blocks = model.params()
    files = {}
    for name, block in zip(BLOCK_NAMES, blocks):
        fname = f"{name}.wmt1"
        save_tensor(np.asarray(block, dtype=np.float32), path / fname)
        files[name] = fname
    header = {
        "format": "motionweave-checkpoint-v1",
        "geometry": model.geometry.to_dict(),
        "hidden": model.hidden,
        "time_features": model.time_features,
        "blocks": files,
        "config": config or {},
        "seed": seed,
    }
    with open(path / HEADER_NAME, "w") as f:
        json.dump(header, f, indent=2, sort_keys=True)
    return path


def load_checkpoint(path: str | Path) -> ToyDenoiser:
    path = Path(path)
    with open(path / HEADER_NAME) as f:
        header = json.load(f)
    if header.get("format") != "motionweave-checkpoint-v1":
        raise ValueError(f"unknown checkpoint format {header.get('format')!r}")
    geom = LatentGeometry.from_dict(header["geometry"])
    model = ToyDenoiser(
        geometry=geom,
        theta=np.empty(0),
        hidden=int(header["hidden"]),
        time_features=int(header["time_features"]),
    )
    blocks = [
        load_tensor(path / header["blocks"][name]).astype(np.float64) for name in BLOCK_NAMES
    ]
    model.theta = np.concatenate([b.ravel() for b in blocks])
    expected = model.n_params
    if model.theta.size != expected:
        raise ValueError(f"checkpoint has {model.theta.size} parameters, expected {expected}")
    return model


def checkpoint_id(path: str | Path) -> str:
    """Stable identifier for a checkpoint: content hash of its header and blocks."""
    import hashlib

    path = Path(path)
    h = hashlib.sha256()
    for name in sorted(p.name for p in path.iterdir() if p.is_file()):
        h.update(name.encode())
        h.update((path / name).read_bytes())
    return h.hexdigest()[:16]
