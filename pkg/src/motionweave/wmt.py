"""WMT1 tensor file format.

Layout: magic bytes ``WMT1``, one unsigned byte rank, ``rank`` little-endian
unsigned 32-bit dims, then the payload as little-endian 32-bit floats in
row-major order (last dimension fastest).
"""

from __future__ import annotations

import io
import struct
from pathlib import Path

import numpy as np

MAGIC = b"WMT1"
MAX_RANK = 8


def write_tensor_bytes(arr: np.ndarray) -> bytes:
    arr = np.ascontiguousarray(arr, dtype="<f4")
    if arr.ndim < 1 or arr.ndim > MAX_RANK:
        raise ValueError(f"rank must be 1..{MAX_RANK}, got {arr.ndim}")
    buf = io.BytesIO()
    buf.write(MAGIC)
    buf.write(struct.pack("B", arr.ndim))
    buf.write(struct.pack(f"<{arr.ndim}I", *arr.shape))
    buf.write(arr.tobytes())
    return buf.getvalue()


def read_tensor_bytes(data: bytes) -> np.ndarray:
    if len(data) < 5 or data[:4] != MAGIC:
        raise ValueError("not a WMT1 tensor (bad magic)")
    rank = data[4]
    if rank < 1 or rank > MAX_RANK:
        raise ValueError(f"bad rank {rank}")
    header_end = 5 + 4 * rank
    if len(data) < header_end:
        raise ValueError("truncated WMT1 header")
    dims = struct.unpack(f"<{rank}I", data[5:header_end])
    count = int(np.prod(dims))
    expected = header_end + 4 * count
    if len(data) != expected:
        raise ValueError(f"payload size mismatch: got {len(data)} bytes, expected {expected}")
    flat = np.frombuffer(data, dtype="<f4", offset=header_end, count=count)
    return flat.reshape(dims).copy()


def save_tensor(arr: np.ndarray, path: str | Path) -> None:
    Path(path).write_bytes(write_tensor_bytes(arr))


def load_tensor(path: str | Path) -> np.ndarray:
    return read_tensor_bytes(Path(path).read_bytes())
