"""Motion and fidelity metrics: end-point error, PSNR, SSIM, and the
first-frame stability score used for data filtering."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .trajectory import TrajectorySet

LUMA = np.array([0.299, 0.587, 0.114])
SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03


def epe(gt: TrajectorySet, pred: TrajectorySet) -> float:
    """Mean Euclidean distance in pixels over all (track, frame) pairs where
    the ground-truth flag is visible.

    Symmetric whenever both sets carry the same visibility flags.  Track ids
    must match exactly.
    """
    if gt.ids() != pred.ids():
        raise ValueError(f"track id mismatch: {gt.ids()} vs {pred.ids()}")
    total = 0.0
    count = 0
    for tid in gt.ids():
        g, p = gt.tracks[tid], pred.tracks[tid]
        if g.frames != p.frames:
            raise ValueError(f"track {tid}: frame count mismatch")
        mask = g.visible
        d = np.linalg.norm(g.positions[mask] - p.positions[mask], axis=1)
        total += float(d.sum())
        count += int(mask.sum())
    return total / count if count else 0.0


def psnr(a: np.ndarray, b: np.ndarray) -> float:
    """Frame-averaged 10 log10(1/MSE) for [0,1] videos; +inf when identical."""
    a, b = np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    values = []
    for f in range(a.shape[0]):
        mse = float(np.mean((a[f] - b[f]) ** 2))
        values.append(math.inf if mse == 0.0 else 10.0 * math.log10(1.0 / mse))
    return float(np.mean(values)) if not any(math.isinf(v) for v in values) else math.inf


def _gaussian_window(size: int = SSIM_WINDOW, sigma: float = SSIM_SIGMA) -> np.ndarray:
    half = size // 2
    g = np.exp(-np.arange(-half, half + 1) ** 2 / (2.0 * sigma**2))
    g /= g.sum()
    return np.outer(g, g)


def luma(frame: np.ndarray) -> np.ndarray:
    return np.asarray(frame, dtype=np.float64) @ LUMA


def _local_stats(img: np.ndarray, window: np.ndarray) -> np.ndarray:
    # valid-mode weighted local sums via sliding windows; desk-scale frames
    win = window.shape[0]
    views = np.lib.stride_tricks.sliding_window_view(img, (win, win))
    return np.einsum("rcij,ij->rc", views, window)


def ssim_frame(a: np.ndarray, b: np.ndarray) -> float:
    """SSIM on one luma frame: 11x11 sigma-1.5 Gaussian window, valid mode,
    K1=0.01, K2=0.03, data range 1.0."""
    window = _gaussian_window()
    c1, c2 = (SSIM_K1 * 1.0) ** 2, (SSIM_K2 * 1.0) ** 2
    mu_a = _local_stats(a, window)
    mu_b = _local_stats(b, window)
    var_a = _local_stats(a * a, window) - mu_a * mu_a
    var_b = _local_stats(b * b, window) - mu_b * mu_b
    cov = _local_stats(a * b, window) - mu_a * mu_b
    num = (2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2)
    den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2)
    return float(np.mean(num / den))


def ssim(a: np.ndarray, b: np.ndarray) -> float:
    """Frame-averaged SSIM between two videos, computed on the luma channel."""
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    return float(np.mean([ssim_frame(luma(a[f]), luma(b[f])) for f in range(a.shape[0])]))


def block_mean_luma_features(frame: np.ndarray, block: int = 8) -> np.ndarray:
    """Default stability features: flattened block-mean luma (crops to a
    multiple of the block size)."""
    y = luma(frame)
    H, W = (y.shape[0] // block) * block, (y.shape[1] // block) * block
    y = y[:H, :W]
    return y.reshape(H // block, block, W // block, block).mean(axis=(1, 3)).ravel()


def stability_score(
    video: np.ndarray, features: Callable[[np.ndarray], np.ndarray] = block_mean_luma_features
) -> float:
    """Cosine similarity between the first frame's features and the mean
    features of all later frames; NaN sentinel when a side has zero norm."""
    video = np.asarray(video)
    if video.shape[0] < 2:
        raise ValueError("stability needs at least two frames")
    f0 = np.asarray(features(video[0]), dtype=np.float64)
    rest = np.mean([features(video[f]) for f in range(1, video.shape[0])], axis=0)
    n0, n1 = np.linalg.norm(f0), np.linalg.norm(rest)
    if n0 == 0.0 or n1 == 0.0:
        return float("nan")
    return float(np.dot(f0, rest) / (n0 * n1))


def passes_stability(video: np.ndarray, threshold: float, features=block_mean_luma_features) -> bool:
    """Keep videos whose stability score is at or above the threshold."""
    score = stability_score(video, features)
    return not math.isnan(score) and score >= threshold
