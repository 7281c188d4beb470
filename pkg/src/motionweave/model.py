"""Tiny per-cell velocity-field model with hand-written gradients.

Each latent cell sees its own noisy value, its condition value, sinusoidal
time features, and its normalized (frame, row, col) coordinates.  Between the
two width-64 tanh layers, a 3x3x3 spatiotemporal box average of the first
hidden field is concatenated alongside it, giving the second layer one cell
of context in every direction without washing out the cell's own features.
Everything runs in float64 so the analytic gradient can be checked against
central finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import uniform_filter

from .geometry import LatentGeometry

TIME_FEATURES = 8
HIDDEN = 64


class NonFiniteActivation(RuntimeError):
    pass


@dataclass
class FlowSample:
    """One training point: noisy state, its time, and the regression target."""

    x_t: np.ndarray
    t: float
    target_field: np.ndarray

    def __post_init__(self):
        if self.x_t.shape != self.target_field.shape:
            raise ValueError("x_t and target_field shapes differ")
        if not 0.0 <= self.t <= 1.0:
            raise ValueError(f"t={self.t} outside [0, 1]")


@dataclass
class ConditionBundle:
    """Conditional and unconditional condition tensors (same shape)."""

    condition: np.ndarray
    uncond_condition: np.ndarray

    def __post_init__(self):
        if self.condition.shape != self.uncond_condition.shape:
            raise ValueError("condition shapes differ")


def make_flow_sample(x_data: np.ndarray, t: float, eps: np.ndarray) -> FlowSample:
    """Linear noise-to-data path: x_t = (1-t) x + t eps, target v = eps - x."""
    x_data = np.asarray(x_data, dtype=np.float64)
    eps = np.asarray(eps, dtype=np.float64)
    return FlowSample(x_t=(1.0 - t) * x_data + t * eps, t=float(t), target_field=eps - x_data)


@dataclass
class ToyDenoiser:
    geometry: LatentGeometry
    theta: np.ndarray
    hidden: int = HIDDEN
    time_features: int = TIME_FEATURES

    @property
    def feature_dim(self) -> int:
        return 2 * self.geometry.channels + self.time_features + 3

    def _layout(self):
        F, Hd, C = self.feature_dim, self.hidden, self.geometry.channels
        sizes = [F * Hd, Hd, 2 * Hd * Hd, Hd, Hd * C, C]
        shapes = [(F, Hd), (Hd,), (2 * Hd, Hd), (Hd,), (Hd, C), (C,)]
        offsets = np.cumsum([0] + sizes)
        return offsets, shapes

    def params(self):
        """Views (W1, b1, W2, b2, W3, b3) into the flat parameter vector."""
        offsets, shapes = self._layout()
        return tuple(
            self.theta[offsets[i] : offsets[i + 1]].reshape(shapes[i]) for i in range(6)
        )

    @property
    def n_params(self) -> int:
        offsets, _ = self._layout()
        return int(offsets[-1])

    @classmethod
    def init(cls, geom: LatentGeometry, rng: np.random.Generator,
             hidden: int = HIDDEN, time_features: int = TIME_FEATURES) -> "ToyDenoiser":
        model = cls(geometry=geom, theta=np.empty(0), hidden=hidden, time_features=time_features)
        offsets, shapes = model._layout()
        theta = np.empty(offsets[-1], dtype=np.float64)
        for i, shape in enumerate(shapes):
            block = theta[offsets[i] : offsets[i + 1]]
            if len(shape) == 2:
                block[:] = (rng.standard_normal(shape) / np.sqrt(shape[0])).ravel()
            else:
                block[:] = 0.0
        model.theta = theta
        return model


def time_embedding(t: np.ndarray, n_features: int = TIME_FEATURES) -> np.ndarray:
    """Sinusoids at octave frequencies: [sin(pi 2^k t), cos(pi 2^k t)]."""
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    k = 2.0 ** np.arange(n_features // 2)
    arg = np.pi * t[:, None] * k[None, :]
    return np.concatenate([np.sin(arg), np.cos(arg)], axis=1)


def _coord_grid(geom: LatentGeometry) -> np.ndarray:
    N, H, W = geom.latent_frames, geom.latent_height, geom.latent_width
    n = np.arange(N) / max(N - 1, 1)
    r = np.arange(H) / max(H - 1, 1)
    c = np.arange(W) / max(W - 1, 1)
    grid = np.stack(np.meshgrid(n, r, c, indexing="ij"), axis=-1)
    return grid  # (N, H, W, 3)


def _features(model: ToyDenoiser, x_t: np.ndarray, t: np.ndarray, cond: np.ndarray) -> np.ndarray:
    """Per-cell input features for a batch: (B, N, H, W, feature_dim)."""
    B = x_t.shape[0]
    geom = model.geometry
    coords = np.broadcast_to(_coord_grid(geom), (B, *geom.latent_shape[:3], 3))
    temb = time_embedding(t, model.time_features)  # (B, K)
    temb = np.broadcast_to(
        temb[:, None, None, None, :], (B, *geom.latent_shape[:3], model.time_features)
    )
    return np.concatenate(
        [x_t.astype(np.float64), cond.astype(np.float64), temb, coords], axis=-1
    )


def _box_average(x: np.ndarray) -> np.ndarray:
    # 3x3x3 mean over (frame, row, col) with zero padding; self-adjoint, which
    # the backward pass relies on
    return uniform_filter(x, size=(1, 3, 3, 3, 1), mode="constant", cval=0.0)


def _forward_cached(model: ToyDenoiser, x_t, t, cond):
    W1, b1, W2, b2, W3, b3 = model.params()
    feat = _features(model, x_t, t, cond)
    h1 = np.tanh(feat @ W1 + b1)
    g = np.concatenate([h1, _box_average(h1)], axis=-1)
    h2 = np.tanh(g @ W2 + b2)
    out = h2 @ W3 + b3
    if not np.isfinite(out).all():
        raise NonFiniteActivation(
            f"non-finite model output (theta range [{model.theta.min()}, {model.theta.max()}])"
        )
    return out, (feat, h1, g, h2)


def forward(model: ToyDenoiser, x_t: np.ndarray, t, cond: np.ndarray) -> np.ndarray:
    """Velocity prediction; accepts a single tensor or a leading batch axis."""
    single = x_t.ndim == 4
    xb = x_t[None] if single else x_t
    cb = cond[None] if single else cond
    tb = np.atleast_1d(np.asarray(t, dtype=np.float64))
    out, _ = _forward_cached(model, xb, tb, cb)
    return out[0] if single else out


def fm_loss_batch(model: ToyDenoiser, x_t, t, cond, target):
    """Mean-squared velocity regression over a batch; returns (loss, grad)."""
    W1, b1, W2, b2, W3, b3 = model.params()
    out, (feat, h1, g, h2) = _forward_cached(model, x_t, t, cond)
    diff = out - target
    loss = float(np.mean(diff**2))

    dout = (2.0 / diff.size) * diff
    h2f = h2.reshape(-1, model.hidden)
    doutf = dout.reshape(-1, model.geometry.channels)
    dW3 = h2f.T @ doutf
    db3 = doutf.sum(axis=0)
    dh2 = dout @ W3.T
    dz2 = dh2 * (1.0 - h2**2)
    gf = g.reshape(-1, 2 * model.hidden)
    dz2f = dz2.reshape(-1, model.hidden)
    dW2 = gf.T @ dz2f
    db2 = dz2f.sum(axis=0)
    dg = dz2 @ W2.T
    # concat adjoint: direct path plus the (self-adjoint) box average path
    dh1 = dg[..., : model.hidden] + _box_average(dg[..., model.hidden :])
    dz1 = dh1 * (1.0 - h1**2)
    featf = feat.reshape(-1, model.feature_dim)
    dz1f = dz1.reshape(-1, model.hidden)
    dW1 = featf.T @ dz1f
    db1 = dz1f.sum(axis=0)

    grad = np.concatenate(
        [dW1.ravel(), db1.ravel(), dW2.ravel(), db2.ravel(), dW3.ravel(), db3.ravel()]
    )
    return loss, grad


def fm_loss(model: ToyDenoiser, sample: FlowSample, cond: ConditionBundle):
    """Single-sample loss and parameter gradient against the target field."""
    return fm_loss_batch(
        model,
        sample.x_t[None],
        np.array([sample.t]),
        cond.condition[None],
        sample.target_field[None],
    )
