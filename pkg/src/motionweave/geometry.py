"""Latent grid geometry shared by every tensor and trajectory in the engine."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class LatentGeometry:
    """Compression geometry tying pixel space to the latent grid.

    A video of ``video_frames = 1 + T`` frames at ``height x width`` pixels
    compresses to ``1 + T / f_t`` latent frames on a
    ``(height / f_s) x (width / f_s)`` grid with ``channels`` features per cell.
    """

    f_t: int
    f_s: int
    channels: int
    video_frames: int
    height: int
    width: int

    def __post_init__(self):
        if self.f_t < 1 or self.f_s < 1 or self.channels < 1:
            raise ValueError("compression factors and channel count must be >= 1")
        if self.video_frames < 1:
            raise ValueError("video_frames must be >= 1")
        if self.motion_frames % self.f_t != 0:
            raise ValueError(
                f"frame count 1+T={self.video_frames} needs T divisible by f_t={self.f_t}"
            )
        if self.height % self.f_s != 0 or self.width % self.f_s != 0:
            raise ValueError(
                f"height {self.height} and width {self.width} must be divisible by f_s={self.f_s}"
            )

    @property
    def motion_frames(self) -> int:
        """T, the number of frames after the first."""
        return self.video_frames - 1

    @property
    def latent_frames(self) -> int:
        return 1 + self.motion_frames // self.f_t

    @property
    def latent_height(self) -> int:
        return self.height // self.f_s

    @property
    def latent_width(self) -> int:
        return self.width // self.f_s

    @property
    def video_shape(self) -> tuple[int, int, int, int]:
        return (self.video_frames, self.height, self.width, 3)

    @property
    def latent_shape(self) -> tuple[int, int, int, int]:
        return (self.latent_frames, self.latent_height, self.latent_width, self.channels)

    def to_dict(self) -> dict:
        return {
            "f_t": self.f_t,
            "f_s": self.f_s,
            "channels": self.channels,
            "video_frames": self.video_frames,
            "height": self.height,
            "width": self.width,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LatentGeometry":
        return cls(
            f_t=int(d["f_t"]),
            f_s=int(d["f_s"]),
            channels=int(d["channels"]),
            video_frames=int(d["video_frames"]),
            height=int(d["height"]),
            width=int(d["width"]),
        )
