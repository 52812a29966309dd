"""Synthetic grating classification dataset.

Four classes on an H x W single-channel grid: {low, high} spatial frequency
x {horizontal, vertical} orientation. Class k image:

    0: sin(2*pi*low_cycles  * x / W + phase)   varies along x
    1: sin(2*pi*low_cycles  * y / H + phase)   varies along y
    2: sin(2*pi*high_cycles * x / W + phase)
    3: sin(2*pi*high_cycles * y / H + phase)

plus uniform noise. Phases are drawn per sample, classes are exactly
balanced, and everything is deterministic given the seed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["SyntheticSpec", "make_synthetic"]


@dataclass(frozen=True)
class SyntheticSpec:
    height: int = 32
    width: int = 32
    low_cycles: int = 2
    high_cycles: int = 12
    noise_amplitude: float = 0.2
    train_count: int = 256
    test_count: int = 128
    seed: int = 0

    def __post_init__(self) -> None:
        if self.height < 1 or self.width < 1:
            raise ValueError("grid dimensions must be positive")
        if not 0 < self.low_cycles < self.high_cycles:
            raise ValueError(
                f"need 0 < low_cycles < high_cycles; got "
                f"{self.low_cycles}, {self.high_cycles}"
            )
        if 2 * self.high_cycles > min(self.height, self.width):
            raise ValueError(
                f"high_cycles {self.high_cycles} exceeds Nyquist for "
                f"{self.height}x{self.width}"
            )
        if self.noise_amplitude < 0:
            raise ValueError("noise_amplitude must be >= 0")
        for name in ("train_count", "test_count"):
            count = getattr(self, name)
            if count < 4 or count % 4 != 0:
                raise ValueError(
                    f"{name} must be a positive multiple of 4 (exact class "
                    f"balance); got {count}"
                )


def _render(
    spec: SyntheticSpec, labels: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    n = labels.size
    images = np.empty((n, 1, spec.height, spec.width))
    y = np.arange(spec.height)[:, None]
    x = np.arange(spec.width)[None, :]
    for i, label in enumerate(labels):
        cycles = spec.low_cycles if label < 2 else spec.high_cycles
        phase = rng.uniform(0.0, 2.0 * np.pi)
        if label % 2 == 0:
            grating = np.sin(2.0 * np.pi * cycles * x / spec.width + phase)
            grating = np.broadcast_to(grating, (spec.height, spec.width))
        else:
            grating = np.sin(2.0 * np.pi * cycles * y / spec.height + phase)
            grating = np.broadcast_to(grating, (spec.height, spec.width))
        noise = rng.uniform(
            -spec.noise_amplitude, spec.noise_amplitude, size=(spec.height, spec.width)
        )
        images[i, 0] = grating + noise
    return images


def make_synthetic(
    spec: SyntheticSpec,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Build (train_images, train_labels, test_images, test_labels).

    Images have shape (N, 1, H, W) float64, labels (N,) int64. Labels cycle
    0,1,2,3 so every prefix that is a multiple of 4 is balanced too.
    """
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    train_labels = np.arange(spec.train_count, dtype=np.int64) % 4
    test_labels = np.arange(spec.test_count, dtype=np.int64) % 4
    train_images = _render(spec, train_labels, rng)
    test_images = _render(spec, test_labels, rng)
    return train_images, train_labels, test_images, test_labels
