"""Dense spatial tensors and deterministic field generators.

A field is a rank-3 tensor laid out channel-outermost, shape (C, H, W),
C-contiguous, so flat index = c*H*W + y*W + x. Real fields are float64,
spectral fields complex128. Every element must be finite on construction;
the first offending index is named in the error.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "FeatureField",
    "SpectralField",
    "random_field",
    "band_limit",
    "modal_band_field",
]


def _first_bad_index(data: np.ndarray) -> tuple[int, int, int]:
    bad = ~np.isfinite(data)
    if data.dtype.kind == "c":
        bad = ~(np.isfinite(data.real) & np.isfinite(data.imag))
    c, y, x = np.argwhere(bad)[0]
    return int(c), int(y), int(x)


def _validate(data: np.ndarray, kind: str) -> None:
    if data.ndim != 3:
        raise ValueError(f"field must be rank 3 (C, H, W); got shape {data.shape}")
    if 0 in data.shape:
        raise ValueError(f"field dimensions must be positive; got shape {data.shape}")
    if not (np.isfinite(data.real).all() and np.isfinite(data.imag).all()):
        c, y, x = _first_bad_index(data)
        raise ValueError(
            f"non-finite {kind} value at (c={c}, y={y}, x={x}): {data[c, y, x]}"
        )


@dataclass(frozen=True, eq=False)
class FeatureField:
    """Real-valued spatial tensor, shape (C, H, W), float64.

    The wrapped array is treated as immutable by every operation in this
    package; construction validates rank, dtype and finiteness.
    """

    data: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.data)
        if arr.dtype.kind == "c":
            raise TypeError("FeatureField requires real data; got complex")
        arr = np.ascontiguousarray(arr, dtype=np.float64)
        _validate(arr, "field")
        object.__setattr__(self, "data", arr)

    @property
    def channels(self) -> int:
        return self.data.shape[0]

    @property
    def height(self) -> int:
        return self.data.shape[1]

    @property
    def width(self) -> int:
        return self.data.shape[2]

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.data.shape


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Complex-valued frequency tensor, shape (C, H, W), complex128.

    Bin (ky, kx) holds the coefficient of the corresponding basis function
    of whichever transform produced it (FFT or sine basis).
    """

    data: np.ndarray

    def __post_init__(self) -> None:
        arr = np.ascontiguousarray(np.asarray(self.data), dtype=np.complex128)
        _validate(arr, "spectrum")
        object.__setattr__(self, "data", arr)

    @property
    def channels(self) -> int:
        return self.data.shape[0]

    @property
    def height(self) -> int:
        return self.data.shape[1]

    @property
    def width(self) -> int:
        return self.data.shape[2]

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.data.shape


def random_field(seed: int, height: int, width: int, channels: int) -> FeatureField:
    """Deterministic uniform(-1, 1) field from a PCG64 stream keyed by seed."""
    rng = np.random.Generator(np.random.PCG64(seed))
    return FeatureField(rng.uniform(-1.0, 1.0, size=(channels, height, width)))


def band_limit(field: FeatureField, keep_fraction: float = 2.0 / 3.0) -> FeatureField:
    """Zero every FFT bin whose per-axis frequency index exceeds a fraction
    of Nyquist.

    keep_fraction=2/3 zeroes the upper spectral third. The mask is symmetric
    under index negation, so the result stays real.
    """
    if not 0.0 < keep_fraction <= 1.0:
        raise ValueError(f"keep_fraction must be in (0, 1]; got {keep_fraction}")
    h, w = field.height, field.width
    ky = np.abs(np.fft.fftfreq(h) * h)  # integer frequency index per row
    kx = np.abs(np.fft.fftfreq(w) * w)
    mask = (ky[:, None] <= keep_fraction * (h // 2)) & (
        kx[None, :] <= keep_fraction * (w // 2)
    )
    spec = np.fft.fft2(field.data, axes=(-2, -1)) * mask
    out = np.fft.ifft2(spec, axes=(-2, -1))
    return FeatureField(out.real.copy())


def modal_band_field(
    seed: int,
    height: int,
    width: int,
    channels: int,
    max_mode: int = 3,
    decay: float = 2.5,
) -> FeatureField:
    """Smooth interior (Dirichlet) field built from low sine modes.

    Mode (n, m), 1-indexed, gets amplitude uniform(0.5, 1) * random sign,
    scaled by exp(-decay * ((n-1)^2 + (m-1)^2)); everything above max_mode
    is absent. Useful where the field must be well resolved by a coarse
    interior grid.
    """
    if max_mode < 1 or max_mode > min(height, width):
        raise ValueError(f"max_mode must be in [1, {min(height, width)}]")
    rng = np.random.Generator(np.random.PCG64(seed))
    y = np.arange(1, height + 1)[:, None]
    x = np.arange(1, width + 1)[None, :]
    out = np.zeros((channels, height, width))
    for c in range(channels):
        for n in range(1, max_mode + 1):
            for m in range(1, max_mode + 1):
                amp = rng.uniform(0.5, 1.0) * rng.choice((-1.0, 1.0))
                amp *= np.exp(-decay * ((n - 1) ** 2 + (m - 1) ** 2))
                out[c] += amp * np.sin(n * np.pi * y / (height + 1)) * np.sin(
                    m * np.pi * x / (width + 1)
                )
    return FeatureField(out)
