"""On-disk formats: WFT1 tensor files and 8-bit binary PGM images.

WFT1 layout (little-endian throughout):

    bytes 0..3   magic "WFT1"
    u32          dtype code (1 = real64)
    u32          rank (always 3)
    u32 x 3      dims C, H, W
    payload      C*H*W float64 values, C-order, channel outermost

Malformed files fail with distinct diagnostics: bad magic, truncated
header/payload, dtype mismatch, unsupported rank, trailing data.
"""
from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .field import FeatureField

__all__ = [
    "TensorFormatError",
    "save_tensor",
    "load_tensor",
    "read_pgm",
    "write_pgm",
]

MAGIC = b"WFT1"
DTYPE_REAL64 = 1
_HEADER = struct.Struct("<5I")  # dtype, rank, C, H, W


class TensorFormatError(ValueError):
    """A WFT1 file failed structural validation."""


def save_tensor(field: FeatureField, path: str | Path) -> None:
    """Write a field to a WFT1 file."""
    c, h, w = field.shape
    payload = np.ascontiguousarray(field.data, dtype="<f8").tobytes()
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(_HEADER.pack(DTYPE_REAL64, 3, c, h, w))
        fh.write(payload)


def load_tensor(path: str | Path) -> FeatureField:
    """Read a WFT1 file back into a field, validating every header field."""
    raw = Path(path).read_bytes()
    if len(raw) < len(MAGIC) + _HEADER.size:
        raise TensorFormatError(
            f"{path}: truncated header ({len(raw)} bytes, need "
            f"{len(MAGIC) + _HEADER.size})"
        )
    if raw[: len(MAGIC)] != MAGIC:
        raise TensorFormatError(f"{path}: bad magic {raw[:4]!r}, expected {MAGIC!r}")
    dtype_code, rank, c, h, w = _HEADER.unpack_from(raw, len(MAGIC))
    if dtype_code != DTYPE_REAL64:
        raise TensorFormatError(
            f"{path}: dtype mismatch: code {dtype_code}, expected "
            f"{DTYPE_REAL64} (real64)"
        )
    if rank != 3:
        raise TensorFormatError(f"{path}: unsupported rank {rank}, expected 3")
    body = raw[len(MAGIC) + _HEADER.size :]
    if min(c, h, w) < 1:
        raise TensorFormatError(f"{path}: zero dimension in shape ({c}, {h}, {w})")
    expected = c * h * w * 8
    if len(body) < expected:
        raise TensorFormatError(
            f"{path}: truncated payload ({len(body)} bytes, need {expected})"
        )
    if len(body) > expected:
        raise TensorFormatError(
            f"{path}: trailing data ({len(body) - expected} bytes past payload)"
        )
    values = np.frombuffer(body, dtype="<f8").reshape(c, h, w)
    return FeatureField(values.astype(np.float64))


def read_pgm(path: str | Path) -> np.ndarray:
    """Read a binary (P5) PGM with maxval <= 255 into a (H, W) uint8 array."""
    raw = Path(path).read_bytes()

    # Header tokens: magic, width, height, maxval; '#' comments run to EOL.
    tokens: list[bytes] = []
    pos = 0
    while len(tokens) < 4:
        if pos >= len(raw):
            raise ValueError(f"{path}: truncated PGM header")
        ch = raw[pos : pos + 1]
        if ch.isspace():
            pos += 1
        elif ch == b"#":
            while pos < len(raw) and raw[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
        else:
            start = pos
            while pos < len(raw) and not raw[pos : pos + 1].isspace():
                pos += 1
            tokens.append(raw[start:pos])
    if tokens[0] != b"P5":
        raise ValueError(
            f"{path}: unsupported PGM magic {tokens[0]!r}; only binary P5 is "
            "supported"
        )
    width, height, maxval = (int(t) for t in tokens[1:4])
    if maxval <= 0 or maxval > 255:
        raise ValueError(f"{path}: unsupported maxval {maxval}; need 1..255")
    pos += 1  # single whitespace after maxval
    pixels = raw[pos : pos + width * height]
    if len(pixels) < width * height:
        raise ValueError(
            f"{path}: truncated PGM pixel data ({len(pixels)} bytes, need "
            f"{width * height})"
        )
    return np.frombuffer(pixels, dtype=np.uint8).reshape(height, width).copy()


def write_pgm(path: str | Path, image: np.ndarray) -> None:
    """Write a (H, W) array to binary PGM; values are clipped to [0, 255]."""
    if image.ndim != 2:
        raise ValueError(f"PGM image must be 2D; got shape {image.shape}")
    clipped = np.clip(np.round(image), 0, 255).astype(np.uint8)
    h, w = clipped.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(clipped.tobytes())
