"""Wall-clock scaling benchmarks: spectral mixers vs a dense token mixer.

Protocol: build all inputs and the mixer's static data (kernel planes or
the dense matrix) outside the timed region, run a few warmup applications,
then time repetitions of the application alone with perf_counter_ns and
keep the median. A checksum of the last output is recorded so the work
cannot be optimized away and runs can be compared.

Token count N maps to a sqrt(N) x sqrt(N) grid for the spectral mixers
(one FFT per channel, O(N log N)) and to an N x N matrix applied to an
N x channels token block for the dense mixer (O(N^2) per channel block).
"""
from __future__ import annotations

import math
import statistics
import time
from dataclasses import dataclass

import numpy as np

from .kernel import WaveParams, frequency_grid, heat_kernel, kernel_coefficients
from .operator import apply_kernel

__all__ = [
    "BenchRecord",
    "bench_wpo",
    "bench_heat",
    "bench_dense",
    "run_scaling",
    "fit_loglog_slope",
]


@dataclass(frozen=True)
class BenchRecord:
    """One timed configuration: median nanos per application."""

    mixer: str
    tokens: int
    channels: int
    nanos: int
    checksum: float


def _grid_side(tokens: int) -> int:
    side = math.isqrt(tokens)
    if side * side != tokens:
        raise ValueError(f"token count must be a perfect square; got {tokens}")
    return side


def _time_median(fn, warmups: int, repetitions: int) -> int:
    if warmups < 0 or repetitions < 1:
        raise ValueError("need warmups >= 0 and repetitions >= 1")
    for _ in range(warmups):
        fn()
    samples = []
    for _ in range(repetitions):
        start = time.perf_counter_ns()
        fn()
        samples.append(time.perf_counter_ns() - start)
    return int(statistics.median(samples))


def bench_wpo(
    tokens: int,
    channels: int,
    params: WaveParams,
    warmups: int = 3,
    repetitions: int = 10,
    seed: int = 0,
) -> BenchRecord:
    """Time one wave-propagation application over a tokens-sized grid."""
    side = _grid_side(tokens)
    rng = np.random.Generator(np.random.PCG64(seed))
    u = rng.uniform(-1.0, 1.0, size=(channels, side, side))
    v = rng.uniform(-1.0, 1.0, size=(channels, side, side))
    kern = kernel_coefficients(params, frequency_grid(side, side, "periodic"))
    out = {}

    def fn():
        out["u"], out["v"] = apply_kernel(kern, u, v)

    nanos = _time_median(fn, warmups, repetitions)
    checksum = float(out["u"].sum() + out["v"].sum())
    return BenchRecord("wpo", tokens, channels, nanos, checksum)


def bench_heat(
    tokens: int,
    channels: int,
    conductivity: float = 1.0,
    duration: float = 1.0,
    warmups: int = 3,
    repetitions: int = 10,
    seed: int = 0,
) -> BenchRecord:
    """Time one heat-multiplier application over a tokens-sized grid."""
    side = _grid_side(tokens)
    rng = np.random.Generator(np.random.PCG64(seed))
    u = rng.uniform(-1.0, 1.0, size=(channels, side, side))
    mult = heat_kernel(conductivity, duration, frequency_grid(side, side, "periodic"))
    out = {}

    def fn():
        spec = np.fft.fft2(u, axes=(-2, -1))
        out["u"] = np.fft.ifft2(mult[None] * spec, axes=(-2, -1)).real

    nanos = _time_median(fn, warmups, repetitions)
    checksum = float(out["u"].sum())
    return BenchRecord("heat", tokens, channels, nanos, checksum)


def bench_dense(
    tokens: int,
    channels: int,
    warmups: int = 3,
    repetitions: int = 10,
    seed: int = 0,
) -> BenchRecord:
    """Time one dense N x N token-mixing matmul (the quadratic baseline)."""
    rng = np.random.Generator(np.random.PCG64(seed))
    tok = rng.uniform(-1.0, 1.0, size=(tokens, channels))
    mixer = rng.uniform(-1.0, 1.0, size=(tokens, tokens)) / math.sqrt(tokens)
    out = {}

    def fn():
        out["y"] = mixer @ tok

    nanos = _time_median(fn, warmups, repetitions)
    checksum = float(out["y"].sum())
    return BenchRecord("dense", tokens, channels, nanos, checksum)


def run_scaling(
    token_counts: list[int],
    channels: int,
    params: WaveParams,
    conductivity: float = 1.0,
    warmups: int = 3,
    repetitions: int = 10,
    seed: int = 0,
) -> list[BenchRecord]:
    """All three mixers across the token counts. The dense matrix for the
    largest sizes is multi-gigabyte, so records are produced size by size
    and the matrix is freed in between."""
    records = []
    for tokens in token_counts:
        records.append(bench_wpo(tokens, channels, params, warmups, repetitions, seed))
        records.append(
            bench_heat(tokens, channels, conductivity, params.time, warmups, repetitions, seed)
        )
        records.append(bench_dense(tokens, channels, warmups, repetitions, seed))
    return records


def fit_loglog_slope(sizes, times) -> float:
    """Least-squares slope of log(time) against log(size)."""
    xs = np.log(np.asarray(sizes, dtype=np.float64))
    ys = np.log(np.asarray(times, dtype=np.float64))
    if xs.size < 2:
        raise ValueError("need at least two points to fit a slope")
    return float(np.polyfit(xs, ys, 1)[0])
