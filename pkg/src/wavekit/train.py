"""SGD-with-momentum trainer for the toy classifier.

Deterministic given the seed: dataset, init, shuffle order and gradient
accumulation are all fixed streams, so two runs produce bitwise-identical
weight trajectories.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field

import numpy as np

from .data import SyntheticSpec, make_synthetic
from .model import ModelConfig, ModelWeights, backward_batch, forward_batch, init_weights, named_arrays

__all__ = ["TrainReport", "sgd_train", "evaluate"]


@dataclass
class TrainReport:
    """Per-epoch training trace plus wall-clock cost."""

    epochs: int = 0
    train_loss: list = dc_field(default_factory=list)
    test_accuracy: list = dc_field(default_factory=list)
    per_class_accuracy: list = dc_field(default_factory=list)
    wall_clock_s: float = 0.0

    @property
    def final_accuracy(self) -> float:
        return self.test_accuracy[-1] if self.test_accuracy else 0.0


def evaluate(
    weights: ModelWeights,
    cfg: ModelConfig,
    images: np.ndarray,
    labels: np.ndarray,
    batch_size: int = 64,
) -> tuple[float, list[float]]:
    """(overall accuracy, per-class accuracy list)."""
    hits = np.zeros(cfg.num_classes)
    counts = np.zeros(cfg.num_classes)
    for start in range(0, len(labels), batch_size):
        batch = images[start : start + batch_size]
        got = forward_batch(batch, weights, cfg).argmax(axis=1)
        want = labels[start : start + batch_size]
        for cls in range(cfg.num_classes):
            mask = want == cls
            counts[cls] += mask.sum()
            hits[cls] += (got[mask] == cls).sum()
    per_class = [float(h / c) if c else 0.0 for h, c in zip(hits, counts)]
    return float(hits.sum() / counts.sum()), per_class


def sgd_train(
    data_spec: SyntheticSpec,
    cfg: ModelConfig,
    epochs: int = 20,
    lr: float = 0.05,
    momentum: float = 0.9,
    batch_size: int = 32,
    seed: int = 0,
    freeze_mixer_physics: bool = False,
    mixer_init: tuple[float, float, float] = (1.0, 0.1, 1.0),
) -> tuple[ModelWeights, TrainReport]:
    """Train from scratch; returns the final weights and the epoch trace.

    freeze_mixer_physics pins every block's velocity/damping raws at their
    initial values (time stays trainable); used by the parameter sweep.
    A non-finite epoch loss aborts immediately.
    """
    if epochs < 1:
        raise ValueError(f"epochs must be >= 1; got {epochs}")
    if batch_size < 1:
        raise ValueError(f"batch_size must be >= 1; got {batch_size}")
    start = time.perf_counter()
    train_x, train_y, test_x, test_y = make_synthetic(data_spec)
    weights = init_weights(cfg, seed, mixer_init=mixer_init)
    shuffle_rng = np.random.Generator(
        np.random.PCG64(np.random.SeedSequence([seed, 1]))
    )
    buffers = {name: np.zeros_like(arr) for name, arr in named_arrays(weights)}
    report = TrainReport(epochs=epochs)

    for _ in range(epochs):
        order = shuffle_rng.permutation(len(train_y))
        losses = []
        for bstart in range(0, len(order), batch_size):
            idx = order[bstart : bstart + batch_size]
            loss, grads = backward_batch(train_x[idx], train_y[idx], weights, cfg)
            losses.append(loss)
            for name, arr in named_arrays(weights):
                g = grads[name]
                if freeze_mixer_physics and name.endswith("mixer_raw"):
                    g = g.copy()
                    g[0] = 0.0
                    g[1] = 0.0
                buf = buffers[name]
                buf *= momentum
                buf -= lr * g
                arr += buf
        epoch_loss = float(np.mean(losses))
        if not np.isfinite(epoch_loss):
            raise FloatingPointError(
                f"training loss became non-finite at epoch {len(report.train_loss)}"
            )
        report.train_loss.append(epoch_loss)
        acc, per_class = evaluate(weights, cfg, test_x, test_y)
        report.test_accuracy.append(acc)
        report.per_class_accuracy.append(per_class)

    report.wall_clock_s = time.perf_counter() - start
    return weights, report
