"""
Training the toy backbone end to end
====================================

Trains the patch-embedding backbone twice from the same seed: once with
the damped-wave token mixer and once with the heat-kernel baseline. The
dataset is four classes of noisy sinusoidal gratings, two low frequency
and two high frequency. Every gradient in the network is hand-derived,
so this doubles as a smoke test of the whole backward path.

At this desk scale both variants saturate the task: the mixer physics is
trainable, so the heat model can anneal its own smoothing away, and the
depthwise convolutions carry plenty of signal on 32x32 gratings. What the
run shows is the full training loop (deterministic per seed), the curves,
and the per-class breakdown. The frequency-selectivity story lives in the
operator itself; demo 02 measures it directly.
"""

import numpy as np

from wavekit.data import SyntheticSpec
from wavekit.model import ModelConfig
from wavekit.train import sgd_train

CLASSES = ("low_x", "low_y", "high_x", "high_y")
spec = SyntheticSpec()  # 256 train / 128 test, exact class balance

for heat in (False, True):
    label = "heat" if heat else "wave"
    cfg = ModelConfig(heat_baseline=heat)
    weights, report = sgd_train(
        spec, cfg, epochs=20, lr=0.005, momentum=0.9, batch_size=32, seed=0
    )
    print(f"\n{label} mixer ({report.wall_clock_s:.1f}s)")
    print("  epoch  train loss  test acc")
    for e, (loss, acc) in enumerate(zip(report.train_loss, report.test_accuracy), 1):
        print(f"  {e:>5}  {loss:>10.4f}  {acc:>8.3f}")
    per_class = report.per_class_accuracy[-1]
    cells = "  ".join(f"{n} {a:.2f}" for n, a in zip(CLASSES, per_class))
    print(f"  final per-class: {cells}")

print("\nsame seed, same budget; only the spectral multiplier differs")
