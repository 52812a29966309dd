"""Release gate: ten numbered checks, one printed verdict line each.

Run as part of the suite or alone:

    pytest tests/test_acceptance.py -v

Each check prints ``[PASS]``/``[FAIL]`` with the measured numbers outside
pytest's capture so the verdicts are visible in any run, then asserts.
Tolerances are fixed here, not configurable; loosening one to make a red
check green defeats the point of the gate.

The two heavyweight checks (9: scaling benchmark, 10: toy training) also
enforce their wall-clock budgets. The dense-vs-spectral crossover inside
check 9 is hardware dependent and only warns.
"""
import math
import time

import numpy as np

from wavekit import (
    FdConfig,
    WaveParams,
    WpoState,
    band_limit,
    convergence_study,
    fd_wave_solve,
    modal_band_field,
    modal_solution,
    random_field,
    rel_l2,
    spectral_retention,
    wave_energy,
    wpo_adjoint,
    wpo_forward,
    wpo_param_grads,
)
from wavekit.bench import fit_loglog_slope, run_scaling
from wavekit.data import SyntheticSpec
from wavekit.model import ModelConfig, backward_batch, forward_batch, init_weights, named_arrays
from wavekit.operator import WpoLayerParams
from wavekit.train import sgd_train


def _verdict(capsys, num: int, name: str, ok: bool, detail: str) -> bool:
    tag = "PASS" if ok else "FAIL"
    with capsys.disabled():
        print(f"\n[{tag}] {num:02d} {name}: {detail}", flush=True)
    return ok


def _state(seed: int, height: int = 32, width: int = 32, channels: int = 2) -> WpoState:
    return WpoState(
        u=random_field(2 * seed, height, width, channels),
        v=random_field(2 * seed + 1, height, width, channels),
    )


def test_01_closed_form_matches_fd_solver(capsys):
    start = time.perf_counter()
    u0 = band_limit(random_field(0, 32, 32, 2), 0.0625)
    v0 = band_limit(random_field(1, 32, 32, 2), 0.0625)
    params = WaveParams(velocity=1.0, damping=0.1, time=0.5)
    out = wpo_forward(WpoState(u=u0, v=v0), params)
    fd_u, fd_v = fd_wave_solve(u0, v0, params, FdConfig(dt=2e-3, steps=250))
    err_u = rel_l2(fd_u, out.u)
    err_v = rel_l2(fd_v, out.v)
    rows = convergence_study(u0, v0, params, [0.05, 0.025, 0.0125, 0.00625])
    slope = fit_loglog_slope([dt for dt, _ in rows], [err for _, err in rows])
    elapsed = time.perf_counter() - start
    ok = err_u < 1e-3 and err_v < 1e-3 and 1.7 <= slope <= 2.3 and elapsed < 30.0
    assert _verdict(
        capsys,
        1,
        "closed form vs finite differences",
        ok,
        f"rel_l2 u {err_u:.3e} v {err_v:.3e} (< 1e-3), "
        f"convergence slope {slope:.4f} (in [1.7, 2.3]), {elapsed:.1f}s (< 30s)",
    )


def test_02_modal_solution_matches_dirichlet_fd(capsys):
    start = time.perf_counter()
    u0 = modal_band_field(0, 16, 16, 1, max_mode=3, decay=2.5)
    v0 = modal_band_field(1, 16, 16, 1, max_mode=3, decay=2.5)
    params = WaveParams(velocity=1.0, damping=0.1, time=0.5)
    exact = modal_solution(u0, v0, params)
    fd_u, _ = fd_wave_solve(u0, v0, params, FdConfig(dt=2e-3, steps=250, boundary="dirichlet"))
    err = rel_l2(fd_u, exact)
    elapsed = time.perf_counter() - start
    ok = err < 1e-3 and elapsed < 10.0
    assert _verdict(
        capsys, 2,
        "sine-basis solution vs Dirichlet solver",
        ok,
        f"rel_l2 {err:.3e} (< 1e-3), {elapsed:.1f}s (< 10s)",
    )


def test_03_zero_time_is_identity(capsys):
    params = WaveParams(velocity=1.0, damping=0.1, time=0.0)
    worst = 0.0
    for seed in range(100):
        state = _state(seed, channels=1)
        out = wpo_forward(state, params)
        worst = max(
            worst,
            float(np.abs(out.u.data - state.u.data).max()),
            float(np.abs(out.v.data - state.v.data).max()),
        )
    ok = worst < 1e-10
    assert _verdict(
        capsys, 3, "zero-time propagation is the identity", ok,
        f"max |out - in| {worst:.3e} over 100 fields (< 1e-10)",
    )


def test_04_semigroup_composition_in_every_regime(capsys):
    # damping pi/8 makes bin (0, 1) of a 32-wide grid exactly critical
    regimes = [
        ("underdamped", WaveParams(1.0, 0.1, 1.0)),
        ("mixed/critical", WaveParams(1.0, math.pi / 8.0, 1.0)),
        ("overdamped", WaveParams(1.0, 10.0, 1.0)),
    ]
    worst, parts = 0.0, []
    for label, params in regimes:
        state = _state(5)
        first = wpo_forward(state, WaveParams(params.velocity, params.damping, 0.3))
        composed = wpo_forward(first, WaveParams(params.velocity, params.damping, 0.7))
        direct = wpo_forward(state, params)
        err = max(rel_l2(composed.u, direct.u), rel_l2(composed.v, direct.v))
        worst = max(worst, err)
        parts.append(f"{label} {err:.2e}")
    ok = worst < 1e-9
    assert _verdict(
        capsys, 4, "semigroup composition carrying (u, v)", ok,
        ", ".join(parts) + " (each < 1e-9)",
    )


def test_05_energy_conserved_or_dissipated(capsys):
    state = _state(6)
    times = [0.1 * k for k in range(1, 21)]

    conservative = WaveParams(1.0, 0.0, 1.0)
    e0 = wave_energy(state, conservative)
    drift = max(
        abs(wave_energy(wpo_forward(state, WaveParams(1.0, 0.0, t)), conservative) - e0)
        for t in times
    ) / e0

    damped_ok = True
    for damping in (0.1, 1.0):
        params = WaveParams(1.0, damping, 1.0)
        energies = [wave_energy(state, params)]
        energies += [
            wave_energy(wpo_forward(state, WaveParams(1.0, damping, t)), params)
            for t in times
        ]
        steps = np.diff(energies)
        damped_ok &= bool((steps <= 1e-12 * energies[0]).all())

    ok = drift < 1e-9 and damped_ok
    assert _verdict(
        capsys, 5, "energy budget", ok,
        f"undamped rel drift {drift:.3e} (< 1e-9), "
        f"damped non-increasing over t in [0.1, 2.0]: {damped_ok}",
    )


def test_06_adjoint_dot_product_identity(capsys):
    rng = np.random.Generator(np.random.PCG64(7))
    worst = 0.0
    for _ in range(100):
        params = WaveParams(
            velocity=float(rng.uniform(0.1, 10.0)),
            damping=float(rng.uniform(0.0, 12.0)),
            time=float(rng.uniform(0.0, 3.0)),
        )
        x = _state(int(rng.integers(1000)), 16, 16, 1)
        y = _state(int(rng.integers(1000, 2000)), 16, 16, 1)
        ax = wpo_forward(x, params)
        aty = wpo_adjoint(y, params)
        lhs = float((ax.u.data * y.u.data).sum() + (ax.v.data * y.v.data).sum())
        rhs = float((x.u.data * aty.u.data).sum() + (x.v.data * aty.v.data).sum())
        worst = max(worst, abs(lhs - rhs) / max(abs(lhs), 1e-30))
    ok = worst < 1e-10
    assert _verdict(
        capsys, 6, "adjoint dot-product identity", ok,
        f"max rel error {worst:.3e} over 100 trials (< 1e-10)",
    )


def _operator_grad_error(raws: tuple[float, float, float], seed: int) -> float:
    layer = WpoLayerParams(*raws)
    state = _state(seed, 16, 16, 1)
    grad_out = _state(seed + 500, 16, 16, 1)
    analytic = wpo_param_grads(state, grad_out, layer)
    worst = 0.0
    for slot in range(3):
        h = 1e-5 * max(1.0, abs(raws[slot]))
        bumped = list(raws)

        def loss_at(value: float) -> float:
            bumped[slot] = value
            out = wpo_forward(state, WpoLayerParams(*bumped).wave_params())
            return float(
                (out.u.data * grad_out.u.data).sum()
                + (out.v.data * grad_out.v.data).sum()
            )

        numeric = (loss_at(raws[slot] + h) - loss_at(raws[slot] - h)) / (2.0 * h)
        scale = max(abs(numeric), 1e-12)
        worst = max(worst, abs(analytic[slot] - numeric) / scale)
    return worst


def _model_loss(images, labels, weights, cfg) -> float:
    logits = forward_batch(images, weights, cfg)
    shifted = logits - logits.max(axis=1, keepdims=True)
    log_probs = shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    return float(-log_probs[np.arange(len(labels)), labels].mean())


def test_07_gradients_match_finite_differences(capsys):
    rng = np.random.Generator(np.random.PCG64(11))
    op_worst = 0.0
    for seed in range(20):
        raws = (
            float(rng.uniform(-1.0, 2.0)),
            float(rng.uniform(-3.0, 1.0)),
            float(rng.uniform(-1.0, 1.0)),
        )
        op_worst = max(op_worst, _operator_grad_error(raws, seed))

    cfg = ModelConfig(input_height=16, input_width=16)
    weights = init_weights(cfg, seed=0)
    images = rng.uniform(-1.0, 1.0, size=(4, 1, 16, 16))
    labels = np.array([0, 1, 2, 3])
    _, grads = backward_batch(images, labels, weights, cfg)
    arrays = dict(named_arrays(weights))
    probes = [
        ("patch.weight", (0, 3)),
        ("stage0.block0.mixer_raw", (1,)),
        ("head.weight", (2, 17)),
    ]
    model_worst = 0.0
    for name, idx in probes:
        arr, h = arrays[name], 1e-4
        keep = arr[idx]
        arr[idx] = keep + h
        up = _model_loss(images, labels, weights, cfg)
        arr[idx] = keep - h
        down = _model_loss(images, labels, weights, cfg)
        arr[idx] = keep
        numeric = (up - down) / (2.0 * h)
        model_worst = max(
            model_worst, abs(grads[name][idx] - numeric) / max(abs(numeric), 1e-12)
        )

    ok = op_worst < 1e-4 and model_worst < 1e-3
    assert _verdict(
        capsys, 7, "analytic gradients vs central differences", ok,
        f"operator max rel {op_worst:.3e} over 20 configs (< 1e-4), "
        f"full model max rel {model_worst:.3e} over 3 probes (< 1e-3)",
    )


def test_08_high_frequency_retention_vs_diffusion(capsys):
    report = spectral_retention(
        WaveParams(velocity=1.0, damping=0.1, time=1.0),
        conductivity=1.0,
        omega0_sq=math.pi**2,
    )
    heat_ok = abs(report.heat_gain - 5.17e-5) / 5.17e-5 < 5e-3
    env_ok = abs(report.wave_envelope - 0.951) / 0.951 < 5e-3
    ok = heat_ok and env_ok and report.ratio > 1e3
    assert _verdict(
        capsys, 8, "high-frequency retention vs diffusion", ok,
        f"heat gain {report.heat_gain:.4e} (~5.17e-5), "
        f"wave envelope {report.wave_envelope:.4f} (~0.951), "
        f"envelope/heat ratio {report.ratio:.3e} (> 1e3)",
    )


def test_09_runtime_scaling(capsys):
    start = time.perf_counter()
    records = run_scaling(
        [256, 1024, 4096, 16384],
        channels=16,
        params=WaveParams(1.0, 0.1, 1.0),
        warmups=3,
        repetitions=10,
        seed=0,
    )
    elapsed = time.perf_counter() - start
    by_mixer: dict[str, list] = {}
    for rec in records:
        by_mixer.setdefault(rec.mixer, []).append(rec)
    slopes = {
        mixer: fit_loglog_slope([r.tokens for r in recs], [r.nanos for r in recs])
        for mixer, recs in by_mixer.items()
    }
    at = {(r.mixer, r.tokens): r.nanos for r in records}
    crossover = at[("dense", 4096)] / at[("wpo", 4096)]
    if crossover <= 1.0:
        with capsys.disabled():
            print(
                f"\n[WARN] 09 runtime scaling: dense/wpo at 4096 tokens is "
                f"{crossover:.2f} <= 1 on this hardware",
                flush=True,
            )
    ok = (
        0.9 <= slopes["wpo"] <= 1.4
        and 1.8 <= slopes["dense"] <= 2.2
        and elapsed < 300.0
    )
    assert _verdict(
        capsys, 9, "runtime scaling", ok,
        f"wpo slope {slopes['wpo']:.3f} (in [0.9, 1.4]), "
        f"dense slope {slopes['dense']:.3f} (in [1.8, 2.2]), "
        f"dense/wpo at 4096 tokens {crossover:.2f}x (reported), "
        f"{elapsed:.1f}s (< 300s)",
    )


def test_10_toy_training_accuracy_and_frequency_contrast(capsys):
    spec = SyntheticSpec()
    budget = dict(epochs=20, lr=0.005, momentum=0.9, batch_size=32)
    wave_high, heat_high = [], []
    wave_acc_seed0 = 0.0
    wall_seed0 = 0.0
    for seed in range(5):
        _, wave = sgd_train(spec, ModelConfig(), seed=seed, **budget)
        _, heat = sgd_train(spec, ModelConfig(heat_baseline=True), seed=seed, **budget)
        wave_high.append(float(np.mean(wave.per_class_accuracy[-1][2:4])))
        heat_high.append(float(np.mean(heat.per_class_accuracy[-1][2:4])))
        if seed == 0:
            wave_acc_seed0 = wave.final_accuracy
            wall_seed0 = wave.wall_clock_s
    wave_mean = float(np.mean(wave_high))
    heat_mean = float(np.mean(heat_high))
    ok = wave_acc_seed0 >= 0.90 and wall_seed0 < 300.0 and heat_mean <= wave_mean + 1e-12
    assert _verdict(
        capsys, 10, "toy training", ok,
        f"seed-0 accuracy {wave_acc_seed0:.3f} (>= 0.90) in {wall_seed0:.0f}s (< 300s), "
        f"high-frequency accuracy over 5 seeds: heat {heat_mean:.3f} <= wave {wave_mean:.3f}",
    )
