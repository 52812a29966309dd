"""End-to-end runs of the command-line front end (in-process)."""
import json

import numpy as np
import pytest

from wavekit import __version__, load_tensor, read_pgm, write_pgm
from wavekit.cli import EXIT_CONFIG, EXIT_OK, EXIT_TOLERANCE, main


def _config(tmp_path, payload: dict) -> str:
    path = tmp_path / "config.json"
    path.write_text(json.dumps(payload))
    return str(path)


def _header_and_rows(path):
    comments, rows = [], []
    for line in path.read_text().splitlines():
        (comments if line.startswith("#") else rows).append(line)
    return comments, rows


def test_verify_oracle_passes_and_documents_itself(tmp_path):
    assert main(["verify-oracle", "--out", str(tmp_path)]) == EXIT_OK
    csv = tmp_path / "verify_oracle.csv"
    comments, rows = _header_and_rows(csv)
    assert comments[0] == f"# wavekit {__version__}"
    assert comments[1] == "# command verify-oracle"
    resolved = json.loads(comments[2].removeprefix("# config "))
    assert resolved["seed"] == 0
    assert comments[3] == "# seed 0"
    assert rows[0].startswith("case,")
    assert all(row.endswith(("pass", "info")) for row in rows[1:])


def test_runs_are_bitwise_reproducible(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["verify-oracle", "--out", str(a), "--seed", "7"]) == EXIT_OK
    assert main(["verify-oracle", "--out", str(b), "--seed", "7"]) == EXIT_OK
    assert (a / "verify_oracle.csv").read_bytes() == (b / "verify_oracle.csv").read_bytes()


def test_seed_flag_overrides_config(tmp_path):
    cfg = _config(tmp_path, {"seed": 3})
    assert main(["verify-oracle", "--config", cfg, "--out", str(tmp_path), "--seed", "9"]) == EXIT_OK
    comments, _ = _header_and_rows(tmp_path / "verify_oracle.csv")
    assert "# seed 9" in comments
    assert json.loads(comments[2].removeprefix("# config "))["seed"] == 9


def test_impossible_tolerance_exits_one(tmp_path):
    cfg = _config(tmp_path, {"tolerance": 1e-18})
    assert main(["verify-oracle", "--config", cfg, "--out", str(tmp_path)]) == EXIT_TOLERANCE
    _, rows = _header_and_rows(tmp_path / "verify_oracle.csv")
    assert any(row.endswith("fail") for row in rows)


@pytest.mark.parametrize(
    "payload",
    ['{"no_such_key": 1}', "{not-json", '[1, 2]', '{"height": "tall"}', '{"seed": -1}'],
)
def test_bad_configs_exit_two(tmp_path, payload):
    path = tmp_path / "config.json"
    path.write_text(payload)
    assert main(["verify-oracle", "--config", str(path), "--out", str(tmp_path)]) == EXIT_CONFIG


def test_missing_config_file_exits_two(tmp_path):
    missing = str(tmp_path / "nope.json")
    assert main(["verify-oracle", "--config", missing, "--out", str(tmp_path)]) == EXIT_CONFIG


def test_workers_validation(tmp_path, monkeypatch):
    assert main(["verify-oracle", "--out", str(tmp_path), "--workers", "0"]) == EXIT_CONFIG
    monkeypatch.setenv("WAVEKIT_WORKERS", "banana")
    assert main(["verify-oracle", "--out", str(tmp_path)]) == EXIT_CONFIG
    monkeypatch.setenv("WAVEKIT_WORKERS", "2")
    assert main(["verify-oracle", "--out", str(tmp_path)]) == EXIT_OK
    comments, _ = _header_and_rows(tmp_path / "verify_oracle.csv")
    assert "# workers 2" in comments


def test_spectral_compare_dc_row_is_exact(tmp_path):
    assert main(["spectral-compare", "--out", str(tmp_path)]) == EXIT_OK
    _, rows = _header_and_rows(tmp_path / "spectral_compare.csv")
    header = rows[0].split(",")
    first = rows[1].split(",")
    assert float(first[header.index("omega")]) == 0.0
    assert float(first[header.index("wave_gain")]) == 1.0
    assert float(first[header.index("heat_gain")]) == 1.0
    # high-frequency rows retain far more under wave mixing than diffusion
    last = rows[-1].split(",")
    assert float(last[header.index("envelope_to_heat_ratio")]) > 1e3


def test_bench_tiny_grid_runs(tmp_path):
    cfg = _config(
        tmp_path,
        {
            "token_counts": [16, 64],
            "channels": 2,
            "warmups": 0,
            "repetitions": 2,
            "wpo_slope_range": [-5.0, 5.0],
            "dense_slope_range": [-5.0, 5.0],
            "crossover_tokens": 64,
            "crossover_factor": 0.0,
        },
    )
    assert main(["bench", "--config", cfg, "--out", str(tmp_path)]) == EXIT_OK
    _, rows = _header_and_rows(tmp_path / "bench_records.csv")
    assert len(rows) == 1 + 6  # header + 3 mixers x 2 sizes
    _, summary = _header_and_rows(tmp_path / "bench_summary.csv")
    metrics = {line.split(",")[0] for line in summary[1:]}
    assert metrics == {
        "wpo_loglog_slope",
        "dense_loglog_slope",
        "heat_loglog_slope",
        "dense_over_wpo_at_64",
    }


def test_bench_rejects_single_size_and_bad_crossover(tmp_path):
    cfg = _config(tmp_path, {"token_counts": [64]})
    assert main(["bench", "--config", cfg, "--out", str(tmp_path)]) == EXIT_CONFIG
    cfg = _config(tmp_path, {"token_counts": [16, 64], "crossover_tokens": 256})
    assert main(["bench", "--config", cfg, "--out", str(tmp_path)]) == EXIT_CONFIG


def test_train_toy_tiny_run_writes_curves_and_weights(tmp_path):
    cfg = _config(
        tmp_path,
        {"epochs": 1, "train_count": 8, "test_count": 8, "batch_size": 8},
    )
    assert main(["train-toy", "--config", cfg, "--out", str(tmp_path)]) == EXIT_OK
    _, rows = _header_and_rows(tmp_path / "learning_curve.csv")
    assert rows[0].split(",")[:4] == ["variant", "epoch", "train_loss", "test_accuracy"]
    variants = [line.split(",")[0] for line in rows[1:]]
    assert variants == ["wave", "heat"]
    assert (tmp_path / "model-wave" / "manifest.json").exists()
    assert (tmp_path / "model-heat" / "manifest.json").exists()


def test_ablation_tiny_grid(tmp_path):
    cfg = _config(
        tmp_path,
        {
            "velocities": [1.0],
            "dampings": [0.1, 10.0],
            "epochs": 1,
            "train_count": 8,
            "test_count": 8,
        },
    )
    assert main(["ablation", "--config", cfg, "--out", str(tmp_path)]) == EXIT_OK
    _, rows = _header_and_rows(tmp_path / "ablation.csv")
    assert len(rows) == 1 + 2
    header = rows[0].split(",")
    frac_idx = header.index("overdamped_fraction")
    # damping 10 on the 8x8 stage grid overdamps every bin; damping 0.1 only DC
    assert float(rows[1].split(",")[frac_idx]) == pytest.approx(1.0 / 64.0)
    assert float(rows[2].split(",")[frac_idx]) == 1.0


def _blob_pgm(tmp_path):
    y, x = np.mgrid[0:24, 0:24]
    blob = 255 * np.exp(-((x - 12.0) ** 2 + (y - 12.0) ** 2) / 16.0)
    path = tmp_path / "blob.pgm"
    write_pgm(path, blob)
    return path


def test_propagate_snapshots_and_tensors(tmp_path):
    pgm = _blob_pgm(tmp_path)
    cfg = _config(tmp_path, {"input": str(pgm), "times": [0.0, 0.5]})
    assert main(["propagate", "--config", cfg, "--out", str(tmp_path)]) == EXIT_OK
    # t = 0 applies an identity kernel, so only FFT roundtrip error remains
    t0 = load_tensor(tmp_path / "snapshot_t0_u.wft1")
    expected = read_pgm(pgm).astype(np.float64) / 255.0
    assert np.allclose(t0.data[0], expected, atol=1e-12)
    assert not load_tensor(tmp_path / "snapshot_t0_v.wft1").data.any()
    img = read_pgm(tmp_path / "snapshot_t0.5.pgm")
    assert img.shape == (24, 24)
    assert img.min() == 0 and img.max() == 255  # renormalized to full range
    later = load_tensor(tmp_path / "snapshot_t0.5_u.wft1")
    assert not np.array_equal(later.data, t0.data)


def test_propagate_rejections(tmp_path):
    ascii_pgm = tmp_path / "ascii.pgm"
    ascii_pgm.write_bytes(b"P2\n2 2\n255\n0 1 2 3\n")
    cfg = _config(tmp_path, {"input": str(ascii_pgm)})
    assert main(["propagate", "--config", cfg, "--out", str(tmp_path)]) == EXIT_CONFIG

    pgm = _blob_pgm(tmp_path)
    cfg = _config(tmp_path, {"input": str(pgm), "max_dim": 16})
    assert main(["propagate", "--config", cfg, "--out", str(tmp_path)]) == EXIT_CONFIG

    cfg = _config(tmp_path, {"input": str(tmp_path / "missing.pgm")})
    assert main(["propagate", "--config", cfg, "--out", str(tmp_path)]) == EXIT_CONFIG

    cfg = _config(tmp_path, {})  # no input at all
    assert main(["propagate", "--config", cfg, "--out", str(tmp_path)]) == EXIT_CONFIG

    cfg = _config(tmp_path, {"input": str(pgm), "times": [-1.0]})
    assert main(["propagate", "--config", cfg, "--out", str(tmp_path)]) == EXIT_CONFIG
