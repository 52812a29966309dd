"""Toy hierarchical classifier mixing tokens with the wave operator.

Architecture: non-overlapping patch embedding, then stages of residual
blocks separated by 2x2 patch-merging downsamples, then global average
pooling and a linear head. Each block is

    y1 = x  + dwconv3x3(x)
    y2 = y1 + mixer(layernorm(y1))
    y3 = y2 + ffn(layernorm(y2))

where the mixer propagates every channel through the spectral wave kernel
(initial velocity zero, displacement output kept), or, for the ablation
baseline, multiplies by the heat kernel. Both variants carry the same
three raw parameters per block so parameter counts and shapes match; the
heat variant maps slot 0 to conductivity, slot 2 to time, and ignores the
damping slot.

All gradients are hand-written reverse mode. Forward/backward run batched
on (B, C, H, W) arrays; the FeatureField entry points wrap a batch of one.
Everything is float64 and deterministic given the seed.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import numpy as np
from scipy.special import erf

from .field import FeatureField
from .kernel import WaveParams, coefficient_derivatives, frequency_grid, kernel_coefficients
from .operator import sigmoid, softplus, softplus_inverse
from .tensorio import load_tensor, save_tensor

__all__ = [
    "ModelConfig",
    "BlockWeights",
    "ModelWeights",
    "init_weights",
    "named_arrays",
    "patch_embed",
    "block_forward",
    "downsample",
    "model_forward",
    "model_backward",
    "forward_batch",
    "backward_batch",
    "save_model",
    "load_model",
]

_LN_EPS = 1e-5
_SQRT2 = np.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / np.sqrt(2.0 * np.pi)


@dataclass(frozen=True)
class ModelConfig:
    input_height: int = 32
    input_width: int = 32
    input_channels: int = 1
    patch_size: int = 4
    stage_channels: tuple[int, ...] = (16, 32)
    stage_depths: tuple[int, ...] = (2, 2)
    ffn_expansion: int = 4
    num_classes: int = 4
    heat_baseline: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "stage_channels", tuple(self.stage_channels))
        object.__setattr__(self, "stage_depths", tuple(self.stage_depths))
        if len(self.stage_channels) != len(self.stage_depths):
            raise ValueError("stage_channels and stage_depths lengths differ")
        if not self.stage_channels:
            raise ValueError("need at least one stage")
        if any(d < 1 for d in self.stage_depths):
            raise ValueError("every stage needs depth >= 1")
        if self.ffn_expansion < 1:
            raise ValueError("ffn_expansion must be >= 1")
        if self.num_classes < 2:
            raise ValueError("num_classes must be >= 2")
        if self.input_height % self.patch_size or self.input_width % self.patch_size:
            raise ValueError(
                f"input {self.input_height}x{self.input_width} not divisible "
                f"by patch_size {self.patch_size}"
            )
        h = self.input_height // self.patch_size
        w = self.input_width // self.patch_size
        for _ in range(len(self.stage_channels) - 1):
            if h % 2 or w % 2:
                raise ValueError(
                    f"stage grid {h}x{w} not divisible by 2 for patch merging"
                )
            h, w = h // 2, w // 2

    def stage_grid(self, stage: int) -> tuple[int, int]:
        """Spatial dims of the feature map inside the given stage."""
        h = self.input_height // self.patch_size
        w = self.input_width // self.patch_size
        return h >> stage, w >> stage


@dataclass
class BlockWeights:
    """One residual block. mixer_raw = (raw slot0, raw damping, raw time)."""

    dw_kernel: np.ndarray  # (C, 3, 3)
    dw_bias: np.ndarray  # (C,)
    norm1_scale: np.ndarray
    norm1_shift: np.ndarray
    mixer_raw: np.ndarray  # (3,)
    norm2_scale: np.ndarray
    norm2_shift: np.ndarray
    ffn_w1: np.ndarray  # (E*C, C)
    ffn_b1: np.ndarray
    ffn_w2: np.ndarray  # (C, E*C)
    ffn_b2: np.ndarray


@dataclass
class ModelWeights:
    patch_weight: np.ndarray  # (C0, Cin*p*p)
    patch_bias: np.ndarray
    stages: list = dc_field(default_factory=list)  # list[list[BlockWeights]]
    merge_weights: list = dc_field(default_factory=list)  # (C_next, 4*C)
    merge_biases: list = dc_field(default_factory=list)
    head_weight: np.ndarray = None
    head_bias: np.ndarray = None


def init_weights(
    cfg: ModelConfig,
    seed: int,
    mixer_init: tuple[float, float, float] = (1.0, 0.1, 1.0),
) -> ModelWeights:
    """Deterministic initialisation.

    Linear maps (patch, merges, FFN, head) draw uniform(+-1/sqrt(fan_in));
    depthwise kernels start as identity taps plus uniform(+-0.01) noise;
    norms start as identity; mixer raws start at the physical values
    mixer_init (default velocity 1.0, damping 0.1, time 1.0), mapped back
    through softplus_inverse.
    """
    rng = np.random.Generator(np.random.PCG64(seed))

    def linear(rows: int, fan_in: int) -> np.ndarray:
        bound = 1.0 / np.sqrt(fan_in)
        return rng.uniform(-bound, bound, size=(rows, fan_in))

    p, cin = cfg.patch_size, cfg.input_channels
    c0 = cfg.stage_channels[0]
    weights = ModelWeights(
        patch_weight=linear(c0, cin * p * p),
        patch_bias=np.zeros(c0),
    )
    raw0 = np.array([softplus_inverse(y) for y in mixer_init])
    for c, depth in zip(cfg.stage_channels, cfg.stage_depths):
        blocks = []
        for _ in range(depth):
            dw = rng.uniform(-0.01, 0.01, size=(c, 3, 3))
            dw[:, 1, 1] += 1.0
            e = cfg.ffn_expansion * c
            blocks.append(
                BlockWeights(
                    dw_kernel=dw,
                    dw_bias=np.zeros(c),
                    norm1_scale=np.ones(c),
                    norm1_shift=np.zeros(c),
                    mixer_raw=raw0.copy(),
                    norm2_scale=np.ones(c),
                    norm2_shift=np.zeros(c),
                    ffn_w1=linear(e, c),
                    ffn_b1=np.zeros(e),
                    ffn_w2=linear(c, e),
                    ffn_b2=np.zeros(c),
                )
            )
        weights.stages.append(blocks)
    for i in range(len(cfg.stage_channels) - 1):
        c, c_next = cfg.stage_channels[i], cfg.stage_channels[i + 1]
        weights.merge_weights.append(linear(c_next, 4 * c))
        weights.merge_biases.append(np.zeros(c_next))
    weights.head_weight = linear(cfg.num_classes, cfg.stage_channels[-1])
    weights.head_bias = np.zeros(cfg.num_classes)
    return weights


def named_arrays(weights: ModelWeights) -> list[tuple[str, np.ndarray]]:
    """Flat (name, array) view in a fixed order; arrays are the live ones."""
    out = [("patch.weight", weights.patch_weight), ("patch.bias", weights.patch_bias)]
    for i, blocks in enumerate(weights.stages):
        for j, bw in enumerate(blocks):
            prefix = f"stage{i}.block{j}"
            out += [
                (f"{prefix}.dw_kernel", bw.dw_kernel),
                (f"{prefix}.dw_bias", bw.dw_bias),
                (f"{prefix}.norm1_scale", bw.norm1_scale),
                (f"{prefix}.norm1_shift", bw.norm1_shift),
                (f"{prefix}.mixer_raw", bw.mixer_raw),
                (f"{prefix}.norm2_scale", bw.norm2_scale),
                (f"{prefix}.norm2_shift", bw.norm2_shift),
                (f"{prefix}.ffn_w1", bw.ffn_w1),
                (f"{prefix}.ffn_b1", bw.ffn_b1),
                (f"{prefix}.ffn_w2", bw.ffn_w2),
                (f"{prefix}.ffn_b2", bw.ffn_b2),
            ]
    for i, (mw, mb) in enumerate(zip(weights.merge_weights, weights.merge_biases)):
        out += [(f"merge{i}.weight", mw), (f"merge{i}.bias", mb)]
    out += [("head.weight", weights.head_weight), ("head.bias", weights.head_bias)]
    return out


# ---------------------------------------------------------------- primitives


def _patch_fwd(x, weight, bias, p):
    b, cin, h, w = x.shape
    hp, wp = h // p, w // p
    cols = (
        x.reshape(b, cin, hp, p, wp, p)
        .transpose(0, 2, 4, 1, 3, 5)
        .reshape(b, hp * wp, cin * p * p)
    )
    y = cols @ weight.T + bias
    return y.transpose(0, 2, 1).reshape(b, weight.shape[0], hp, wp), cols


def _patch_bwd(g, cols, weight, x_shape, p):
    b, cin, h, w = x_shape
    hp, wp = h // p, w // p
    g2 = g.reshape(b, weight.shape[0], hp * wp).transpose(0, 2, 1)
    gw = np.einsum("bnc,bnf->cf", g2, cols)
    gb = g2.sum(axis=(0, 1))
    gcols = g2 @ weight
    gx = (
        gcols.reshape(b, hp, wp, cin, p, p)
        .transpose(0, 3, 1, 4, 2, 5)
        .reshape(b, cin, h, w)
    )
    return gx, gw, gb


def _dwconv_fwd(x, kernel, bias):
    b, c, h, w = x.shape
    pad = np.pad(x, ((0, 0), (0, 0), (1, 1), (1, 1)))
    y = np.zeros_like(x)
    for i in range(3):
        for j in range(3):
            y += kernel[:, i, j][None, :, None, None] * pad[:, :, i : i + h, j : j + w]
    return y + bias[None, :, None, None], pad


def _dwconv_bwd(g, pad, kernel):
    b, c, h, w = g.shape
    gk = np.empty_like(kernel)
    for i in range(3):
        for j in range(3):
            gk[:, i, j] = np.einsum(
                "bchw,bchw->c", g, pad[:, :, i : i + h, j : j + w]
            )
    gb = g.sum(axis=(0, 2, 3))
    gpad = np.zeros((b, c, h + 2, w + 2))
    for i in range(3):
        for j in range(3):
            gpad[:, :, i : i + h, j : j + w] += (
                kernel[:, i, j][None, :, None, None] * g
            )
    return gpad[:, :, 1 : 1 + h, 1 : 1 + w], gk, gb


def _ln_fwd(x, scale, shift):
    # Normalize across channels independently at each spatial position.
    mu = x.mean(axis=1, keepdims=True)
    xc = x - mu
    var = (xc * xc).mean(axis=1, keepdims=True)
    inv = 1.0 / np.sqrt(var + _LN_EPS)
    xhat = xc * inv
    y = scale[None, :, None, None] * xhat + shift[None, :, None, None]
    return y, (xhat, inv)


def _ln_bwd(g, cache, scale):
    xhat, inv = cache
    c = xhat.shape[1]
    gxhat = g * scale[None, :, None, None]
    gscale = np.einsum("bchw,bchw->c", g, xhat)
    gshift = g.sum(axis=(0, 2, 3))
    mean_g = gxhat.mean(axis=1, keepdims=True)
    mean_gx = (gxhat * xhat).mean(axis=1, keepdims=True)
    gx = inv * (gxhat - mean_g - xhat * mean_gx)
    return gx, gscale, gshift


def _mixer_planes(raw: np.ndarray, grid, heat: bool):
    """u->u multiplier plane and its raw-parameter derivative planes."""
    if heat:
        k = softplus(raw[0])
        t = softplus(raw[2])
        s = grid.symbol()
        mult = np.exp(-k * s * t)
        d_raw = (
            -s * t * mult * sigmoid(raw[0]),
            np.zeros_like(mult),
            -k * s * mult * sigmoid(raw[2]),
        )
        return mult, d_raw
    params = WaveParams(
        velocity=softplus(raw[0]), damping=softplus(raw[1]), time=softplus(raw[2])
    )
    kern = kernel_coefficients(params, grid)
    derivs = coefficient_derivatives(params, grid)
    d_raw = (
        derivs["velocity"][0] * sigmoid(raw[0]),
        derivs["damping"][0] * sigmoid(raw[1]),
        derivs["time"][0] * sigmoid(raw[2]),
    )
    return kern.uu, d_raw


def _mixer_fwd(x, raw, grid, heat):
    mult, d_raw = _mixer_planes(raw, grid, heat)
    spec = np.fft.fft2(x, axes=(-2, -1))
    y = np.fft.ifft2(mult[None, None] * spec, axes=(-2, -1)).real
    return y, (spec, mult, d_raw)


def _mixer_bwd(g, cache):
    spec, mult, d_raw = cache
    gspec = np.fft.fft2(g, axes=(-2, -1))
    # The plane is real and even in frequency, so the adjoint reuses it.
    gx = np.fft.ifft2(mult[None, None] * gspec, axes=(-2, -1)).real
    h, w = mult.shape
    graw = np.array(
        [
            float(np.sum((d[None, None] * spec) * np.conj(gspec)).real) / (h * w)
            for d in d_raw
        ]
    )
    return gx, graw


def _gelu(x):
    return 0.5 * x * (1.0 + erf(x / _SQRT2))


def _gelu_grad(x):
    phi = _INV_SQRT_2PI * np.exp(-0.5 * x * x)
    return 0.5 * (1.0 + erf(x / _SQRT2)) + x * phi


def _ffn_fwd(x, w1, b1, w2, b2):
    h1 = np.einsum("ec,bchw->behw", w1, x) + b1[None, :, None, None]
    a = _gelu(h1)
    y = np.einsum("ce,behw->bchw", w2, a) + b2[None, :, None, None]
    return y, (h1, a)


def _ffn_bwd(g, cache, x, w1, w2):
    h1, a = cache
    gw2 = np.einsum("bchw,behw->ce", g, a)
    gb2 = g.sum(axis=(0, 2, 3))
    ga = np.einsum("ce,bchw->behw", w2, g)
    gh1 = ga * _gelu_grad(h1)
    gw1 = np.einsum("behw,bchw->ec", gh1, x)
    gb1 = gh1.sum(axis=(0, 2, 3))
    gx = np.einsum("ec,behw->bchw", w1, gh1)
    return gx, gw1, gb1, gw2, gb2


def _block_fwd(x, bw: BlockWeights, grid, heat, identity_norm=False):
    conv, pad = _dwconv_fwd(x, bw.dw_kernel, bw.dw_bias)
    y1 = x + conv
    if identity_norm:
        n1, ln1 = y1, None
    else:
        n1, ln1 = _ln_fwd(y1, bw.norm1_scale, bw.norm1_shift)
    mix, mx = _mixer_fwd(n1, bw.mixer_raw, grid, heat)
    y2 = y1 + mix
    if identity_norm:
        n2, ln2 = y2, None
    else:
        n2, ln2 = _ln_fwd(y2, bw.norm2_scale, bw.norm2_shift)
    ffn, fx = _ffn_fwd(n2, bw.ffn_w1, bw.ffn_b1, bw.ffn_w2, bw.ffn_b2)
    y3 = y2 + ffn
    cache = (pad, ln1, mx, ln2, fx, n1, n2)
    return y3, cache


def _block_bwd(g, cache, bw: BlockWeights):
    pad, ln1, mx, ln2, fx, n1, n2 = cache
    grads = {}
    gffn_in, gw1, gb1, gw2, gb2 = _ffn_bwd(g, fx, n2, bw.ffn_w1, bw.ffn_w2)
    grads["ffn_w1"], grads["ffn_b1"] = gw1, gb1
    grads["ffn_w2"], grads["ffn_b2"] = gw2, gb2
    gn2, gs2, gsh2 = _ln_bwd(gffn_in, ln2, bw.norm2_scale)
    grads["norm2_scale"], grads["norm2_shift"] = gs2, gsh2
    gy2 = g + gn2
    gmix_in, graw = _mixer_bwd(gy2, mx)
    grads["mixer_raw"] = graw
    gn1, gs1, gsh1 = _ln_bwd(gmix_in, ln1, bw.norm1_scale)
    grads["norm1_scale"], grads["norm1_shift"] = gs1, gsh1
    gy1 = gy2 + gn1
    gconv_in, gk, gb = _dwconv_bwd(gy1, pad, bw.dw_kernel)
    grads["dw_kernel"], grads["dw_bias"] = gk, gb
    gx = gy1 + gconv_in
    return gx, grads


# ------------------------------------------------------------- full network


def _merge_fwd(x, weight, bias):
    b, c, h, w = x.shape
    hh, wh = h // 2, w // 2
    cols = (
        x.reshape(b, c, hh, 2, wh, 2)
        .transpose(0, 2, 4, 1, 3, 5)
        .reshape(b, hh * wh, 4 * c)
    )
    y = cols @ weight.T + bias
    return y.transpose(0, 2, 1).reshape(b, weight.shape[0], hh, wh), cols


def _merge_bwd(g, cols, weight, x_shape):
    b, c, h, w = x_shape
    hh, wh = h // 2, w // 2
    g2 = g.reshape(b, weight.shape[0], hh * wh).transpose(0, 2, 1)
    gw = np.einsum("bnc,bnf->cf", g2, cols)
    gb = g2.sum(axis=(0, 1))
    gcols = g2 @ weight
    gx = (
        gcols.reshape(b, hh, wh, c, 2, 2)
        .transpose(0, 3, 1, 4, 2, 5)
        .reshape(b, c, h, w)
    )
    return gx, gw, gb


def forward_batch(
    images: np.ndarray, weights: ModelWeights, cfg: ModelConfig
) -> np.ndarray:
    """Logits (B, num_classes) for a batch of (B, Cin, H, W) images."""
    logits, _ = _forward_cached(images, weights, cfg)
    return logits


def _forward_cached(images, weights, cfg):
    caches = []
    x, cols = _patch_fwd(images, weights.patch_weight, weights.patch_bias, cfg.patch_size)
    caches.append(("patch", cols, images.shape))
    for i, blocks in enumerate(weights.stages):
        grid = frequency_grid(*cfg.stage_grid(i), "periodic")
        for j, bw in enumerate(blocks):
            x, cache = _block_fwd(x, bw, grid, cfg.heat_baseline)
            caches.append((f"stage{i}.block{j}", cache, None))
        if i < len(weights.stages) - 1:
            shape = x.shape
            x, mcols = _merge_fwd(x, weights.merge_weights[i], weights.merge_biases[i])
            caches.append((f"merge{i}", mcols, shape))
    pooled = x.mean(axis=(2, 3))
    caches.append(("pool", x.shape, None))
    logits = pooled @ weights.head_weight.T + weights.head_bias
    caches.append(("head", pooled, None))
    return logits, caches


def _log_softmax(logits):
    z = logits - logits.max(axis=1, keepdims=True)
    return z - np.log(np.exp(z).sum(axis=1, keepdims=True))


def backward_batch(
    images: np.ndarray,
    labels: np.ndarray,
    weights: ModelWeights,
    cfg: ModelConfig,
    grad_scale: float = 1.0,
) -> tuple[float, dict[str, np.ndarray]]:
    """Mean cross-entropy over the batch and gradients for every weight,
    keyed like named_arrays. Gradients scale linearly with grad_scale."""
    logits, caches = _forward_cached(images, weights, cfg)
    b = images.shape[0]
    logp = _log_softmax(logits)
    loss = float(-logp[np.arange(b), labels].mean())
    glogits = np.exp(logp)
    glogits[np.arange(b), labels] -= 1.0
    glogits *= grad_scale / b

    grads: dict[str, np.ndarray] = {}
    kind, pooled, _ = caches.pop()
    assert kind == "head"
    grads["head.weight"] = glogits.T @ pooled
    grads["head.bias"] = glogits.sum(axis=0)
    gpooled = glogits @ weights.head_weight
    kind, x_shape, _ = caches.pop()
    assert kind == "pool"
    g = np.broadcast_to(
        gpooled[:, :, None, None] / (x_shape[2] * x_shape[3]), x_shape
    ).copy()

    for i in reversed(range(len(weights.stages))):
        if i < len(weights.stages) - 1:
            name, mcols, shape = caches.pop()
            assert name == f"merge{i}"
            g, gw, gb = _merge_bwd(g, mcols, weights.merge_weights[i], shape)
            grads[f"merge{i}.weight"] = gw
            grads[f"merge{i}.bias"] = gb
        for j in reversed(range(len(weights.stages[i]))):
            name, cache, _ = caches.pop()
            assert name == f"stage{i}.block{j}"
            g, block_grads = _block_bwd(g, cache, weights.stages[i][j])
            for key, val in block_grads.items():
                grads[f"stage{i}.block{j}.{key}"] = val

    name, cols, img_shape = caches.pop()
    assert name == "patch"
    _, gw, gb = _patch_bwd(g, cols, weights.patch_weight, img_shape, cfg.patch_size)
    grads["patch.weight"] = gw
    grads["patch.bias"] = gb
    return loss, grads


# ------------------------------------------------------- public field-level


def patch_embed(
    image: FeatureField, weight: np.ndarray, bias: np.ndarray, patch_size: int
) -> FeatureField:
    """Embed non-overlapping patches with one linear map."""
    if image.height % patch_size or image.width % patch_size:
        raise ValueError(
            f"image {image.height}x{image.width} not divisible by patch_size "
            f"{patch_size}"
        )
    y, _ = _patch_fwd(image.data[None], weight, bias, patch_size)
    return FeatureField(y[0])


def block_forward(
    field: FeatureField,
    bw: BlockWeights,
    heat_baseline: bool = False,
    identity_norm: bool = False,
) -> FeatureField:
    """Apply one residual block (conv, mixer, FFN branches)."""
    grid = frequency_grid(field.height, field.width, "periodic")
    y, _ = _block_fwd(field.data[None], bw, grid, heat_baseline, identity_norm)
    return FeatureField(y[0])


def downsample(field: FeatureField, weight: np.ndarray, bias: np.ndarray) -> FeatureField:
    """2x2 patch merging: concatenate each 2x2 neighbourhood, map linearly."""
    if field.height % 2 or field.width % 2:
        raise ValueError(f"field {field.height}x{field.width} not divisible by 2")
    y, _ = _merge_fwd(field.data[None], weight, bias)
    return FeatureField(y[0])


def model_forward(
    image: FeatureField, weights: ModelWeights, cfg: ModelConfig
) -> np.ndarray:
    """Class logits for one image."""
    return forward_batch(image.data[None], weights, cfg)[0]


def model_backward(
    image: FeatureField,
    label: int,
    weights: ModelWeights,
    cfg: ModelConfig,
    grad_scale: float = 1.0,
) -> tuple[float, dict[str, np.ndarray]]:
    """Cross-entropy loss and exact gradients for one labelled image."""
    return backward_batch(
        image.data[None], np.asarray([label]), weights, cfg, grad_scale
    )


# ------------------------------------------------------------- persistence


def _to_rank3(arr: np.ndarray) -> np.ndarray:
    if arr.ndim == 3:
        return arr
    if arr.ndim == 2:
        return arr[None]
    if arr.ndim == 1:
        return arr[None, None]
    raise ValueError(f"cannot store rank-{arr.ndim} array")


def save_model(weights: ModelWeights, cfg: ModelConfig, directory: str | Path) -> None:
    """Write every weight as a WFT1 tensor plus a JSON manifest."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    manifest = {
        "format": "wavekit-model",
        "version": 1,
        "config": {
            "input_height": cfg.input_height,
            "input_width": cfg.input_width,
            "input_channels": cfg.input_channels,
            "patch_size": cfg.patch_size,
            "stage_channels": list(cfg.stage_channels),
            "stage_depths": list(cfg.stage_depths),
            "ffn_expansion": cfg.ffn_expansion,
            "num_classes": cfg.num_classes,
            "heat_baseline": cfg.heat_baseline,
        },
        "tensors": {},
    }
    for name, arr in named_arrays(weights):
        fname = name.replace(".", "_") + ".wft1"
        manifest["tensors"][name] = {"file": fname, "shape": list(arr.shape)}
        save_tensor(FeatureField(_to_rank3(arr)), directory / fname)
    (directory / "manifest.json").write_text(json.dumps(manifest, indent=2))


def load_model(directory: str | Path) -> tuple[ModelWeights, ModelConfig]:
    """Rebuild (weights, config) from a save_model directory."""
    directory = Path(directory)
    manifest = json.loads((directory / "manifest.json").read_text())
    if manifest.get("format") != "wavekit-model":
        raise ValueError(f"{directory}: not a model directory")
    cfg = ModelConfig(**manifest["config"])
    weights = init_weights(cfg, seed=0)
    entries = dict(manifest["tensors"])
    for name, arr in named_arrays(weights):
        if name not in entries:
            raise ValueError(f"{directory}: manifest missing tensor {name!r}")
        entry = entries.pop(name)
        loaded = load_tensor(directory / entry["file"]).data
        shape = tuple(entry["shape"])
        if int(np.prod(shape)) != loaded.size:
            raise ValueError(
                f"{directory}: tensor {name!r} shape {shape} does not match "
                f"file size {loaded.size}"
            )
        arr[...] = loaded.reshape(shape)
    if entries:
        raise ValueError(f"{directory}: unknown tensors in manifest: {sorted(entries)}")
    return weights, cfg
