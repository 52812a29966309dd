"""Differentiable spectral wave-propagation operator.

wpo_forward advances a (displacement, velocity) state by applying the
closed-form kernel in the FFT basis: two forward transforms, four plane
multiplies, two inverse transforms, O(C H W log(H W)) total. The adjoint
is the transposed per-bin 2x2 matrix under the same transforms (the
coefficient planes are real and even, so the spectral transpose is the
spatial adjoint). Parameter gradients contract the analytic coefficient
derivatives against the upstream gradient in the frequency domain, with
the 1/(H W) factor from the unnormalized-forward FFT convention.

Layer parameters live in raw (unconstrained) form and map to physical
values through softplus, keeping velocity, damping and time positive.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .field import FeatureField
from .kernel import (
    PropagationKernel,
    WaveParams,
    coefficient_derivatives,
    frequency_grid,
    kernel_coefficients,
)

__all__ = [
    "WpoState",
    "WpoLayerParams",
    "VelocityInit",
    "ParamGrads",
    "softplus",
    "softplus_inverse",
    "sigmoid",
    "velocity_init",
    "wpo_forward",
    "wpo_adjoint",
    "wpo_param_grads",
    "apply_kernel",
    "wave_energy",
]

_IMAG_TOL = 1e-8


def softplus(x: float) -> float:
    """log(1 + e^x), overflow-safe."""
    return float(np.logaddexp(0.0, x))


def softplus_inverse(y: float) -> float:
    """The raw value whose softplus is y; requires y > 0."""
    if y <= 0:
        raise ValueError(f"softplus_inverse needs y > 0; got {y}")
    # ln(e^y - 1) = y + ln(1 - e^-y), stable for large y.
    return y + math.log1p(-math.exp(-y))


def sigmoid(x: float) -> float:
    """Derivative of softplus."""
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


@dataclass(frozen=True, eq=False)
class WpoState:
    """A propagation state: displacement u and velocity v of equal shape."""

    u: FeatureField
    v: FeatureField

    def __post_init__(self) -> None:
        if self.u.shape != self.v.shape:
            raise ValueError(
                f"u/v shape mismatch: {self.u.shape} vs {self.v.shape}"
            )


@dataclass(frozen=True)
class WpoLayerParams:
    """Trainable operator parameters in raw form.

    softplus maps raw_velocity -> velocity, raw_damping -> damping,
    raw_time -> time, so all three stay positive for any raw value.
    """

    raw_velocity: float
    raw_damping: float
    raw_time: float

    def __post_init__(self) -> None:
        for name in ("raw_velocity", "raw_damping", "raw_time"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    def wave_params(self) -> WaveParams:
        return WaveParams(
            velocity=softplus(self.raw_velocity),
            damping=softplus(self.raw_damping),
            time=softplus(self.raw_time),
        )

    @classmethod
    def from_physical(cls, velocity: float, damping: float, time: float) -> "WpoLayerParams":
        return cls(
            raw_velocity=softplus_inverse(velocity),
            raw_damping=softplus_inverse(damping),
            raw_time=softplus_inverse(time),
        )


@dataclass(frozen=True, eq=False)
class VelocityInit:
    """How to seed the initial velocity from the initial displacement.

    mode "zero": v0 = 0. mode "linear": v0 = scale[c] * u0 + bias[c] per
    channel; scale defaults to ones, bias to zeros.
    """

    mode: str = "zero"
    scale: np.ndarray | None = None
    bias: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.mode not in ("zero", "linear"):
            raise ValueError(f"mode must be 'zero' or 'linear'; got {self.mode!r}")


def velocity_init(u0: FeatureField, cfg: VelocityInit) -> FeatureField:
    """Build the initial velocity field for u0 under cfg."""
    if cfg.mode == "zero":
        return FeatureField(np.zeros_like(u0.data))
    c = u0.channels
    scale = np.ones(c) if cfg.scale is None else np.asarray(cfg.scale, dtype=np.float64)
    bias = np.zeros(c) if cfg.bias is None else np.asarray(cfg.bias, dtype=np.float64)
    if scale.shape != (c,) or bias.shape != (c,):
        raise ValueError(
            f"scale/bias must have shape ({c},); got {scale.shape} and {bias.shape}"
        )
    return FeatureField(scale[:, None, None] * u0.data + bias[:, None, None])


def apply_kernel(
    kern: PropagationKernel, u: np.ndarray, v: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Apply precomputed transition planes to raw (C, H, W) arrays."""
    a = np.fft.fft2(u, axes=(-2, -1))
    b = np.fft.fft2(v, axes=(-2, -1))
    out_u = np.fft.ifft2(kern.uu[None] * a + kern.uv[None] * b, axes=(-2, -1))
    out_v = np.fft.ifft2(kern.vu[None] * a + kern.vv[None] * b, axes=(-2, -1))
    residue = max(float(np.abs(out_u.imag).max()), float(np.abs(out_v.imag).max()))
    if residue > _IMAG_TOL:
        raise AssertionError(
            f"internal: propagation output not real (imag residue {residue:.3e})"
        )
    return out_u.real.copy(), out_v.real.copy()


def wpo_forward(state: WpoState, params: WaveParams) -> WpoState:
    """Advance the state by params.time under periodic boundaries."""
    kern = kernel_coefficients(
        params, frequency_grid(state.u.height, state.u.width, "periodic")
    )
    out_u, out_v = apply_kernel(kern, state.u.data, state.v.data)
    return WpoState(u=FeatureField(out_u), v=FeatureField(out_v))


def wave_energy(state: WpoState, params: WaveParams) -> float:
    """Discrete wave energy of a state under periodic boundaries.

    E = 0.5 * sum_bins(|V|^2 + omega0_sq * |U|^2) / (H W), summed over
    channels. wpo_forward conserves E exactly at damping 0 and never
    increases it otherwise (dE/dt = -damping * integral of u_t^2).
    """
    grid = frequency_grid(state.u.height, state.u.width, "periodic")
    omega0_sq = params.velocity**2 * grid.symbol()
    a = np.fft.fft2(state.u.data, axes=(-2, -1))
    b = np.fft.fft2(state.v.data, axes=(-2, -1))
    hw = state.u.height * state.u.width
    return float(
        0.5 * ((np.abs(b) ** 2).sum() + (omega0_sq[None] * np.abs(a) ** 2).sum()) / hw
    )


def wpo_adjoint(grad_out: WpoState, params: WaveParams) -> WpoState:
    """Gradient with respect to the input state: the transposed per-bin map.

    <wpo_forward(x), y> = <x, wpo_adjoint(y)> for all states x, y.
    """
    kern = kernel_coefficients(
        params, frequency_grid(grad_out.u.height, grad_out.u.width, "periodic")
    )
    transposed = PropagationKernel(
        uu=kern.uu,
        uv=kern.vu,
        vu=kern.uv,
        vv=kern.vv,
        regimes=kern.regimes,
        omega0_sq=kern.omega0_sq,
    )
    gu, gv = apply_kernel(transposed, grad_out.u.data, grad_out.v.data)
    return WpoState(u=FeatureField(gu), v=FeatureField(gv))


class ParamGrads(NamedTuple):
    raw_velocity: float
    raw_damping: float
    raw_time: float


def wpo_param_grads(
    state: WpoState, grad_out: WpoState, layer_params: WpoLayerParams
) -> ParamGrads:
    """Loss gradients for the three raw parameters.

    state is the layer input, grad_out the loss gradient at the layer
    output. For each physical parameter theta,

        dL/dtheta = (1/(H W)) * sum_bins Re[(d_uu*U + d_uv*V) conj(GU)
                                          + (d_vu*U + d_vv*V) conj(GV)]

    summed over channels, then chained through softplus.
    """
    params = layer_params.wave_params()
    h, w = state.u.height, state.u.width
    derivs = coefficient_derivatives(params, frequency_grid(h, w, "periodic"))
    a = np.fft.fft2(state.u.data, axes=(-2, -1))
    b = np.fft.fft2(state.v.data, axes=(-2, -1))
    gu = np.fft.fft2(grad_out.u.data, axes=(-2, -1))
    gv = np.fft.fft2(grad_out.v.data, axes=(-2, -1))
    scale = 1.0 / (h * w)

    physical = {}
    for name, (duu, duv, dvu, dvv) in derivs.items():
        acc = np.sum((duu[None] * a + duv[None] * b) * np.conj(gu)) + np.sum(
            (dvu[None] * a + dvv[None] * b) * np.conj(gv)
        )
        physical[name] = scale * float(acc.real)

    return ParamGrads(
        raw_velocity=physical["velocity"] * sigmoid(layer_params.raw_velocity),
        raw_damping=physical["damping"] * sigmoid(layer_params.raw_damping),
        raw_time=physical["time"] * sigmoid(layer_params.raw_time),
    )
