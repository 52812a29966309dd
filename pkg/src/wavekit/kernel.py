"""Closed-form frequency-domain propagator for the damped wave equation.

For u_tt + alpha*u_t = velocity^2 * laplacian(u), each frequency bin evolves
as an independent damped harmonic oscillator with squared natural frequency
omega0_sq = velocity^2 * (omega_x^2 + omega_y^2). Advancing (u_hat, v_hat) by
time t is an exact 2x2 real linear map per bin:

    [u_hat(t)]   [uu  uv] [u_hat(0)]
    [v_hat(t)] = [vu  vv] [v_hat(0)]

The map is the matrix exponential of t*[[0, 1], [-omega0_sq, -alpha]], so it
satisfies the semigroup law M(t1+t2) = M(t2) M(t1) and reduces to the
identity at t = 0.

With gamma = alpha/2, the sign of q = omega0_sq - gamma^2 selects the
regime: oscillatory decay (underdamped), double-root decay (critical), or
pure decay (overdamped). All three are branches of the same entire
functions of q, so the coefficients are continuous across regime borders;
a small band around q = 0 is classified critical to keep the evaluation
well-conditioned. The overdamped branch is evaluated as split exponentials
0.5*(e^{(mu-gamma)t} +- e^{-(mu+gamma)t}) with mu <= gamma, so no
intermediate overflows for any admissible parameters.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .field import FeatureField, SpectralField
from .transforms import dst2, idst2

__all__ = [
    "WaveParams",
    "FrequencyGrid",
    "PropagationKernel",
    "frequency_grid",
    "critical_band",
    "classify_regime",
    "damped_frequency",
    "kernel_coefficients",
    "coefficient_derivatives",
    "heat_kernel",
    "modal_solution",
    "spectral_retention",
    "overdamped_fraction",
    "RetentionReport",
    "REGIME_NAMES",
    "REGIME_UNDERDAMPED",
    "REGIME_CRITICAL",
    "REGIME_OVERDAMPED",
]

REGIME_UNDERDAMPED = 0
REGIME_CRITICAL = 1
REGIME_OVERDAMPED = 2
REGIME_NAMES = ("underdamped", "critical", "overdamped")


@dataclass(frozen=True)
class WaveParams:
    """Physical parameters of one propagation: velocity > 0, damping >= 0,
    time >= 0."""

    velocity: float
    damping: float
    time: float

    def __post_init__(self) -> None:
        for name in ("velocity", "damping", "time"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite; got {value}")
        if self.velocity <= 0:
            raise ValueError(f"velocity must be positive; got {self.velocity}")
        if self.damping < 0:
            raise ValueError(f"damping must be >= 0; got {self.damping}")
        if self.time < 0:
            raise ValueError(f"time must be >= 0; got {self.time}")

    @property
    def gamma(self) -> float:
        """Half the damping coefficient; the spectral decay rate."""
        return 0.5 * self.damping


@dataclass(frozen=True, eq=False)
class FrequencyGrid:
    """Angular frequencies per axis for one boundary condition.

    omega_y has one entry per row, omega_x one per column. For "periodic"
    these are the FFT bin frequencies 2*pi*k/N (negative in the upper
    half); for "dirichlet" the sine-mode frequencies n*pi/(N+1), n >= 1,
    where bin index k holds mode n = k + 1.
    """

    omega_y: np.ndarray
    omega_x: np.ndarray
    boundary: str = "periodic"

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "omega_y", np.ascontiguousarray(self.omega_y, dtype=np.float64)
        )
        object.__setattr__(
            self, "omega_x", np.ascontiguousarray(self.omega_x, dtype=np.float64)
        )
        if self.omega_y.ndim != 1 or self.omega_x.ndim != 1:
            raise ValueError("omega_y and omega_x must be 1D")

    @property
    def height(self) -> int:
        return self.omega_y.size

    @property
    def width(self) -> int:
        return self.omega_x.size

    def symbol(self) -> np.ndarray:
        """(H, W) plane of omega_x^2 + omega_y^2."""
        return self.omega_y[:, None] ** 2 + self.omega_x[None, :] ** 2


def frequency_grid(height: int, width: int, boundary: str = "periodic") -> FrequencyGrid:
    """Build the frequency grid for an H x W field under the given boundary."""
    if height < 1 or width < 1:
        raise ValueError(f"grid dimensions must be positive; got {height}x{width}")
    if boundary == "periodic":
        wy = 2.0 * np.pi * np.fft.fftfreq(height)
        wx = 2.0 * np.pi * np.fft.fftfreq(width)
    elif boundary == "dirichlet":
        wy = np.pi * np.arange(1, height + 1) / (height + 1)
        wx = np.pi * np.arange(1, width + 1) / (width + 1)
    else:
        raise ValueError(
            f"boundary must be 'periodic' or 'dirichlet'; got {boundary!r}"
        )
    return FrequencyGrid(omega_y=wy, omega_x=wx, boundary=boundary)


def critical_band(damping: float) -> float:
    """Half-width of the q band treated as critically damped."""
    gamma = 0.5 * damping
    return 1e-9 * max(1.0, gamma * gamma)


def classify_regime(params: WaveParams, omega0_sq: float) -> str:
    """Regime of a single mode with the given squared natural frequency."""
    q = omega0_sq - params.gamma**2
    band = critical_band(params.damping)
    if q > band:
        return REGIME_NAMES[REGIME_UNDERDAMPED]
    if q < -band:
        return REGIME_NAMES[REGIME_OVERDAMPED]
    return REGIME_NAMES[REGIME_CRITICAL]


def damped_frequency(params: WaveParams, omega0_sq: float) -> float:
    """Oscillation frequency sqrt(omega0_sq - gamma^2) of an underdamped mode.

    Raises ValueError for critical or overdamped modes.
    """
    regime = classify_regime(params, omega0_sq)
    if regime != REGIME_NAMES[REGIME_UNDERDAMPED]:
        raise ValueError(
            f"mode with omega0_sq={omega0_sq} is {regime}, not underdamped; "
            "no real oscillation frequency"
        )
    return math.sqrt(omega0_sq - params.gamma**2)


@dataclass(frozen=True, eq=False)
class PropagationKernel:
    """Per-frequency 2x2 state-transition coefficients, each an (H, W) plane.

    uu: output u from input u      uv: output u from input v
    vu: output v from input u      vv: output v from input v

    regimes holds the per-bin regime code (0 underdamped, 1 critical,
    2 overdamped); omega0_sq the per-bin squared natural frequency.
    """

    uu: np.ndarray
    uv: np.ndarray
    vu: np.ndarray
    vv: np.ndarray
    regimes: np.ndarray
    omega0_sq: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.uu.shape


def _regime_codes(q: np.ndarray, gamma: float) -> np.ndarray:
    band = 1e-9 * max(1.0, gamma * gamma)
    codes = np.full(q.shape, REGIME_CRITICAL, dtype=np.uint8)
    codes[q > band] = REGIME_UNDERDAMPED
    codes[q < -band] = REGIME_OVERDAMPED
    return codes


def _ec_es(omega0_sq: np.ndarray, gamma: float, t: float):
    """Damped basis functions EC = e^{-gamma t} C(q, t), ES = e^{-gamma t} S(q, t).

    C and S are the entire functions with C = cos(sqrt(q) t) and
    S = sin(sqrt(q) t)/sqrt(q) for q > 0, their hyperbolic continuations for
    q < 0, and limits 1 and t at q = 0. Returns (EC, ES, regime codes).
    """
    q = omega0_sq - gamma * gamma
    codes = _regime_codes(q, gamma)
    ec = np.empty_like(q)
    es = np.empty_like(q)

    under = codes == REGIME_UNDERDAMPED
    if under.any():
        wd = np.sqrt(q[under])
        damp = math.exp(-gamma * t)
        ec[under] = damp * np.cos(wd * t)
        es[under] = damp * np.sin(wd * t) / wd

    over = codes == REGIME_OVERDAMPED
    if over.any():
        mu = np.sqrt(-q[over])
        # mu <= gamma here, so both exponents are <= 0: no overflow.
        grow = np.exp((mu - gamma) * t)
        decay = np.exp(-(mu + gamma) * t)
        ec[over] = 0.5 * (grow + decay)
        es[over] = 0.5 * (grow - decay) / mu

    crit = codes == REGIME_CRITICAL
    if crit.any():
        damp = math.exp(-gamma * t)
        ec[crit] = damp
        es[crit] = damp * t

    return ec, es, codes


def _plane_coefficients(omega0_sq: np.ndarray, gamma: float, t: float):
    """The four transition planes from the damped basis functions."""
    ec, es, codes = _ec_es(omega0_sq, gamma, t)
    uu = ec + gamma * es
    uv = es
    vu = -omega0_sq * es
    vv = ec - gamma * es
    return uu, uv, vu, vv, codes


def kernel_coefficients(params: WaveParams, grid: FrequencyGrid) -> PropagationKernel:
    """Exact per-bin transition coefficients for advancing by params.time."""
    omega0_sq = params.velocity**2 * grid.symbol()
    uu, uv, vu, vv, codes = _plane_coefficients(omega0_sq, params.gamma, params.time)
    for name, plane in (("uu", uu), ("uv", uv), ("vu", vu), ("vv", vv)):
        if not np.isfinite(plane).all():
            ky, kx = np.argwhere(~np.isfinite(plane))[0]
            raise AssertionError(
                f"internal: non-finite {name} coefficient at bin "
                f"(ky={ky}, kx={kx}), regime "
                f"{REGIME_NAMES[codes[ky, kx]]}"
            )
    return PropagationKernel(
        uu=uu, uv=uv, vu=vu, vv=vv, regimes=codes, omega0_sq=omega0_sq
    )


def _es_dq(ec: np.ndarray, es: np.ndarray, q: np.ndarray, t: float) -> np.ndarray:
    """d(ES)/dq, switching to a Taylor branch where q t^2 is tiny.

    Away from q = 0: dS/dq = (t C - S) / (2 q). Near it, the series
    dS/dq = -t^3/6 + q t^5/60 + O(q^2 t^7) avoids the 0/0 cancellation.
    """
    out = np.empty_like(q)
    small = np.abs(q) * t * t < 1e-4
    big = ~small
    out[big] = (t * ec[big] - es[big]) / (2.0 * q[big])
    if small.any():
        # Multiply the series by e^{-gamma t}, which is es/t when t > 0.
        if t > 0.0:
            damp = es[small] / t
        else:
            damp = np.ones(int(small.sum()))
        out[small] = damp * (-(t**3) / 6.0 + q[small] * t**5 / 60.0)
    return out


def coefficient_derivatives(
    params: WaveParams, grid: FrequencyGrid
) -> dict[str, tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]]:
    """Partial derivatives of the four transition planes.

    Keys "velocity", "damping", "time", each mapping to planes
    (d_uu, d_uv, d_vu, d_vv). The time derivative uses the exact identity
    dM/dt = A M with A = [[0, 1], [-omega0_sq, -damping]]. Velocity and
    damping derivatives are analytic through q = 0; bins inside the
    critical band are additionally overwritten with central differences
    of the coefficient planes, which is the defining behaviour there.
    """
    v, alpha, t = params.velocity, params.damping, params.time
    gamma = params.gamma
    symbol = grid.symbol()
    omega0_sq = v * v * symbol
    q = omega0_sq - gamma * gamma

    ec, es, codes = _ec_es(omega0_sq, gamma, t)
    uu = ec + gamma * es
    uv = es
    vu = -omega0_sq * es
    vv = ec - gamma * es

    ec_dq = -0.5 * t * es
    es_dq = _es_dq(ec, es, q, t)

    # With W = omega0_sq: dq/dW = 1 at fixed gamma.
    d_w_uu = ec_dq + gamma * es_dq
    d_w_uv = es_dq
    d_w_vu = -(es + omega0_sq * es_dq)
    d_w_vv = ec_dq - gamma * es_dq
    chain_v = 2.0 * v * symbol  # dW/dvelocity
    d_velocity = (
        d_w_uu * chain_v,
        d_w_uv * chain_v,
        d_w_vu * chain_v,
        d_w_vv * chain_v,
    )

    # d/dgamma at fixed W: dq/dgamma = -2 gamma, dE/dgamma = -t E.
    d_g_uu = -t * uu + es - 2.0 * gamma * (ec_dq + gamma * es_dq)
    d_g_uv = -t * uv - 2.0 * gamma * es_dq
    d_g_vu = -t * vu + 2.0 * gamma * omega0_sq * es_dq
    d_g_vv = -t * vv - 2.0 * gamma * ec_dq - es + 2.0 * gamma * gamma * es_dq
    d_damping = (0.5 * d_g_uu, 0.5 * d_g_uv, 0.5 * d_g_vu, 0.5 * d_g_vv)

    d_time = (vu, vv, -omega0_sq * uu - alpha * vu, -omega0_sq * uv - alpha * vv)

    crit = codes == REGIME_CRITICAL
    if crit.any():
        d_velocity = _fd_override(d_velocity, crit, symbol, gamma, t, v, "velocity")
        d_damping = _fd_override(d_damping, crit, symbol, gamma, t, v, "damping")

    return {"velocity": d_velocity, "damping": d_damping, "time": d_time}


def _fd_override(planes, mask, symbol, gamma, t, v, which):
    """Replace in-band bins with central differences of the coefficients."""
    if which == "velocity":
        h = 1e-6 * max(1.0, v)
        hi = _plane_coefficients((v + h) ** 2 * symbol, gamma, t)[:4]
        lo = _plane_coefficients((v - h) ** 2 * symbol, gamma, t)[:4]
    else:
        h = 1e-6 * max(1.0, 2.0 * gamma)
        # gamma may go slightly negative here; the formulas stay valid.
        hi = _plane_coefficients(v * v * symbol, gamma + 0.5 * h, t)[:4]
        lo = _plane_coefficients(v * v * symbol, gamma - 0.5 * h, t)[:4]
    out = []
    for plane, p_hi, p_lo in zip(planes, hi, lo):
        patched = plane.copy()
        patched[mask] = (p_hi[mask] - p_lo[mask]) / (2.0 * h)
        out.append(patched)
    return tuple(out)


def heat_kernel(conductivity: float, time: float, grid: FrequencyGrid) -> np.ndarray:
    """Per-bin multiplier e^{-conductivity*(omega_x^2+omega_y^2)*time} for
    the diffusion equation u_t = conductivity * laplacian(u)."""
    if conductivity <= 0:
        raise ValueError(f"conductivity must be positive; got {conductivity}")
    if time < 0:
        raise ValueError(f"time must be >= 0; got {time}")
    return np.exp(-conductivity * time * grid.symbol())


def modal_solution(u0: FeatureField, v0: FeatureField, params: WaveParams) -> FeatureField:
    """Exact solution on an interior Dirichlet grid via the sine basis.

    Every mode must be underdamped; the first critical or overdamped mode
    (n, m), 1-indexed, is named in the error. Returns the displacement at
    params.time.
    """
    if u0.shape != v0.shape:
        raise ValueError(f"u0/v0 shape mismatch: {u0.shape} vs {v0.shape}")
    grid = frequency_grid(u0.height, u0.width, "dirichlet")
    omega0_sq = params.velocity**2 * grid.symbol()
    q = omega0_sq - params.gamma**2
    band = critical_band(params.damping)
    if (q <= band).any():
        ky, kx = np.argwhere(q <= band)[0]
        regime = classify_regime(params, float(omega0_sq[ky, kx]))
        raise ValueError(
            f"sine mode (n={ky + 1}, m={kx + 1}) is {regime}; the modal path "
            "requires every mode underdamped"
        )
    kern = kernel_coefficients(params, grid)
    a = dst2(u0).data.real
    b = dst2(v0).data.real
    coeffs = kern.uu[None] * a + kern.uv[None] * b
    return idst2(SpectralField(coeffs.astype(np.complex128)))


class RetentionReport(NamedTuple):
    """Gains of one frequency under wave propagation vs diffusion.

    wave_gain is the instantaneous u->u coefficient magnitude (it crosses
    zero as the mode oscillates); wave_envelope = e^{-damping/2 * time} is
    its decay envelope, and ratio = wave_envelope / heat_gain.
    """

    wave_gain: float
    heat_gain: float
    ratio: float
    wave_envelope: float


def spectral_retention(
    params: WaveParams,
    conductivity: float,
    omega0_sq: float,
    time: float | None = None,
) -> RetentionReport:
    """Compare how much of one frequency survives wave propagation vs
    diffusion over the same interval.

    omega0_sq is the wave's squared natural frequency v^2*|omega|^2; the
    heat multiplier uses the raw |omega|^2 = omega0_sq / velocity^2 so both
    sides see the same spatial frequency.
    """
    if conductivity <= 0:
        raise ValueError(f"conductivity must be positive; got {conductivity}")
    if omega0_sq < 0:
        raise ValueError(f"omega0_sq must be >= 0; got {omega0_sq}")
    t = params.time if time is None else float(time)
    if t < 0:
        raise ValueError(f"time must be >= 0; got {t}")
    w = np.asarray([[omega0_sq]], dtype=np.float64)
    uu = _plane_coefficients(w, params.gamma, t)[0][0, 0]
    omega_sq = omega0_sq / params.velocity**2
    heat_gain = float(np.exp(-conductivity * omega_sq * t))
    envelope = math.exp(-params.gamma * t)
    return RetentionReport(
        wave_gain=float(abs(uu)),
        heat_gain=heat_gain,
        ratio=envelope / heat_gain,
        wave_envelope=envelope,
    )


def overdamped_fraction(params: WaveParams, grid: FrequencyGrid) -> float:
    """Fraction of the grid's bins that are overdamped at these parameters."""
    omega0_sq = params.velocity**2 * grid.symbol()
    q = omega0_sq - params.gamma**2
    band = critical_band(params.damping)
    return float((q < -band).sum() / q.size)
