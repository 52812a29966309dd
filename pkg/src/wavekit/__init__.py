"""wavekit: spectral damped-wave propagation with PDE oracles, a
differentiable operator layer, a toy hierarchical backbone, and benchmarks."""

__version__ = "0.1.0"

from .field import (
    FeatureField,
    SpectralField,
    band_limit,
    modal_band_field,
    random_field,
)
from .kernel import (
    FrequencyGrid,
    PropagationKernel,
    RetentionReport,
    WaveParams,
    classify_regime,
    coefficient_derivatives,
    critical_band,
    damped_frequency,
    frequency_grid,
    heat_kernel,
    kernel_coefficients,
    modal_solution,
    overdamped_fraction,
    spectral_retention,
)
from .operator import (
    ParamGrads,
    VelocityInit,
    WpoLayerParams,
    WpoState,
    apply_kernel,
    sigmoid,
    softplus,
    softplus_inverse,
    velocity_init,
    wave_energy,
    wpo_adjoint,
    wpo_forward,
    wpo_param_grads,
)
from .oracle import (
    FdConfig,
    cfl_limit_heat,
    cfl_limit_wave,
    convergence_study,
    fd_heat_solve,
    fd_symbol_grid,
    fd_wave_solve,
    matched_reference,
    rel_l2,
)
from .tensorio import (
    TensorFormatError,
    load_tensor,
    read_pgm,
    save_tensor,
    write_pgm,
)
from .transforms import dst2, fft2, idst2, ifft2

__all__ = [
    "__version__",
    "FeatureField",
    "SpectralField",
    "band_limit",
    "modal_band_field",
    "random_field",
    "FrequencyGrid",
    "PropagationKernel",
    "RetentionReport",
    "WaveParams",
    "classify_regime",
    "coefficient_derivatives",
    "critical_band",
    "damped_frequency",
    "frequency_grid",
    "heat_kernel",
    "kernel_coefficients",
    "modal_solution",
    "overdamped_fraction",
    "spectral_retention",
    "ParamGrads",
    "VelocityInit",
    "WpoLayerParams",
    "WpoState",
    "apply_kernel",
    "sigmoid",
    "softplus",
    "softplus_inverse",
    "velocity_init",
    "wave_energy",
    "wpo_adjoint",
    "wpo_forward",
    "wpo_param_grads",
    "FdConfig",
    "cfl_limit_heat",
    "cfl_limit_wave",
    "convergence_study",
    "fd_heat_solve",
    "fd_symbol_grid",
    "fd_wave_solve",
    "matched_reference",
    "rel_l2",
    "TensorFormatError",
    "load_tensor",
    "read_pgm",
    "save_tensor",
    "write_pgm",
    "dst2",
    "fft2",
    "idst2",
    "ifft2",
]
