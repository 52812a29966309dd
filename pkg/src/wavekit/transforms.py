"""Spatial <-> frequency transforms with pinned conventions.

FFT pair: numpy default normalization (unnormalized forward, 1/(H*W) on the
inverse), applied per channel over the last two axes. Sine pair: orthogonal
DST-I content normalized so a unit-amplitude sine mode maps to coefficient
1.0 in its bin; bin (ky, kx) holds mode (ky+1, kx+1).
"""
from __future__ import annotations

import numpy as np
import scipy.fft

from .field import FeatureField, SpectralField

__all__ = ["fft2", "ifft2", "dst2", "idst2"]

# Max tolerated imaginary magnitude when a spectrum is claimed to produce a
# real field.
_IMAG_TOL = 1e-8


def fft2(field: FeatureField) -> SpectralField:
    """Forward 2D FFT per channel (unnormalized)."""
    return SpectralField(np.fft.fft2(field.data, axes=(-2, -1)))


def ifft2(spectral: SpectralField) -> FeatureField:
    """Inverse 2D FFT per channel (1/(H*W) normalization).

    The spectrum must be conjugate-symmetric so the result is real; the
    imaginary residue is asserted below 1e-8 max-abs and then discarded.
    """
    out = np.fft.ifft2(spectral.data, axes=(-2, -1))
    residue = float(np.abs(out.imag).max())
    if residue > _IMAG_TOL:
        raise ValueError(
            "spectrum is not conjugate-symmetric: max imaginary residue "
            f"{residue:.3e} exceeds {_IMAG_TOL:.0e}"
        )
    return FeatureField(out.real.copy())


def _dst_norm(height: int, width: int) -> float:
    return float((height + 1) * (width + 1))


def dst2(field: FeatureField) -> SpectralField:
    """Forward 2D type-I sine transform per channel, amplitude-normalized.

    Requires height, width >= 2 (an interior Dirichlet grid). A field equal
    to a single sine mode yields 1.0 in that mode's bin and 0 elsewhere.
    """
    if field.height < 2 or field.width < 2:
        raise ValueError(
            f"sine transform needs height, width >= 2; got "
            f"{field.height}x{field.width}"
        )
    coeffs = scipy.fft.dstn(field.data, type=1, axes=(-2, -1))
    coeffs = coeffs / _dst_norm(field.height, field.width)
    return SpectralField(coeffs.astype(np.complex128))


def idst2(spectral: SpectralField) -> FeatureField:
    """Inverse of dst2; imaginary parts must be below 1e-8 max-abs."""
    if spectral.height < 2 or spectral.width < 2:
        raise ValueError(
            f"sine transform needs height, width >= 2; got "
            f"{spectral.height}x{spectral.width}"
        )
    residue = float(np.abs(spectral.data.imag).max())
    if residue > _IMAG_TOL:
        raise ValueError(
            f"sine coefficients must be real: max imaginary part {residue:.3e} "
            f"exceeds {_IMAG_TOL:.0e}"
        )
    out = scipy.fft.dstn(spectral.data.real, type=1, axes=(-2, -1)) / 4.0
    return FeatureField(out)
