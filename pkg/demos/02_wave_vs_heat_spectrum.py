"""
Frequency-time decoupling
=========================

Diffusion multiplies each frequency by e^{-k|omega|^2 t}: the damping rate
grows with the square of the frequency, so fine detail dies first. Damped
wave propagation decays every frequency under the same envelope
e^{-alpha t / 2}; frequency only sets the oscillation rate. This table
walks up the spectrum at t = 1 and shows the two behaviours side by side.
"""

import math

from wavekit import WaveParams, spectral_retention

params = WaveParams(velocity=1.0, damping=0.1, time=1.0)

print("gain magnitude after t = 1 (v = 1, damping = 0.1, conductivity = 1)")
print(f"  {'|omega|':>8}  {'wave gain':>10}  {'wave envelope':>13}  {'heat gain':>10}  {'envelope/heat':>13}")
for omega in (0.0, 0.5, 1.0, 2.0, math.pi, 2 * math.pi):
    r = spectral_retention(params, conductivity=1.0, omega0_sq=omega**2)
    print(
        f"  {omega:>8.3f}  {r.wave_gain:>10.3e}  {r.wave_envelope:>13.3e}"
        f"  {r.heat_gain:>10.3e}  {r.ratio:>13.3e}"
    )

# The wave envelope column never moves: e^{-0.05} for every row. The wave
# gain wanders below it because the mode oscillates through zero, but it
# is bounded by the envelope and comes back. Heat gain falls doubly
# exponentially in |omega|; at |omega| = pi it is already ~5e-5, which is
# the low-pass behaviour that erases texture and edges.
r = spectral_retention(params, conductivity=1.0, omega0_sq=math.pi**2)
print(
    f"\nat |omega| = pi the wave envelope retains {r.wave_envelope:.3f} of the"
    f" mode\nwhile diffusion keeps {r.heat_gain:.2e}, a factor of {r.ratio:,.0f} less"
)
