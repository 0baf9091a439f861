"""Weak-value amplification of a tiny birefringent walk-off."""
import numpy as np

from weakphase import birefringence_sim as bs
from weakphase import polarization as pol

probe = bs.default_probe()  # sigma_x = 1, so the momentum spread is 0.5
eps = 1e-3

# %%
# The crystal shifts |H> and |V> apart by eps.  Pre-selecting |S> and
# post-selecting a state close to orthogonal makes the beam centroid move
# by about eps / tan(theta), which is far more than eps.
print(" theta     exact centroid   eps/tan(theta)   zero model      P(post)")
for theta in (0.3, 0.1, 0.03, 0.01):
    r = bs.measure_displacement(bs.CrystalScenario(probe, eps, theta))
    print(f"{theta:6.2f}   {r.exact_centroid:.6e}   {r.weak_prediction:.6e}   "
          f"{r.zero_model_centroid:.6e}   {r.post_selection_probability:.3e}")

# %%
# The amplification is the weak value of sigma_z, and post-selection pays for
# it in probability.
theta = np.pi / 10
print(f"weak value at pi/10: {pol.weak_value(pol.S, pol.d_theta(theta), pol.SIGMA_Z).real:.5f}")

# %%
# Seen through the spectrum, the effect is a zero of the final amplitude
# parked at -i theta / eps.  Near p = 0 its phase is linear with slope
# -eps / tan(theta), and that slope is the displacement.
h = 1e-4
slope = (bs.amplitude_phase_factors(eps, 0.1, h)[1] - bs.amplitude_phase_factors(eps, 0.1, -h)[1]) / (2 * h)
print(f"phase slope at p=0: {slope:.6e} (expected {-eps / np.tan(0.1):.6e})")
