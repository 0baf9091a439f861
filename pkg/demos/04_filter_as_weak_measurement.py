"""The exponential filter read as a weak measurement of position."""
import numpy as np

from weakphase.presets import chirped_gaussian, gaussian, point_mass
from weakphase.wavefield import Grid
from weakphase.weakvalue_bridge import bridge_residual, loglog_slope, position_weak_value

grid = Grid.spanning(12.0, 1024)
s = grid.x0 - 1.0
c_list = [1e-3, 3e-3, 1e-2, 3e-2, 1e-1]

# %%
# The filter exp(-c (x - s)) is exp(-i c A) with A = -i (X - s).  For small c
# the modulus ratio it causes at momentum p is exp(c Im<A>_w), where the weak
# value is taken between the object and the momentum state.
for name, field in (("gaussian", gaussian(grid)), ("chirped", chirped_gaussian(grid)),
                    ("point mass", point_mass(grid, 1.3))):
    exact = name == "point mass"
    res = [r.residual for r in bridge_residual(field, 0.0 if exact else s, c_list, 0.3)]
    note = "roundoff only" if exact else f"log-log slope {loglog_slope(c_list, res):.3f}"
    print(f"{name:10s}  residual at c=0.1: {res[-1]:.2e}   {note}")

# %%
# A point mass has an exact weak value, so its residual is roundoff.  For a
# Gaussian the imaginary part is s minus the centre.
wv = position_weak_value(gaussian(grid, center=0.8), 0.0, 0.3)
print(f"Gaussian at 0.8, s = 0.3: weak value {wv.real:+.2e} {wv.imag:+.6f}i")
