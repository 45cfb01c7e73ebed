"""
The reconstruction kernel in one dimension
==========================================

Tabulates phi_alpha(0, t, 0) for alpha = 0.2 and prints the critical points.
Pipe the CSV into any plotting tool to see the sharp peak and the two shallow
negative lobes.
"""

import numpy as np

from abelmeans import KernelParams, phi, profile

params = KernelParams(0.2)
prof = profile(params, (0.0, 0.0), 0.0)

# The peak sits at t = beta and grows like 1/alpha^2.
print(f"peak at t={prof.t_max:g}, value {prof.peak_value:.6f}")

# Zeros at beta -+ alpha, minima at beta -+ alpha*sqrt(3), each -1/8 of the peak.
print(f"zeros at {prof.zero_crossings[0]:g} and {prof.zero_crossings[1]:g}")
print(f"minima at {prof.t_min_left:.6f} and {prof.t_min_right:.6f}, value {prof.min_value:.6f}")
print(f"min / max = {prof.min_value / prof.peak_value:g}")

# Shrinking alpha makes the peak taller and narrower, which is what breaks
# a fixed-step t-rule.
for alpha in (1.0, 0.2, 0.05, 0.01):
    p = profile(KernelParams(alpha), (0.0, 0.0), 0.0)
    print(f"alpha={alpha:<5} peak={p.peak_value:12.4f} zeros at +-{p.zero_crossings[1]:g}")

t = np.linspace(-1.0, 1.0, 401)
np.savetxt("kernel_profile.csv", np.column_stack([t, phi(params, (0.0, 0.0), t, 0.0)]),
           delimiter=",", header="t,phi", comments="")
print("wrote kernel_profile.csv")
