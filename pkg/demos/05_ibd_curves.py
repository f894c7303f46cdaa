"""Identity-by-descent curves and where they vanish.

Runs the closed-form engine at a large-torus parameter point and prints
the decay of IBD with the sampling exponent beta, at one locus and at
both loci, with and without the rare large events. Large events extend
geographic correlations to much larger separations.
"""

import numpy as np

from slfv import theory
from slfv.params import gamma_star

L, alpha, c_L = 1e5, 0.1, 0.01
theta = 1e-3

print("single-locus IBD (leading terms):")
print(f"{'beta':>6} {'with large':>12} {'small only':>12}")
for b in np.linspace(0.15, 0.55, 9):
    rows = theory.ibd_single_curves([b], theta, c_L, L, alpha)[0]
    print(f"{b:6.2f} {rows[1]:12.5f} {rows[2]:12.5f}")

v_large = theory.vanishing_point(
    lambda b: theory.decay_factor_large(b, theta, c_L, L), alpha + 1e-6, 1.0
)
v_small = theory.vanishing_point(
    lambda b: theory.decay_factor_small(b, theta, L), alpha + 1e-6, 1.0
)
print(f"\nvanishing points (1% decay threshold): "
      f"with large events {v_large:.3f}, small only {v_small:.3f}")

gs = gamma_star(L, np.log(L) / L**0.4)
print(f"\ntwo-locus IBD at both loci (crossover exponent gamma):")
print(f"{'beta':>6} {'gamma>=1':>10} {'gamma=0.4':>10} {'gamma<=a':>10} "
      f"{'no large':>10}")
for b in np.linspace(0.15, 0.35, 5):
    row = theory.ibd_double_curves([b], theta, theta, c_L, L, alpha, 0.4, gs)[0]
    print(f"{b:6.2f} {row[1]:10.5f} {row[2]:10.5f} {row[3]:10.5f} {row[4]:10.5f}")
