"""Torus geometry and the restricted event stream.

Positions live on a square torus; distances use the minimal image, and
every reproduction event is a disc. The lens area of two overlapping
discs is what controls how often one event covers two lineages, so we
look at it first, then watch the event stream for a pair of marks.
"""

import numpy as np

from slfv.events import next_event
from slfv.geometry import TorusPoint, displacement, distance, lens_area, wrap
from slfv.params import ModelParams

# --- minimal-image arithmetic ------------------------------------------
L = 64.0
a = wrap((60.0, 2.0), L)
b = wrap((3.0, 62.0), L)
print(f"a = {a}, b = {b}")
print(f"displacement a-b (wraps around the seam): {displacement(a, b, L)}")
print(f"distance: {distance(a, b, L):.4f}  (direct difference would be ~57)")

# --- the lens area that drives pairwise coverage -----------------------
print("\nlens area of two unit discs, center distance d:")
for d in (0.0, 0.5, 1.0, 1.5, 2.0):
    print(f"  d={d}: {lens_area(1.0, d):.6f}")

# --- events covering at least one of two marks -------------------------
params = ModelParams(
    L=L, alpha=0.5, R_s=1.0, R_B=1.0, u_s=0.3, u_B=0.3, rho=16.0, r=0.1,
    lambda_s={2: 1.0}, lambda_B={2: 1.0},
)
rng = np.random.Generator(np.random.Philox(key=1))
marks = [TorusPoint(20.0, 20.0), TorusPoint(21.0, 20.0)]
print(f"\nfirst 5 events covering a mark of {[tuple(m) for m in marks]}:")
t = 0.0
for _ in range(5):
    ev = next_event(marks, params, rng)
    t += ev.dt
    print(
        f"  t={t:7.3f}  {ev.kind:5s} at ({ev.center.x:6.2f},{ev.center.y:6.2f}) "
        f"radius {ev.radius:4.1f}, {ev.num_parents} parents"
    )

# the small-event rate for two overlapping unit balls is the union area
horizon, n_small = 2000.0, 0
rng = np.random.Generator(np.random.Philox(key=2))
t = 0.0
while True:
    ev = next_event(marks, params, rng)
    t += ev.dt
    if t > horizon:
        break
    n_small += ev.kind == "small"
expected = 2 * np.pi - lens_area(1.0, distance(*marks, L))
print(f"\nsmall-event rate {n_small / horizon:.4f} vs union area {expected:.4f}")
