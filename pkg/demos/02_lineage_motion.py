"""A single ancestral lineage is a compound Poisson walk.

Tracing one locus of one individual backward in time, the lineage jumps
whenever an event covers it and it falls in the replaced fraction u.
Both the jump rate and the displacement variance have closed forms; we
check them against a long simulated run, with and without the rare
large events.
"""

import math

import numpy as np

from slfv import _kernels as K
from slfv.observables import single_lineage_variance_rate
from slfv.params import ModelParams

BASE = dict(
    L=256.0, alpha=0.5, R_s=1.0, R_B=1.0, u_s=0.3, u_B=0.3, r=0.1,
    lambda_s={2: 1.0}, lambda_B={2: 1.0},
)

for label, rho in (("small events only", math.inf), ("with large events", 64.0)):
    params = ModelParams(rho=rho, **BASE)
    kp = K.kernel_params(params)
    horizon = 10**5
    rng = np.random.Generator(np.random.Philox(key=3))
    n_s, n_l, sdx2, sdy2, _ = K.run_single_motion(
        horizon, kp, K.max_parents(kp), rng
    )
    print(f"{label}:")
    print(
        f"  small-jump rate {n_s / horizon:.4f} "
        f"(closed form u_s pi R_s^2 = {0.3 * math.pi:.4f})"
    )
    if n_l:
        print(
            f"  large-jump rate {n_l / horizon:.5f} "
            f"(closed form u_B pi R_B^2/rho = {0.3 * math.pi / 64:.5f})"
        )
    var = 0.5 * (sdx2 + sdy2) / horizon
    print(
        f"  per-coordinate displacement variance/time {var:.4f} "
        f"(closed form {single_lineage_variance_rate(params):.4f})\n"
    )
