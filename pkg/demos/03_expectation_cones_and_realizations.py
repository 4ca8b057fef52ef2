"""Visualize the expectation-error cones and some admissible realizations.

The growth-expectation error p1 lives in a symmetric cone around zero with
half-width |y1|/sqrt(2); the inflation-expectation error p2 lives in the
one-sided cone between 0 and y2.  Both cones are exactly the quadratic
constraint sets used by the synthesis certificates, and the oscillatory
sine forms trace admissible paths inside them.
"""

from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from gcgames import MacroParams, build_canonical, canonical_cones
from gcgames.game import omega_membership
from gcgames.uncertainty import cone_interval, eval_p1_sin, eval_p2_sin

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

params = MacroParams()
model = build_canonical(params)
sym_cone, one_cone = canonical_cones(params)

ys = np.linspace(-1.0, 1.0, 2001)
fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))

bounds1 = np.array([cone_interval(sym_cone, y) for y in ys])
ax1.fill_between(ys, bounds1[:, 0], bounds1[:, 1], alpha=0.25,
                 label="admissible set")
ax1.plot(ys, [eval_p1_sin(y) for y in ys], linewidth=0.9,
         label="oscillatory realization")
ax1.set_xlabel("uncertain output y1")
ax1.set_ylabel("p1")
ax1.set_title("symmetric cone (growth expectations)")
ax1.legend()
ax1.grid(alpha=0.3)

bounds2 = np.array([cone_interval(one_cone, y) for y in ys])
ax2.fill_between(ys, bounds2[:, 0], bounds2[:, 1], alpha=0.25,
                 label="admissible set")
ax2.plot(ys, [eval_p2_sin(y) for y in ys], linewidth=0.9,
         label="oscillatory realization")
ax2.set_xlabel("uncertain output y2")
ax2.set_ylabel("p2")
ax2.set_title("one-sided cone (inflation expectations)")
ax2.legend()
ax2.grid(alpha=0.3)

fig.tight_layout()
fig.savefig(OUT / "expectation_cones.svg", metadata={"Date": None})
print(f"cone figure written to {OUT / 'expectation_cones.svg'}")

# The cones and the quadratic constraint sets are the same thing: sample
# random (state, disturbance) pairs and compare memberships.
rng = np.random.default_rng(1)
agree = 0
trials = 20_000
for _ in range(trials):
    x = rng.uniform(-1, 1, size=2)
    p = rng.uniform(-0.3, 0.3)
    y = sym_cone.output(x)
    quad = omega_membership(model.blocks[0], [p], [y - p])
    lo, hi = cone_interval(sym_cone, y)
    agree += quad == (lo - 1e-12 <= p <= hi + 1e-12)
print(f"membership agreement on block 1: {agree}/{trials}")
