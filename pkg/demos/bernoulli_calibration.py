"""Monte Carlo weights of the Bernoulli chain graphs against B_n(x)/n!.

The one- and two-vertex chains fix the orientation convention; this walks
through the propagator, one density evaluation and the Monte Carlo estimates.
"""

# %%
import math

import numpy as np

from kgweight.geometry import (
    ORIENTATION_PER_VERTEX,
    Configuration,
    hyperbolic_angle,
    mc_weight,
    weight_form_value,
)
from kgweight.graphs import build_bernoulli_graph, known_weight, render
from kgweight.specfun import bernoulli_poly

# %% The normalized angle at the origin is just the argument of the target.
print(hyperbolic_angle(0, 0.3, boundary=True))
print(hyperbolic_angle(0.5, 0.25, boundary=True))  # 1/4 + arg(1 + i/2)/pi

# %% The chain with two interior vertices.
g2 = build_bernoulli_graph(2)
print(render(g2))
print(known_weight(g2))

# %% One density value; the boundary point is held fixed, so only a1, a2 move.
c = Configuration({"z": 0j, "a1": 0.3 + 0.2j, "a2": -0.4 + 0.1j}, {"P": 0.5})
print("density", weight_form_value(g2, c), "orientation per vertex", ORIENTATION_PER_VERTEX)

# %% Monte Carlo over the free vertices at several boundary angles.
for n in (1, 2):
    g = build_bernoulli_graph(n)
    for x in np.linspace(0.1, 0.9, 5):
        est = mc_weight(g, 200_000, seed=1, fixed_boundary={"P": float(x)})
        exact = float(bernoulli_poly(n)(float(x))) / math.factorial(n)
        print(f"n={n} x={x:.1f}  mc={est.value:+.5f} +- {est.stderr:.1e}  exact={exact:+.5f}")
