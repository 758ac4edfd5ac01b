"""Brute-force Monte Carlo of the 14-dimensional main graph weight.

This only shows that the estimator runs and how its error behaves; at these
sample sizes the error bar is far too wide to tell the constant apart from
nearby rationals.
"""

# %%
import time

from kgweight.eulersums import final_constant
from kgweight.geometry import mc_weight
from kgweight.graphs import build_main_graph, is_lie_graph

g = build_main_graph()
print(len(g.edges), "edges, Lie graph:", is_lie_graph(g))
print("semi-analytic representative:", final_constant())

# %%
for samples in (10**4, 10**5, 10**6):
    t0 = time.perf_counter()
    est = mc_weight(g, samples, seed=7, ordered=True)
    print(f"{samples:>8}  {est.value:+.3e} +- {est.stderr:.1e}  ({time.perf_counter() - t0:.1f} s)")
