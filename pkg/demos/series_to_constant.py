"""From the exact series expansion to the final constant and its rational fit."""

# %%
import math

from kgweight import series as se
from kgweight.eulersums import euler_sum, euler_sum_closed, final_constant
from kgweight.pipeline import F_laurent, pair_zero_mode, rational_fit, semianalytic_parts
from kgweight.specfun import zeta_value

# %% The V^0 slice of the integrated triple product, low U-powers at N = 12.
g0 = se.v_zero_slice(se.set_cutoff_one(se.build_G(12)))
for m in range(-3, 4):
    if m in g0:
        print(m, g0[m])

# %% Pairing with the Li_4 Laurent coefficients keeps the U^0 term.
print(pair_zero_mode(F_laurent(12), g0))

# %% Exact part plus Euler sum tails.
parts = semianalytic_parts(100)
print("tail", parts.tail, "bound", parts.tail_bound)
print("value", parts.value, "closed form", final_constant())

# %% The Euler sums involved, numerically and in closed form.
for a, b, off in [(4, 2, 0), (4, 2, 1), (3, 3, 0), (1, 5, 0)]:
    res = euler_sum(a, b, off, 10**5)
    print((a, b, off), res.value, euler_sum_closed(a, b, off), res.tail_bound)

# %% Up to rationals the value is zeta(3)^2 / pi^6.
fit = rational_fit(parts.value, [1.0, zeta_value(3) ** 2 / math.pi**6])
print(fit)
