# %% [markdown]
# # The ladder and the potential
#
# Each level n gets a frequency lambda_n with q(lambda_n) = 10^n, a window
# psi_n living on one decade of r, and inside it a well of depth lambda_n^2.

# %%
import math

import numpy as np

from logpole.ladder import FrequencyProfile, build_ladder, check_equiv_q
from logpole.potential import LevelWindow, PotentialModel

profile = FrequencyProfile(M=160.0)
ladder = build_ladder(profile, d=3, N=2, count=8)
print("n0 =", ladder.n0)
for e in ladder:
    print(f"n={e.n:2d}  lambda={e.lambda_n:.6e}  ratio to previous "
          f"{e.lambda_n / ladder.lam(e.n - 1):6.2f}  log q / log lambda {check_equiv_q(profile, e.lambda_n):.3f}")

# %% The windows add up to the outer cutoff
model = PotentialModel.from_ladder(ladder)
r = np.logspace(-12, -3.5, 9)
total = sum(model.psi(n, r).value for n in range(ladder.n0, ladder.n0 + 10))
print(np.c_[r, total, model.outer_cutoff(r).value])

# %% V at the well centers is exactly 3/4 lambda_n^2
for n in ladder.levels[:4]:
    c = LevelWindow.for_level(n).center
    print(n, model.V_of_r(c).value / model.lam(n) ** 2)

# %% V r^2 / log(r)^2 stays within a fixed band on every window
rep = model.sandwich_report(range(ladder.n0, ladder.n0 + 7))
for n, lo, hi in zip(rep.levels, rep.level_min, rep.level_max):
    print(f"level {n}: {lo:10.2f} .. {hi:10.2f}  (max/min {hi / lo:.1f})")
print("overall max/min", round(rep.overall_ratio, 1))

# %% Integrability of V^p r^2 near the pole: p < 3/2 converges, p = 3/2 does not
for p in (1.2, 1.5):
    parts = [model.lp_partial_integral(p, LevelWindow.for_level(n).psi_support[0],
                                       LevelWindow.for_level(n).psi_support[1])
             for n in range(ladder.n0 + 1, ladder.n0 + 6)]
    print(p, " ".join(f"{x:.3e}" for x in parts), "sum", f"{sum(parts):.3e}")
print("the p = 3/2 increments grow like log(r)^3:", math.log(1e-10) ** 3 / math.log(1e-9) ** 3)
