# %% [markdown]
# # How large must M be?
#
# On the inner edge of each cutoff ramp y_n is lambda_n^(-M/40).  The residual
# sup-norm times lambda_n^N falls along the ladder once M/40 beats d + 2 + N,
# so for d=3, N=2 the threshold is M = 280.  Below it the series grows.

# %%
import math

from logpole import verify
from logpole.ladder import FrequencyProfile, choose_M
from logpole.potential import PotentialModel
from logpole.quasimode import build_modes

print("choose_M(3, 2) =", choose_M(3, 2))
for M in (160.0, 240.0, 280.0, 320.0, 400.0):
    model = PotentialModel(profile=FrequencyProfile(M=M), d=3, n0=4)
    modes = build_modes(model, range(4, 11))
    series = verify.decay_series(modes, 2, 0)
    print(f"M={M:5.0f}", " ".join(f"{v / math.log(10):7.1f}" for v in series),
          "decays" if verify.theorem_decay_check(modes, 2).passed else "grows")

# %% The epsilon variant has no M: eventually every N wins, but not at desk scale
model = PotentialModel(profile=FrequencyProfile(variant="epsilon"), d=3, n0=2)
for start in (2, 40, 85):
    modes = build_modes(model, range(start, start + 7))
    ok = [verify.theorem_decay_check(modes, N).passed for N in range(5)]
    print(f"levels {start}..{start + 6}: log lambda {modes[0].log_lambda:7.1f}, decay for N'=0..4: {ok}")
