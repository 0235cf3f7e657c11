# %% [markdown]
# # Time evolution stays put, so norm quotients blow up
#
# Evolving v_n with Crank-Nicolson shows it barely moves over 10/lambda_n^2,
# so the stationary family stands in for the solution in every estimate and
# the quotients below grow like powers of lambda_n / log lambda_n.

# %%
from logpole.dynamics import duhamel_check
from logpole.harness import expected_slope, quotient_series
from logpole.ladder import FrequencyProfile
from logpole.potential import PotentialModel
from logpole.quasimode import build_modes

model = PotentialModel(profile=FrequencyProfile(M=160.0), d=3, n0=4)
modes = build_modes(model, range(4, 11))

rep = duhamel_check(modes[0])
print("E_disc refinement ratio", round(rep.refinement_ratio, 3), "L2 drift", rep.norm_drift)
for t, D, bound, mass in rep.rows()[::2]:
    print(f"t={t:.3e}  D={D:.3e}  bound+E={bound:.3e}  mass in support={mass:.12f}")

# %%
cases = [
    ("strichartz", {"q": 4.0, "q0": 2.0}),
    ("dispersion", {"q": 4.0}),
    ("smoothing", {"sigma": 0.5}),
    ("loss_strichartz", {"q": 6.0, "sigma": 0.5}),
    ("resolvent", {}),
]
for family, params in cases:
    s = quotient_series(family, modes, **params)
    reg = s.regression
    print(f"{family:16s} slope {reg.slope:6.3f} (model {expected_slope(family, 3, **params):.3f})"
          f"  residual {reg.max_residual:.3f}")
