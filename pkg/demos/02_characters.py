"""Exact character coefficients, evaluation with certified errors, and the
modular transform that makes small-t evaluation cheap."""

from mpmath import mp, nstr, mpf, log

import cftinv as ci

mp.dps = 50

model = ci.build_minimal_model(3)
md = ci.modular_matrices(model)
series = ci.all_character_series(model, 2000)

# ---- exact integer coefficients ------------------------------------------
print("level multiplicities a_k (k = 0..16):")
for s in series:
    print(f"  {s.sector.name:8s}: {s.coeffs[:17]}")

# ---- evaluation with a certified tail bound ------------------------------
tv = ci.evaluate(series[0], 2)
print(f"\nvacuum character at t = 2: {nstr(tv.value, 30)}")
print(f"certified absolute error:   {nstr(tv.error, 3)}")

# ---- the transform route for small t -------------------------------------
# the direct series at t = 0.01 would need millions of terms; the S matrix
# converts it into a sum of rapidly convergent evaluations at 1/t = 100
t = mpf("0.01")
tv = ci.evaluate_small_t(md, series, 0, t, shifted=False)
print(f"\nTr e^(-2 pi t L0) at t = 0.01: {nstr(tv.value, 25)}")
print(f"log of it:                     {nstr(log(tv.value), 25)}")
print(f"leading prediction (pi/24)/t:  {nstr((mp.pi / 24) / t - log(mpf(2)) - (mp.pi / 24) * t, 25)}")

# ---- both routes agree where both converge -------------------------------
res = ci.s_transform_residual(md, series, ["0.3", "0.5", "1", "2", "3"])
print(f"\nmax transform residual over sectors and grid: {nstr(res, 3)}")

# ---- counting eigenvalues -------------------------------------------------
big = ci.character_coeffs(model, model.sectors[0], 5100)
for lam in (10, 100, 1000, 5000):
    print(f"N({lam}) = {ci.count_states(big, lam)}")
