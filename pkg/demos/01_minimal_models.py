"""Tour of the minimal-model data: weights, S and T matrices, fusion rules,
quantum dimensions, and the interval-index arithmetic."""

from mpmath import mp, nstr, sqrt, mpf

import cftinv as ci

mp.dps = 50

# ---- the m = 3 model (central charge 1/2) --------------------------------
model = ci.build_minimal_model(3)
print(f"m = 3: c = {model.c}")
for sec in model.sectors:
    print(f"  sector (r,s) = ({sec.r},{sec.s})  h = {sec.h}   d = {nstr(sec.d, 12)}")

md = ci.modular_matrices(model)
print("\nS matrix (rows/cols ordered by weight):")
for i in range(3):
    print("  " + "  ".join(nstr(md.S[i, j], 12) for j in range(3)))
print("global index mu =", nstr(md.mu, 12), " (equals S_00^-2)")

# ---- fusion rules from the Verlinde sum ----------------------------------
N = ci.verlinde_fusion(md)
names = [s.name for s in model.sectors]
print("\nfusion rules:")
for i in range(3):
    for j in range(i, 3):
        channels = [f"{N[i][j][k]} x {names[k]}" for k in range(3) if N[i][j][k]]
        print(f"  {names[i]} x {names[j]} = " + " + ".join(channels))

# ---- the index of the n-interval inclusion -------------------------------
# d^2 mu^(n-1) grows geometrically; its n-th root recovers mu, so the global
# index is visible inside a single interval
print("\nindex of the n-interval inclusion in the d = sqrt(2) sector:")
for n in (1, 2, 3, 10, 100, 1000):
    idx, root = ci.mu_n_index(sqrt(mpf(2)), md.mu, n)
    print(f"  n = {n:5d}: index = {nstr(idx, 8)},  index^(1/n) = {nstr(root, 10)}")

# ---- a larger model -------------------------------------------------------
model6 = ci.build_minimal_model(6)
md6 = ci.modular_matrices(model6)
print(f"\nm = 6: c = {model6.c}, {len(model6.sectors)} sectors, "
      f"mu = {nstr(md6.mu, 12)}")
