"""The exact algebra side: brackets, the n-cover rescaling, the geometric
action of the cover on the circle, and the discretization free energy."""

from fractions import Fraction

from mpmath import mp, nstr, exp, pi

import cftinv as ci
from cftinv.virasoro import MoebiusMap

mp.dps = 40

# ---- the bracket, exactly --------------------------------------------------
print("[L_2, L_-2] =", ci.bracket(ci.L(2), ci.L(-2)))
print("[L_3, L_-3] =", ci.bracket(ci.L(3), ci.L(-3)))

# ---- the rescaled generators ------------------------------------------------
for n in (2, 3):
    print(f"\nn = {n} cover images:")
    print("  L_1  ->", ci.rescale_embed(ci.L(1), n))
    print("  L_0  ->", ci.rescale_embed(ci.L(0), n))
rep = ci.verify_embedding(3, 30)
print(f"\nembedding n=3 checked exactly on {rep.pairs_checked} index pairs")

# ---- the circle action of the cover ----------------------------------------
g = MoebiusMap.dilation("0.8")
n = 3
print(f"\nlift of a dilation through z -> z^{n}:")
for k in range(4):
    z = exp(2j * pi * k / 7)
    w = ci.cover_action(g, n, z)
    print(f"  z = {nstr(z, 8)} -> w = {nstr(w, 8)}, |w^n - g(z^n)| = "
          f"{nstr(abs(w ** n - g(z ** n)), 2)}")

# ---- free energy of the n-cell discretization ------------------------------
c = Fraction(1, 2)
print("\nfree energy F_n (units of 2 pi) and the mean F_n/n:")
for n in (1, 2, 3, 10, 100):
    fe = ci.free_energy(c, n)
    print(f"  n = {n:3d}: F_n/2pi = {fe.f_n_over_2pi},  "
          f"F_n/(2 pi n) = {Fraction(fe.f_n_over_2pi, n)}")
fe = ci.free_energy(c, 1)
print(f"limit: c/24 = {fe.f_mean_over_2pi}  -> F_mean = {nstr(fe.f_mean, 10)}")
print(f"the fitted a0 of the m = 3 vacuum equals this number "
      f"(see demo 03): {nstr(pi / 24, 10)}")
print(f"two-component value doubles: "
      f"{ci.free_energy(c, 1, two_dim=True).f_mean_over_2pi} of 2 pi")
