"""The unit-conversion layer: Hawking temperature, area entropy, cell
counting, charge increments, and the mu-side free-energy family."""

from mpmath import mp, nstr, mpf, sqrt

import cftinv as ci

mp.dps = 40

# ---- Schwarzschild numbers ---------------------------------------------------
p = ci.BlackHoleParams.schwarzschild(1)
hs = ci.hawking_and_bekenstein(p)
print(f"unit-mass hole: A = {nstr(hs.area, 12)}, beta = {nstr(hs.beta, 12)}, "
      f"S = A/4 = {nstr(hs.entropy, 12)}")
print(f"boundary central charge c = 3A/(2 pi) = {nstr(hs.c, 12)}")

# fixing the area coefficient from the first law
rep = ci.verify_alpha_quarter(1, mpf("1e-6"))
print(f"extracted area coefficient alpha = {nstr(rep.alpha, 12)} "
      f"(defect of dS = beta dM at alpha = 1/4: {nstr(rep.residual, 2)})")

# ---- cells and increments ------------------------------------------------------
cells = ci.cell_entropy([(2, 10)])
print(f"\n10 spin cells: {cells.degrees} states, entropy {nstr(cells.entropy, 10)}")
print(f"adding one spin cell: dS = {nstr(ci.cell_increment(2), 10)}")

# adding/removing charges: the free-energy increment is a log of dimensions
out = ci.incremental_free_energy(sqrt(mpf(2)), 1, 1)
print(f"charge swap d = sqrt(2) vs 1 at kappa = 1: dF = {nstr(out.dF, 12)} "
      f"(= pi log 2)")

# ---- the mu-side family ----------------------------------------------------------
print("\nmu-side free energies at mu = 4, d = sqrt(2):")
for n in (1, 2, 3, 10, 100):
    out = ci.mu_free_energy(4, sqrt(mpf(2)), n)
    print(f"  n = {n:3d}: log Z_n = {nstr(out.log_zn_kms, 10)}, "
          f"F_n_mu/n = {nstr(out.f_n_mu / n, 10)}")
out = ci.mu_free_energy(4, sqrt(mpf(2)), 1)
print(f"mean: {nstr(out.f_mean_mu, 10)} = -(log mu)/(4 pi)")
print(f"local leading invariant a0_mu = (1/2) log mu = {nstr(out.a0_mu, 10)}")
print(f"first correction is structural: '{out.a1_mu_formula[0]}' "
      f"with log mu = {nstr(out.a1_mu_formula[1], 10)}")

# the chiral mean free energy and the mu-side one are reported side by side;
# no relation between them is asserted
fe = ci.free_energy(ci.build_minimal_model(3).c, 1)
print(f"\nglobal-side F_mean = {nstr(fe.f_mean, 10)} vs "
      f"mu-side F_mean_mu = {nstr(out.f_mean_mu, 10)}")

# ---- heuristic reference curve ----------------------------------------------------
print(f"\nheuristic density curve at lambda = 1000, c = 1/2: "
      f"{nstr(ci.cardy_density_reference('0.5', 1000), 8)}")
