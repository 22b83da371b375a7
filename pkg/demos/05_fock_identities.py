"""Second-quantized trace identities over explicit spectra, with brute-force
occupation-number sums as the ground truth."""

from mpmath import mp, nstr, mpf, pi

import cftinv as ci

mp.dps = 30

# ---- determinant closed forms vs enumeration -------------------------------
a = ci.contraction("0.5", "0.25")
print("spectrum (0.5, 0.25):")
for stats in ("bose", "fermi"):
    closed = ci.gamma_trace(a, stats)
    bf = ci.gamma_trace_bruteforce(a, stats, 80)
    print(f"  {stats:5s}: closed {nstr(closed, 20)}  brute {nstr(bf.value, 20)}"
          f"  ({bf.terms} terms, tail <= {nstr(bf.tail_bound, 2)})")

# fermi sums are finite: four occupation patterns for two modes
bf = ci.gamma_trace_bruteforce(ci.contraction("0.5", mpf(1) / 3), "fermi")
print(f"\nfermi (1/2, 1/3): 1 + 1/2 + 1/3 + 1/6 = {nstr(bf.value, 15)}")

# ---- the ratio of log-trace to one-particle trace --------------------------
# for h with eigenvalues 1..N the small-t ratio approaches pi^2/12 ~ 0.8225,
# and it always stays inside [log 2, 1]
h = ci.positive(*range(1, 5001))
print("\nratio sum log(1+e^(-t k)) / sum e^(-t k) for k = 1..5000:")
for t in ("2", "1", "0.5", "0.1", "0.01"):
    row = ci.fermi_ratio_scan(h, [t])[0]
    print(f"  t = {t:>4s}: {nstr(row.ratio, 10)}")
print(f"limit value pi^2/12 = {nstr(pi * pi / 12, 10)}")
