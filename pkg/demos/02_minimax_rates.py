"""Rate curves and a small Monte Carlo check against them.

Prints the predicted risk rates for non-increasing and convex classes
across support sizes, then measures the empirical histogram's risk on a
two-atom domain over a growing sample grid.  The fitted log-log slope
should land near -1/2, the parametric small-k regime.
"""

from treedens import family, mc_risk, rate_convex, rate_monotone, rate_scaling

N = 10**5
print(f"predicted rates at n = {N}")
print(f"{'k':>8}  {'monotone':>22}  {'convex':>22}")
for k in (4, 64, 1024, 2**17, 2**40):
    rm = rate_monotone(N, k)
    rc = rate_convex(N, k)
    print(f"{k:>8}  {rm.value:>12.5f} {rm.branch.value:>9}  {rc.value:>12.5f} {rc.branch.value:>9}")

res = rate_scaling("empirical-histogram", "uniform", [100, 1000, 10000], 2, 200, 2026)
print(f"\nk=2 empirical histogram, slope of log risk vs log n: {res.slope:.3f}")
for rep in res.reports:
    print(f"  n={rep.n:>6}  mean_tv={rep.mean_tv:.5f}  se={rep.std_error:.5f}")

# same data budget, four estimators on one non-increasing truth
print("\nestimator shootout, harmonic-zipf k=64, n=1000, 50 reps")
f = family("harmonic-zipf", 64)
for name in (
    "empirical-histogram",
    "greedy-binary",
    "greedy-binary+monotonize",
    "idealized-binary",
):
    rep = mc_risk(name, f, 1000, 50, 11)
    print(f"  {name:<26} mean_tv={rep.mean_tv:.4f}  se={rep.std_error:.4f}")
