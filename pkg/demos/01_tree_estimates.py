"""Walk through the tree estimators on one dataset.

Draws n samples from a heavy-headed density, grows the greedy binary
tree from the counts, then compares the histogram on that tree against
the idealized tree grown from the true density itself.
"""

from treedens import (
    build_greedy_binary,
    build_idealized_binary,
    family,
    histogram_estimate,
    idealized_pc_estimate,
    monotonize,
    sample,
    tv,
)

K, N, SEED = 64, 1000, 7

f = family("harmonic-zipf", K)
counts = sample(f, N, SEED)

greedy = build_greedy_binary(counts)
print(f"greedy tree on n={N} counts: {len(greedy.leaves())} leaves")
for start, length in greedy.leaf_intervals()[:6]:
    print(f"  leaf [{start}, {start + length - 1}]  len {length}")
print("  ...")

hist = histogram_estimate(greedy, counts)
print(f"histogram TV to truth:        {tv(hist, f):.4f}")

# pooling flat stretches can only help against a non-increasing truth
pooled = monotonize(hist)
print(f"monotonized TV to truth:      {tv(pooled, f):.4f}")
print(f"pieces {len(hist.pieces)} -> {len(pooled.pieces)} after pooling")

# the idealized tree sees f, not the sample; same n sets its noise scale
ideal = build_idealized_binary(f, N)
est = idealized_pc_estimate(ideal, f)
m = ideal.nonsingleton_leaf_count()
print(f"\nidealized tree: {len(ideal.leaves())} leaves, {m} non-singleton")
print(f"idealized TV to truth:        {tv(est, f):.4f}")
print(f"guaranteed ceiling 2.5*sqrt(m/n) = {2.5 * (m / N) ** 0.5:.4f}")
