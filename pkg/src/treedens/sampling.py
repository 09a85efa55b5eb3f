"""Drawing i.i.d. samples and summarizing them as per-atom counts.

Everything downstream (tree builders, risk estimates, the selection rule)
consumes counts, never raw draws, so the sample is reduced immediately.
Determinism contract: a (density, n, seed) triple always yields the same
counts, across runs and platforms, because the only randomness is PCG64
output consumed in one vectorized call.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .densities import DiscreteDensity
from .errors import BadParam, OutOfRange

_MASK64 = (1 << 64) - 1


def derive_seed(master_seed: int, replication: int) -> int:
    """Per-replication seed, mixed so that nearby (master, rep) pairs land
    far apart in seed space.  Used by the Monte Carlo driver so replication
    j is reproducible in isolation, without generating j-1 predecessors."""
    x = (master_seed + (replication + 1) * 0x9E3779B97F4A7C15) & _MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _MASK64
    x ^= x >> 31
    return x


@dataclass(frozen=True)
class SampleCounts:
    """Counts of n i.i.d. draws over the atoms 1..k."""

    k: int
    n: int
    counts: np.ndarray

    def __post_init__(self):
        counts = np.ascontiguousarray(self.counts, dtype=np.int64)
        object.__setattr__(self, "counts", counts)
        if counts.shape != (self.k,):
            raise BadParam(f"expected {self.k} counts, got shape {counts.shape}")
        if self.n < 0 or np.any(counts < 0):
            raise BadParam("counts must be non-negative")
        if int(counts.sum()) != self.n:
            raise BadParam(f"counts sum to {int(counts.sum())}, not n={self.n}")

    def frequencies(self) -> np.ndarray:
        """Empirical per-atom probabilities; the zero measure when n = 0."""
        if self.n == 0:
            return np.zeros(self.k)
        return self.counts / self.n

    def to_csv(self) -> str:
        lines = ["index,count"]
        lines.extend(f"{x + 1},{int(c)}" for x, c in enumerate(self.counts))
        return "\n".join(lines) + "\n"


def sample(density: DiscreteDensity, n: int, seed: int) -> SampleCounts:
    """n draws from the density, by inverse CDF on one block of uniforms."""
    if n < 0:
        raise BadParam("n must be >= 0")
    rng = np.random.Generator(np.random.PCG64(seed))
    u = rng.random(n)
    edges = np.cumsum(density.mass)
    idx = np.searchsorted(edges, u, side="right")
    # cumulative rounding can leave edges[-1] a hair under 1; clamp the
    # stragglers to the last atom
    idx = np.minimum(idx, density.k - 1)
    counts = np.bincount(idx, minlength=density.k)
    return SampleCounts(k=density.k, n=n, counts=counts)


def interval_count(sc: SampleCounts, start: int, length: int) -> int:
    """Draws landing in the atoms {start, ..., start+length-1}, 1-based."""
    if start < 1 or length < 1 or start + length - 1 > sc.k:
        raise OutOfRange(f"interval [{start}, {start + length - 1}] not inside 1..{sc.k}")
    return int(sc.counts[start - 1 : start - 1 + length].sum())


def subsets_to_masks(sets, k: int) -> np.ndarray:
    """Normalize a collection of atom subsets to a (num_sets, k) bool matrix.

    Each subset may be an iterable of 1-based atom indices or a length-k
    boolean mask; an empty collection gives a (0, k) matrix.
    """
    rows = []
    for s in sets:
        arr = np.asarray(list(s) if not isinstance(s, np.ndarray) else s)
        if arr.dtype == bool:
            if arr.shape != (k,):
                raise BadParam(f"boolean mask must have length {k}")
            rows.append(arr)
            continue
        mask = np.zeros(k, dtype=bool)
        if arr.size:
            idx = arr.astype(np.int64)
            if np.any(idx < 1) or np.any(idx > k):
                raise OutOfRange(f"atom indices must lie in 1..{k}")
            mask[idx - 1] = True
        rows.append(mask)
    if not rows:
        return np.zeros((0, k), dtype=bool)
    return np.stack(rows)


def empirical_sup_deviation(sc: SampleCounts, density: DiscreteDensity, sets) -> float:
    """max over the given sets of |empirical mass - density mass|.

    sets is a collection of atom subsets (see subsets_to_masks); an empty
    collection has deviation 0.
    """
    if sc.k != density.k:
        raise BadParam("counts and density must share the support size")
    masks = subsets_to_masks(sets, sc.k)
    if masks.shape[0] == 0:
        return 0.0
    emp = masks @ sc.frequencies()
    tru = masks @ density.mass
    return float(np.max(np.abs(emp - tru)))
