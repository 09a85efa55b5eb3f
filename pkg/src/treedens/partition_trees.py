"""Recursive partition trees and the piecewise estimates they induce.

A tree lives on the padded domain {1, ..., padded_k}, padded_k the smallest
power of the arity at least k; padded atoms carry zero mass and zero counts.
Construction walks top-down: a node covering a single atom is a leaf, and
any other node either splits into equal consecutive halves (arity 2) or
thirds (arity 3) when its splitting rule fires, or becomes a leaf.  The
greedy rules consume sample counts and are evaluated in exact integer
arithmetic; the idealized rules consume the true density and are
deterministic in it.

The estimates are piecewise functions over the leaf intervals, truncated
back to {1, ..., k}.  Truncation can shave off mass that a boundary leaf
spread onto padded atoms, so estimates built on a padded domain may be
sub-normalized; each builder takes a renormalize flag (default off) to
rescale explicitly instead of hiding the adjustment.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .densities import DiscreteDensity, is_non_increasing, is_convex_non_increasing
from .errors import (
    BadParam,
    DomainMismatch,
    NotConvex,
    NotMonotone,
    NotPiecewiseConstant,
)
from .sampling import SampleCounts


def pad_to_power(k: int, arity: int) -> int:
    """Smallest power of the arity at least k."""
    if arity not in (2, 3):
        raise BadParam("arity must be 2 or 3")
    if k < 1:
        raise BadParam("k must be >= 1")
    padded = 1
    while padded < k:
        padded *= arity
    return padded


# ---------------------------------------------------------------------------
# trees
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TreeNode:
    """A node covering the atoms {start, ..., start + length - 1}, 1-based."""

    start: int
    length: int
    children: tuple["TreeNode", ...] = ()

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass(frozen=True)
class PartitionTree:
    arity: int
    padded_k: int
    root: TreeNode

    def leaves(self) -> list[TreeNode]:
        """Leaves in left-to-right order; their intervals tile the domain."""
        out: list[TreeNode] = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                out.append(node)
            else:
                stack.extend(reversed(node.children))
        return out

    def leaf_intervals(self) -> list[tuple[int, int]]:
        return [(u.start, u.length) for u in self.leaves()]

    def nonsingleton_leaf_count(self) -> int:
        return sum(1 for u in self.leaves() if u.length > 1)

    def to_json(self) -> str:
        return json.dumps(
            {
                "arity": self.arity,
                "padded_k": self.padded_k,
                "leaves": [{"start": s, "len": l} for s, l in self.leaf_intervals()],
            }
        )


def _build_tree(arity: int, padded_k: int, should_split) -> PartitionTree:
    """Two passes over an explicit stack: decide splits top-down, then
    assemble nodes bottom-up, so deep trees cannot hit recursion limits."""
    order: list[tuple[int, int]] = []
    split: dict[tuple[int, int], bool] = {}
    stack = [(1, padded_k)]
    while stack:
        start, length = stack.pop()
        order.append((start, length))
        if length == 1:
            split[(start, length)] = False
            continue
        decided = should_split(start, length)
        split[(start, length)] = decided
        if decided:
            child = length // arity
            for j in range(arity):
                stack.append((start + j * child, child))
    nodes: dict[tuple[int, int], TreeNode] = {}
    for start, length in reversed(order):
        if split[(start, length)]:
            child = length // arity
            kids = tuple(nodes[(start + j * child, child)] for j in range(arity))
            nodes[(start, length)] = TreeNode(start, length, kids)
        else:
            nodes[(start, length)] = TreeNode(start, length)
    return PartitionTree(arity=arity, padded_k=padded_k, root=nodes[(1, padded_k)])


def greedy_split_decision(n_left: int, n_right: int) -> bool:
    """|n_left - n_right| > sqrt(n_left + n_right), as exact integers."""
    d = n_left - n_right
    return d * d > n_left + n_right


def greedy_ternary_split_decision(n_left: int, n_mid: int, n_right: int) -> bool:
    """Second difference of the thirds' counts exceeds sqrt of their sum.

    The sign check matters: squaring alone would also split on strongly
    concave count patterns.
    """
    d = n_left - 2 * n_mid + n_right
    return d > 0 and d * d > n_left + n_mid + n_right


def _count_lookup(sc: SampleCounts):
    cum = np.concatenate([[0], np.cumsum(sc.counts)])

    def count(start: int, length: int) -> int:
        # intervals may stick out into the padding, which holds no samples
        lo = min(start - 1, sc.k)
        hi = min(start + length - 1, sc.k)
        return int(cum[hi] - cum[lo])

    return count


def _mass_lookup(f: DiscreteDensity):
    cum = np.concatenate([[0.0], np.cumsum(f.mass)])

    def mass(start: int, length: int) -> float:
        lo = min(start - 1, f.k)
        hi = min(start + length - 1, f.k)
        return float(cum[hi] - cum[lo])

    return mass


def build_greedy_binary(sc: SampleCounts) -> PartitionTree:
    """The sample-driven binary tree: split where the halves' counts differ
    by more than a standard deviation's worth."""
    if sc.n < 1:
        raise BadParam("need at least one sample")
    count = _count_lookup(sc)

    def should_split(start: int, length: int) -> bool:
        half = length // 2
        return greedy_split_decision(count(start, half), count(start + half, half))

    return _build_tree(2, pad_to_power(sc.k, 2), should_split)


def build_idealized_binary(f: DiscreteDensity, n: int) -> PartitionTree:
    """The deterministic binary tree the greedy one imitates: counts are
    replaced by their expectations under f at sample size n."""
    if n < 1:
        raise BadParam("n must be >= 1")
    if not is_non_increasing(f):
        raise NotMonotone("the idealized binary tree needs a non-increasing density")
    mass = _mass_lookup(f)

    def should_split(start: int, length: int) -> bool:
        half = length // 2
        fv = mass(start, half)
        fw = mass(start + half, half)
        return fv - fw > math.sqrt((fv + fw) / n)

    return _build_tree(2, pad_to_power(f.k, 2), should_split)


def build_greedy_ternary(sc: SampleCounts) -> PartitionTree:
    """Sample-driven ternary tree splitting on the thirds' count curvature."""
    if sc.n < 1:
        raise BadParam("need at least one sample")
    count = _count_lookup(sc)

    def should_split(start: int, length: int) -> bool:
        third = length // 3
        return greedy_ternary_split_decision(
            count(start, third),
            count(start + third, third),
            count(start + 2 * third, third),
        )

    return _build_tree(3, pad_to_power(sc.k, 3), should_split)


def build_idealized_ternary(f: DiscreteDensity, n: int) -> PartitionTree:
    """Deterministic ternary tree splitting where f's interval masses have
    curvature above the sampling noise scale."""
    if n < 1:
        raise BadParam("n must be >= 1")
    if not is_convex_non_increasing(f):
        raise NotConvex("the idealized ternary tree needs a convex non-increasing density")
    mass = _mass_lookup(f)

    def should_split(start: int, length: int) -> bool:
        third = length // 3
        fv = mass(start, third)
        fw = mass(start + third, third)
        fr = mass(start + 2 * third, third)
        return fv - 2.0 * fw + fr > math.sqrt((fv + fw + fr) / n)

    return _build_tree(3, pad_to_power(f.k, 3), should_split)


# ---------------------------------------------------------------------------
# piecewise estimates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Piece:
    """One span of an estimate: constant value, or a line slope*x + intercept
    evaluated at the integer atoms it covers."""

    start: int
    length: int
    kind: str
    value: float = 0.0
    slope: float = 0.0
    intercept: float = 0.0

    def __post_init__(self):
        if self.kind not in ("constant", "linear"):
            raise BadParam(f"unknown piece kind {self.kind!r}")
        if self.start < 1 or self.length < 1:
            raise BadParam("pieces need start >= 1 and length >= 1")

    def atom_values(self) -> np.ndarray:
        if self.kind == "constant":
            return np.full(self.length, self.value)
        x = np.arange(self.start, self.start + self.length, dtype=float)
        return self.slope * x + self.intercept


@dataclass(frozen=True)
class PiecewiseEstimate:
    """A density estimate given piecewise over {1, ..., domain_k}.

    The constructor checks that the pieces tile the domain consecutively.
    It does not police value signs: the estimators here produce values
    >= 0 up to float error at the scales they are specified for, and that
    property is asserted in tests rather than silently repaired.
    """

    domain_k: int
    pieces: tuple[Piece, ...]

    def __post_init__(self):
        pieces = tuple(self.pieces)
        object.__setattr__(self, "pieces", pieces)
        if not pieces:
            raise BadParam("an estimate needs at least one piece")
        pos = 1
        for p in pieces:
            if p.start != pos:
                raise BadParam(f"piece at {p.start} breaks the tiling (expected {pos})")
            pos += p.length
        if pos != self.domain_k + 1:
            raise BadParam(f"pieces cover 1..{pos - 1}, domain is 1..{self.domain_k}")

    def atom_values(self) -> np.ndarray:
        return np.concatenate([p.atom_values() for p in self.pieces])

    def __call__(self, x: int) -> float:
        if not 1 <= x <= self.domain_k:
            raise DomainMismatch(f"atom {x} outside 1..{self.domain_k}")
        for p in self.pieces:
            if x < p.start + p.length:
                if p.kind == "constant":
                    return p.value
                return self.slope_eval(p, x)
        raise AssertionError("tiling invariant violated")

    @staticmethod
    def slope_eval(p: Piece, x: int) -> float:
        return p.slope * x + p.intercept

    def total_mass(self) -> float:
        return math.fsum(self.atom_values().tolist())

    def to_json(self) -> str:
        out = []
        for p in self.pieces:
            d = {"start": p.start, "len": p.length, "kind": p.kind}
            if p.kind == "constant":
                d["value"] = p.value
            else:
                d["slope"] = p.slope
                d["intercept"] = p.intercept
            out.append(d)
        return json.dumps({"domain_k": self.domain_k, "pieces": out})

    def to_csv(self) -> str:
        lines = ["x,value"]
        vals = self.atom_values()
        lines.extend(f"{x + 1},{v!r}" for x, v in enumerate(vals.tolist()))
        return "\n".join(lines) + "\n"


def _truncate(pieces: list[Piece], k: int) -> list[Piece]:
    out = []
    for p in pieces:
        if p.start > k:
            break
        if p.start + p.length - 1 > k:
            out.append(replace(p, length=k - p.start + 1))
        else:
            out.append(p)
    return out


def _scaled(est: PiecewiseEstimate, renormalize: bool) -> PiecewiseEstimate:
    if not renormalize:
        return est
    mass = est.total_mass()
    if mass <= 0.0:
        raise BadParam("cannot renormalize an estimate with no mass")
    c = 1.0 / mass
    scaled = tuple(
        replace(p, value=p.value * c, slope=p.slope * c, intercept=p.intercept * c)
        for p in est.pieces
    )
    return PiecewiseEstimate(est.domain_k, scaled)


def _check_tree_counts(t: PartitionTree, sc: SampleCounts):
    if pad_to_power(sc.k, t.arity) != t.padded_k:
        raise DomainMismatch(
            f"tree over {t.padded_k} padded atoms does not match counts on 1..{sc.k}"
        )


def _check_tree_density(t: PartitionTree, f: DiscreteDensity):
    if pad_to_power(f.k, t.arity) != t.padded_k:
        raise DomainMismatch(
            f"tree over {t.padded_k} padded atoms does not match density on 1..{f.k}"
        )


def histogram_estimate(
    t: PartitionTree, sc: SampleCounts, renormalize: bool = False
) -> PiecewiseEstimate:
    """Leaf-interval histogram: each leaf gets its count spread uniformly
    over the leaf's full padded width."""
    _check_tree_counts(t, sc)
    if sc.n < 1:
        raise BadParam("need at least one sample")
    count = _count_lookup(sc)
    pieces = [
        Piece(u.start, u.length, "constant", value=count(u.start, u.length) / (sc.n * u.length))
        for u in t.leaves()
    ]
    return _scaled(PiecewiseEstimate(sc.k, tuple(_truncate(pieces, sc.k))), renormalize)


def _atom_mass(f: DiscreteDensity, x: int) -> float:
    # direct read so singleton leaves reproduce f bit for bit; the cumsum
    # lookup would round the same value twice
    return float(f.mass[x - 1]) if x <= f.k else 0.0


def idealized_pc_estimate(
    t: PartitionTree, f: DiscreteDensity, renormalize: bool = False
) -> PiecewiseEstimate:
    """Piecewise-constant projection of f itself onto the leaf partition."""
    _check_tree_density(t, f)
    mass = _mass_lookup(f)
    pieces = [
        Piece(
            u.start,
            u.length,
            "constant",
            value=_atom_mass(f, u.start)
            if u.length == 1
            else mass(u.start, u.length) / u.length,
        )
        for u in t.leaves()
    ]
    return _scaled(PiecewiseEstimate(f.k, tuple(_truncate(pieces, f.k))), renormalize)


def _fitted_line(start: int, third: int, avg_left: float, avg_right: float):
    """Slope and intercept of the line through the left and right thirds'
    (midpoint, average) points; the midpoints sit 2*third apart."""
    mid_left = start + (third - 1) / 2.0
    slope = (avg_right - avg_left) / (2.0 * third)
    intercept = avg_left - slope * mid_left
    return slope, intercept


def idealized_pl_estimate(
    t: PartitionTree, f: DiscreteDensity, renormalize: bool = False
) -> PiecewiseEstimate:
    """Per-leaf line through the outer thirds' average values of f;
    singleton leaves copy f exactly.  Values are not clamped."""
    _check_tree_density(t, f)
    if t.arity != 3:
        raise DomainMismatch("piecewise-linear estimates need a ternary tree")
    mass = _mass_lookup(f)
    pieces = []
    for u in t.leaves():
        if u.length == 1:
            pieces.append(Piece(u.start, 1, "constant", value=_atom_mass(f, u.start)))
            continue
        third = u.length // 3
        avg_left = mass(u.start, third) / third
        avg_right = mass(u.start + 2 * third, third) / third
        slope, intercept = _fitted_line(u.start, third, avg_left, avg_right)
        pieces.append(Piece(u.start, u.length, "linear", slope=slope, intercept=intercept))
    return _scaled(PiecewiseEstimate(f.k, tuple(_truncate(pieces, f.k))), renormalize)


def _clamped_linear(start: int, length: int, slope: float, intercept: float) -> list[Piece]:
    """Split a fitted line into a linear part and a zero ledge where it goes
    negative.  The line is >= 0 between the two fitted midpoints, so the
    negative atoms form a run at one end of the leaf."""
    x = np.arange(start, start + length, dtype=float)
    neg = slope * x + intercept < 0.0
    if not neg.any():
        return [Piece(start, length, "linear", slope=slope, intercept=intercept)]
    if slope < 0.0:
        keep = int(np.argmax(neg))
        return [
            Piece(start, keep, "linear", slope=slope, intercept=intercept),
            Piece(start + keep, length - keep, "constant", value=0.0),
        ]
    keep = int(np.argmax(neg[::-1]))
    return [
        Piece(start, length - keep, "constant", value=0.0),
        Piece(start + length - keep, keep, "linear", slope=slope, intercept=intercept),
    ]


def greedy_pl_estimate(
    t: PartitionTree, sc: SampleCounts, renormalize: bool = False
) -> PiecewiseEstimate:
    """Empirical version of the per-leaf line fit, with negative stretches
    clamped to zero: unlike the idealized averages, empirical thirds can
    slope either way."""
    _check_tree_counts(t, sc)
    if t.arity != 3:
        raise DomainMismatch("piecewise-linear estimates need a ternary tree")
    if sc.n < 1:
        raise BadParam("need at least one sample")
    count = _count_lookup(sc)
    pieces: list[Piece] = []
    for u in t.leaves():
        if u.length == 1:
            pieces.append(Piece(u.start, 1, "constant", value=count(u.start, 1) / sc.n))
            continue
        third = u.length // 3
        avg_left = count(u.start, third) / (sc.n * third)
        avg_right = count(u.start + 2 * third, third) / (sc.n * third)
        slope, intercept = _fitted_line(u.start, third, avg_left, avg_right)
        pieces.extend(_clamped_linear(u.start, u.length, slope, intercept))
    return _scaled(PiecewiseEstimate(sc.k, tuple(_truncate(pieces, sc.k))), renormalize)


def monotonize(e: PiecewiseEstimate) -> PiecewiseEstimate:
    """Pool adjacent violators over the pieces, weighted by length.

    Merging two pieces replaces them by their length-weighted average, and
    iterating to a fixed point gives the same answer in every merge order.
    To honor that uniqueness in floats, the pooling arithmetic runs on
    exact rationals of the input values; pieces that survive unmerged keep
    their float value bit for bit, and merged blocks round once at the end.
    """
    if any(p.kind != "constant" for p in e.pieces):
        raise NotPiecewiseConstant("monotonize applies to piecewise-constant estimates")
    # block: [first piece index, last piece index, atom length, exact total]
    blocks: list[list] = []
    for idx, p in enumerate(e.pieces):
        blocks.append([idx, idx, p.length, Fraction(p.value) * p.length])
        while len(blocks) >= 2:
            a, b = blocks[-2], blocks[-1]
            if a[3] * b[2] < b[3] * a[2]:  # average(a) < average(b): violation
                blocks[-2] = [a[0], b[1], a[2] + b[2], a[3] + b[3]]
                blocks.pop()
            else:
                break
    out = []
    pos = 1
    for first, last, length, total in blocks:
        if first == last:
            value = e.pieces[first].value
        else:
            value = float(total / length)
        out.append(Piece(pos, length, "constant", value=value))
        pos += length
    return PiecewiseEstimate(e.domain_k, tuple(out))
