"""Seeded Monte Carlo risk estimation and rate-scaling experiments.

A named estimator is a function (truth, sample) -> atom values.  Data-driven
estimators ignore the truth; idealized ones ignore the counts and use only
the sample size.  mc_risk averages TV(estimate, truth) over independently
seeded replications and is bit-deterministic for a fixed master seed no
matter how many worker threads run the replications.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from math import fsum

import numpy as np

from .densities import FAMILY_NAMES, DiscreteDensity, family
from .errors import BadParam, DegenerateGrid, EmptyFamily, UnknownEstimator
from .hypercubes import HypercubeSpec, Regime, assouad_default_params, assouad_density
from .metrics import tv
from .partition_trees import (
    build_greedy_binary,
    build_greedy_ternary,
    build_idealized_binary,
    build_idealized_ternary,
    greedy_pl_estimate,
    histogram_estimate,
    idealized_pc_estimate,
    idealized_pl_estimate,
    monotonize,
)
from .sampling import SampleCounts, derive_seed, sample

__all__ = [
    "ESTIMATORS",
    "estimator_names",
    "fit_estimate",
    "RiskReport",
    "mc_risk",
    "sup_risk",
    "default_sup_family",
    "RateScalingResult",
    "rate_scaling",
]


def _est_oracle(f: DiscreteDensity, sc: SampleCounts) -> np.ndarray:
    return f.mass


def _est_empirical(f: DiscreteDensity, sc: SampleCounts) -> np.ndarray:
    return sc.frequencies()


def _est_greedy_binary(f: DiscreteDensity, sc: SampleCounts) -> np.ndarray:
    return histogram_estimate(build_greedy_binary(sc), sc).atom_values()


def _est_greedy_monotone(f: DiscreteDensity, sc: SampleCounts) -> np.ndarray:
    return monotonize(histogram_estimate(build_greedy_binary(sc), sc)).atom_values()


def _est_greedy_ternary(f: DiscreteDensity, sc: SampleCounts) -> np.ndarray:
    return greedy_pl_estimate(build_greedy_ternary(sc), sc).atom_values()


def _est_idealized_binary(f: DiscreteDensity, sc: SampleCounts) -> np.ndarray:
    return idealized_pc_estimate(build_idealized_binary(f, sc.n), f).atom_values()


def _est_idealized_ternary(f: DiscreteDensity, sc: SampleCounts) -> np.ndarray:
    return idealized_pl_estimate(build_idealized_ternary(f, sc.n), f).atom_values()


ESTIMATORS = {
    "oracle": _est_oracle,
    "empirical-histogram": _est_empirical,
    "greedy-binary": _est_greedy_binary,
    "greedy-binary+monotonize": _est_greedy_monotone,
    "greedy-ternary": _est_greedy_ternary,
    "idealized-binary": _est_idealized_binary,
    "idealized-ternary": _est_idealized_ternary,
}


def estimator_names() -> list[str]:
    return list(ESTIMATORS)


def fit_estimate(name: str, f: DiscreteDensity, sc: SampleCounts):
    """Full artifacts for one named estimator on one sample.

    Returns (tree, estimate): the partition tree (None for the two
    tree-free estimators) and the PiecewiseEstimate.  The registry
    functions above are the throwaway per-replication view of the same
    fits; this is the inspectable one the CLI serializes.
    """
    from .partition_trees import Piece, PiecewiseEstimate

    if name == "oracle" or name == "empirical-histogram":
        vals = f.mass if name == "oracle" else sc.frequencies()
        pieces = tuple(
            Piece(start=i + 1, length=1, kind="constant", value=float(v))
            for i, v in enumerate(vals.tolist())
        )
        return None, PiecewiseEstimate(f.k, pieces)
    if name == "greedy-binary":
        t = build_greedy_binary(sc)
        return t, histogram_estimate(t, sc)
    if name == "greedy-binary+monotonize":
        t = build_greedy_binary(sc)
        return t, monotonize(histogram_estimate(t, sc))
    if name == "greedy-ternary":
        t = build_greedy_ternary(sc)
        return t, greedy_pl_estimate(t, sc)
    if name == "idealized-binary":
        t = build_idealized_binary(f, sc.n)
        return t, idealized_pc_estimate(t, f)
    if name == "idealized-ternary":
        t = build_idealized_ternary(f, sc.n)
        return t, idealized_pl_estimate(t, f)
    raise UnknownEstimator(
        f"unknown estimator {name!r}; known: {', '.join(ESTIMATORS)}"
    )


def _resolve(estimator) -> tuple[str, object]:
    if callable(estimator):
        return getattr(estimator, "__name__", "custom"), estimator
    try:
        return str(estimator), ESTIMATORS[estimator]
    except KeyError:
        raise UnknownEstimator(
            f"unknown estimator {estimator!r}; known: {', '.join(ESTIMATORS)}"
        ) from None


@dataclass(frozen=True)
class RiskReport:
    """Monte Carlo estimate of expected TV error with replication metadata."""

    estimator_name: str
    density_name: str
    n: int
    k: int
    replications: int
    mean_tv: float
    std_error: float
    master_seed: int

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)

    CSV_HEADER = "n,k,mean_tv,std_error,reps,seed"

    def to_csv_row(self) -> str:
        return (
            f"{self.n},{self.k},{self.mean_tv!r},{self.std_error!r},"
            f"{self.replications},{self.master_seed}"
        )


def mc_risk(
    estimator,
    f: DiscreteDensity,
    n: int,
    reps: int,
    master_seed: int,
    *,
    density_name: str = "density",
    threads: int = 1,
) -> RiskReport:
    """Mean and standard error of TV(estimate, f) over seeded replications.

    Replication i draws its sample with derive_seed(master_seed, i), so the
    replication set is fixed by master_seed alone.  Results land in a slot
    per replication and are summed in index order afterward, which keeps
    mean_tv bit-identical across thread counts and scheduling orders.
    """
    name, fn = _resolve(estimator)
    if reps < 1:
        raise BadParam(f"need reps >= 1, got {reps}")
    if threads < 1:
        raise BadParam(f"need threads >= 1, got {threads}")

    losses = [0.0] * reps

    def one(i: int) -> None:
        sc = sample(f, n, derive_seed(master_seed, i))
        losses[i] = tv(f.mass, fn(f, sc))

    if threads == 1:
        for i in range(reps):
            one(i)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(one, range(reps)))

    mean = fsum(losses) / reps
    if reps == 1:
        se = 0.0
    else:
        var = fsum((x - mean) ** 2 for x in losses) / (reps - 1)
        se = math.sqrt(var / reps)
    return RiskReport(
        estimator_name=name,
        density_name=density_name,
        n=n,
        k=f.k,
        replications=reps,
        mean_tv=mean,
        std_error=se,
        master_seed=master_seed,
    )


def _named_members(family_list) -> list[tuple[str, DiscreteDensity]]:
    out = []
    for i, member in enumerate(family_list):
        if isinstance(member, DiscreteDensity):
            out.append((f"member-{i}", member))
        else:
            label, f = member
            out.append((str(label), f))
    return out


def sup_risk(estimator, family_list, n: int, reps: int, seed: int, *, threads: int = 1) -> RiskReport:
    """Worst-case mc_risk over a finite family of densities.

    family_list holds DiscreteDensity values or (name, density) pairs.
    Returns the report of the member with the largest mean_tv; on an exact
    tie the earliest member wins.  All members share the master seed, so
    the comparison is paired.
    """
    members = _named_members(family_list)
    if not members:
        raise EmptyFamily("sup over an empty family")
    best = None
    for label, f in members:
        rep = mc_risk(
            estimator, f, n, reps, seed, density_name=label, threads=threads
        )
        if best is None or rep.mean_tv > best.mean_tv:
            best = rep
    return best


def default_sup_family(k: int, n: int) -> list[tuple[str, DiscreteDensity]]:
    """The documented finite stand-in for the full non-increasing class.

    Four named shapes plus, when the parameters are in range, the two
    extreme corners of the small-k hypercube family, which are near worst
    case for this problem.
    """
    out = [(name, family(name, k)) for name in FAMILY_NAMES]
    try:
        r, eps = assouad_default_params(Regime.MONOTONE_SMALL_K, n, k)
        for label, bit in (("assouad-zeros", 0), ("assouad-ones", 1)):
            spec = HypercubeSpec(Regime.MONOTONE_SMALL_K, n, k, r, eps, (bit,) * r)
            out.append((label, assouad_density(spec)))
    except Exception:
        pass  # out of regime or degenerate at this (n, k); the named four stand
    return out


@dataclass(frozen=True)
class RateScalingResult:
    """Risk curve over an n grid with its fitted log-log slope.

    slope_valid is False (and slope NaN) when any mean_tv on the grid is
    nonpositive, as happens for the oracle estimator.
    """

    reports: tuple
    slope: float
    slope_valid: bool

    def to_csv(self) -> str:
        lines = ["n,mean_tv,std_error"]
        for r in self.reports:
            lines.append(f"{r.n},{r.mean_tv!r},{r.std_error!r}")
        return "\n".join(lines) + "\n"


def rate_scaling(
    estimator,
    density_builder,
    n_grid,
    k: int,
    reps: int,
    seed: int,
    *,
    threads: int = 1,
) -> RateScalingResult:
    """Run mc_risk along an n grid and fit log(mean_tv) against log(n).

    density_builder is a family name or a callable k -> DiscreteDensity.
    The grid must be strictly increasing with at least 3 points.  Each grid
    point gets its own derived master seed, so growing the grid does not
    reshuffle earlier points.
    """
    n_grid = [int(v) for v in n_grid]
    if len(n_grid) < 3 or any(b <= a for a, b in zip(n_grid, n_grid[1:])):
        raise DegenerateGrid(
            f"need a strictly increasing grid of >= 3 points, got {n_grid}"
        )
    if isinstance(density_builder, str):
        fam_name = density_builder
        f = family(fam_name, k)
    else:
        f = density_builder(k)
        fam_name = getattr(density_builder, "__name__", "custom")
    reports = []
    for i, n in enumerate(n_grid):
        reports.append(
            mc_risk(
                estimator,
                f,
                n,
                reps,
                derive_seed(seed, i),
                density_name=fam_name,
                threads=threads,
            )
        )
    means = [r.mean_tv for r in reports]
    if min(means) <= 0.0:
        return RateScalingResult(tuple(reports), float("nan"), False)
    slope = float(
        np.polyfit(np.log([float(n) for n in n_grid]), np.log(means), 1)[0]
    )
    return RateScalingResult(tuple(reports), slope, True)
