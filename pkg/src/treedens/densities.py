"""Discrete densities on {1, ..., k} and the shape classes used everywhere else.

A density is a non-negative mass vector summing to 1.  The two shape classes
of interest are the non-increasing densities and the convex non-increasing
densities; both predicates use exact comparisons, no tolerance, so anything
claiming membership has to earn it in actual float arithmetic.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import BadParam, DomainMismatch, NegativeMass, NotNormalized

#: absolute tolerance on sum(mass) == 1 for validation.
NORMALIZATION_TOL = 1e-9

UNIFORM = "uniform"
HARMONIC_ZIPF = "harmonic-zipf"
TRUNC_GEOMETRIC = "trunc-geometric"
LINEAR_DECREASING = "linear-decreasing"

FAMILY_NAMES = (UNIFORM, HARMONIC_ZIPF, TRUNC_GEOMETRIC, LINEAR_DECREASING)


@dataclass(frozen=True)
class DiscreteDensity:
    """A probability mass function on atoms 1..k.

    ``mass[i]`` is the probability of atom ``i + 1``; the atom labels are
    1-based everywhere in the public API, storage is a plain 0-based array.
    Instances are validated at construction: no negative entries, total mass
    1 within ``NORMALIZATION_TOL``.
    """

    k: int
    mass: np.ndarray

    def __post_init__(self):
        # own copy, frozen: instances are shared across threads unguarded
        m = np.array(self.mass, dtype=float)
        if self.k < 1 or m.shape != (self.k,):
            raise BadParam(f"mass must be a length-{self.k} vector")
        if np.any(m < 0):
            raise NegativeMass("mass has a negative entry")
        total = float(math.fsum(m.tolist()))
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise NotNormalized(f"mass sums to {total!r}, not 1")
        m.setflags(write=False)
        object.__setattr__(self, "mass", m)

    def __call__(self, x: int) -> float:
        """Mass of atom x (1-based)."""
        if not 1 <= x <= self.k:
            raise DomainMismatch(f"atom {x} outside 1..{self.k}")
        return float(self.mass[x - 1])

    def to_json(self) -> str:
        return json.dumps({"k": self.k, "mass": self.mass.tolist()})

    def to_csv(self) -> str:
        """Rows of (index, mass), index 1-based, with a header line."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "mass"])
        for i, v in enumerate(self.mass, start=1):
            w.writerow([i, repr(float(v))])
        return buf.getvalue()


def make_density(mass) -> DiscreteDensity:
    """Validate a mass sequence and wrap it as a DiscreteDensity.

    Raises NegativeMass on any negative entry (checked before normalization
    so [-0.1, 1.1] reports the sign problem, not the sum), NotNormalized when
    the total is off by more than 1e-9.  No silent renormalization ever.
    """
    arr = np.asarray(list(mass), dtype=float)
    return DiscreteDensity(k=int(arr.shape[0]), mass=arr)


def density_from_json(text: str) -> DiscreteDensity:
    obj = json.loads(text)
    d = make_density(obj["mass"])
    if d.k != int(obj["k"]):
        raise DomainMismatch("k field disagrees with mass length")
    return d


def density_from_csv(text: str) -> DiscreteDensity:
    rows = list(csv.reader(io.StringIO(text)))
    if rows and rows[0][:1] == ["index"]:
        rows = rows[1:]
    pairs = sorted((int(r[0]), float(r[1])) for r in rows if r)
    if [i for i, _ in pairs] != list(range(1, len(pairs) + 1)):
        raise BadParam("csv rows must cover indices 1..k exactly once")
    return make_density([v for _, v in pairs])


def is_non_increasing(f: DiscreteDensity) -> bool:
    """Exact check of f(x+1) <= f(x) for every x < k."""
    m = f.mass
    return bool(np.all(m[1:] <= m[:-1]))


def is_convex_non_increasing(f: DiscreteDensity) -> bool:
    """Exact check of monotonicity plus f(x) - 2 f(x+1) + f(x+2) >= 0.

    The second difference is evaluated as (f(x) - 2 f(x+1)) + f(x+2) so that
    dyadic-grid constructions, whose values are integers times a power of
    two, are compared exactly.
    """
    if not is_non_increasing(f):
        return False
    m = f.mass
    if f.k < 3:
        return True
    second = (m[:-2] - 2.0 * m[1:-1]) + m[2:]
    return bool(np.all(second >= 0))


def family(name: str, k: int, param: float | None = None) -> DiscreteDensity:
    """Build a named density family member on {1, ..., k}.

    Parameters
    ----------
    name : one of "uniform", "harmonic-zipf", "trunc-geometric",
        "linear-decreasing".
    k : support size, k >= 1.
    param : ratio in (0, 1) for "trunc-geometric", default 0.9 (the member
        the risk harness documents); rejected for the parameter-free
        families.

    All four families are non-increasing; all but some harmonic cases are
    also convex non-increasing ("harmonic-zipf" is convex since 1/x is).
    """
    if k < 1:
        raise BadParam("k must be >= 1")
    if name == UNIFORM:
        if param is not None:
            raise BadParam("uniform takes no parameter")
        mass = np.full(k, 1.0 / k)
    elif name == HARMONIC_ZIPF:
        if param is not None:
            raise BadParam("harmonic-zipf takes no parameter")
        x = np.arange(1, k + 1, dtype=float)
        w = 1.0 / x
        mass = w / math.fsum(w.tolist())
    elif name == TRUNC_GEOMETRIC:
        if param is None:
            param = 0.9
        if not 0.0 < param < 1.0:
            raise BadParam("trunc-geometric needs a ratio in (0, 1)")
        w = param ** np.arange(k, dtype=float)
        mass = w / math.fsum(w.tolist())
    elif name == LINEAR_DECREASING:
        if param is not None:
            raise BadParam("linear-decreasing takes no parameter")
        w = np.arange(k, 0, -1, dtype=float)
        mass = w / (k * (k + 1) / 2.0)
    else:
        raise BadParam(f"unknown family {name!r}")
    return DiscreteDensity(k=k, mass=mass)
