"""Minimum-distance selection among candidate densities.

Given finitely many candidate estimates and one sample, pick the candidate
whose measure best matches the empirical measure uniformly over the
pairwise comparison sets {x : f_i(x) > f_j(x)}.  The winner's TV loss is
within a constant factor of the best candidate's, plus an empirical-process
term, so selection costs little even when the candidate list mixes good and
terrible estimates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .densities import DiscreteDensity
from .errors import BadParam, DomainMismatch, EmptyCandidates
from .partition_trees import PiecewiseEstimate
from .sampling import SampleCounts

__all__ = ["CandidateSet", "yatracos_class", "minimum_distance_estimate"]

_TIE_TOL = 1e-12


def _atom_matrix(candidates) -> np.ndarray:
    rows = []
    for c in candidates:
        if isinstance(c, DiscreteDensity):
            rows.append(c.mass)
        elif isinstance(c, PiecewiseEstimate):
            rows.append(c.atom_values())
        else:
            rows.append(np.asarray(c, dtype=float))
    k = rows[0].shape[0]
    for i, row in enumerate(rows):
        if row.shape != (k,):
            raise DomainMismatch(
                f"candidate {i} lives on {row.shape[0]} atoms, candidate 0 on {k}"
            )
    return np.stack(rows)


@dataclass(frozen=True)
class CandidateSet:
    """An ordered list of candidate estimates over a shared domain.

    candidates may be DiscreteDensity, PiecewiseEstimate, or raw atom-value
    arrays (sub-normalized candidates are allowed; selection does not need
    normalization).  labels, when given, must parallel candidates.
    """

    candidates: tuple = ()
    labels: tuple = None
    atom_values: np.ndarray = field(init=False, repr=False, compare=False)

    def __init__(self, candidates, labels=None):
        candidates = tuple(candidates)
        if not candidates:
            raise EmptyCandidates("need at least one candidate")
        if labels is not None:
            labels = tuple(str(s) for s in labels)
            if len(labels) != len(candidates):
                raise BadParam(
                    f"{len(labels)} labels for {len(candidates)} candidates"
                )
        object.__setattr__(self, "candidates", candidates)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "atom_values", _atom_matrix(candidates))
        self.atom_values.setflags(write=False)

    def __len__(self) -> int:
        return len(self.candidates)

    @property
    def k(self) -> int:
        return self.atom_values.shape[1]


def yatracos_class(cs: CandidateSet) -> list[frozenset[int]]:
    """All distinct comparison sets {x : f_i(x) > f_j(x)}, i != j.

    Atoms are 1-based.  Pairs are visited in lexicographic (i, j) order and
    each distinct set is kept at its first appearance, so the output order
    is deterministic.  Fewer than two candidates compare nothing: [].
    """
    vals = cs.atom_values
    m = vals.shape[0]
    out: list[frozenset[int]] = []
    seen: set[frozenset[int]] = set()
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            s = frozenset(np.flatnonzero(vals[i] > vals[j]) + 1)
            if s not in seen:
                seen.add(s)
                out.append(s)
    return out


def minimum_distance_estimate(cs: CandidateSet, sc: SampleCounts) -> int:
    """Index of the selected candidate.

    Selects argmin_i max_A |f_i(A) - mu_n(A)| over the comparison sets A;
    scores within 1e-12 of the minimum tie, and ties go to the smallest
    index, so reordering equal candidates cannot flip the answer.
    """
    if sc.k != cs.k:
        raise DomainMismatch(f"sample on {sc.k} atoms, candidates on {cs.k}")
    if sc.n < 1:
        raise BadParam("selection needs at least one observation")
    sets = yatracos_class(cs)
    if not sets:
        return 0
    k = cs.k
    masks = np.zeros((len(sets), k))
    for row, s in enumerate(sets):
        if s:
            masks[row, np.fromiter(s, dtype=np.int64) - 1] = 1.0
    emp = masks @ sc.frequencies()
    cand = masks @ cs.atom_values.T  # (num_sets, num_candidates)
    scores = np.abs(cand - emp[:, None]).max(axis=0)
    return int(np.flatnonzero(scores <= scores.min() + _TIE_TOL)[0])
