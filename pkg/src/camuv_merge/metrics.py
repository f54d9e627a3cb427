"""Frequency-based accuracy metrics over solution sets.

With c_ij the number of solutions containing edge (i, j) and n the solution
count, the modified counts are MTP = sum over true edges of c_ij / n,
MFP = sum over non-edges of c_ij / n, and MFN = sum over true edges of
(n - c_ij) / n; recall, precision and F1 derive as usual.  All reduce to the
classical counts when the solution set is a singleton.  Arithmetic is exact
(rationals); 0/0 ratios are reported as explicit None rather than NaN.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .graphs import Dag, Pair, pair_of


class EmptySolutionSet(ValueError):
    """Metrics need at least one solution graph."""


class DimensionMismatch(ValueError):
    """Solutions and truth disagree on the variable count."""


@dataclass(frozen=True)
class MetricsReport:
    frequencies: np.ndarray  # (d, d) float64, edge occurrence fractions
    mtp: Fraction
    mfp: Fraction
    mfn: Fraction
    recall: Fraction | None
    precision: Fraction | None
    f1: Fraction | None
    solution_count: int
    restricted_to: frozenset[Pair] | None = None


def evaluate_metrics(
    solutions: Sequence[Dag],
    truth: Dag,
    restrict: Iterable[Pair] | None = None,
) -> MetricsReport:
    """Modified TP/FP/FN with recall, precision and F1 for a solution set
    against a ground truth; ``restrict`` narrows the summed ordered pairs to
    those whose unordered pair belongs to the given set."""
    if not solutions:
        raise EmptySolutionSet("need at least one solution")
    d = truth.order
    if any(s.order != d for s in solutions):
        raise DimensionMismatch("all solutions must match the truth's variable count")
    scope = None if restrict is None else {pair_of(i, j) for i, j in restrict}

    n = len(solutions)
    counts = np.zeros((d, d), dtype=np.int64)
    for s in solutions:
        counts += s.adjacency
    frequencies = counts / float(n)
    frequencies.setflags(write=False)

    mtp = Fraction(0)
    mfp = Fraction(0)
    mfn = Fraction(0)
    for i in range(d):
        for j in range(d):
            if i == j:
                continue
            if scope is not None and pair_of(i, j) not in scope:
                continue
            c = int(counts[i, j])
            if truth.has_edge(i, j):
                mtp += Fraction(c, n)
                mfn += Fraction(n - c, n)
            else:
                mfp += Fraction(c, n)

    recall = mtp / (mtp + mfn) if (mtp + mfn) > 0 else None
    precision = mtp / (mtp + mfp) if (mtp + mfp) > 0 else None
    if recall is None or precision is None:
        f1 = None
    elif recall == 0 or precision == 0:
        f1 = Fraction(0)
    else:
        f1 = 2 * precision * recall / (precision + recall)
    return MetricsReport(
        frequencies=frequencies,
        mtp=mtp,
        mfp=mfp,
        mfn=mfn,
        recall=recall,
        precision=precision,
        f1=f1,
        solution_count=n,
        restricted_to=None if scope is None else frozenset(scope),
    )
