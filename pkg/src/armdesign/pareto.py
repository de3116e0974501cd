"""Dominance, Pareto-front extraction, and 2-D hypervolume (minimization).

Hypervolume is the area between the front and a fixed reference point; points
at or beyond the reference in either coordinate contribute zero (they are
clipped, not rejected, so early bad samples keep the curve defined).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence, TypeVar

import numpy as np


class ObjectiveValues(NamedTuple):
    """Bi-objective score of a design (both minimized)."""

    e_pos: float
    e_torque: float


DEFAULT_REF_POINT = (5.0, 5.0)


@dataclass(frozen=True)
class FrontPoint:
    objectives: ObjectiveValues
    trial_id: int


def dominates(a, b) -> bool:
    """Weak Pareto dominance: a <= b componentwise with at least one strict <."""
    a0, a1 = a
    b0, b1 = b
    return a0 <= b0 and a1 <= b1 and (a0 < b0 or a1 < b1)


def nondominated_indices(values) -> list[int]:
    """Indices of nondominated rows of an (n, 2) array, in input order.

    Duplicates of a nondominated pair are all retained (weak dominance has no
    strict improvement between equals). Sort-and-sweep; the all-pairs check
    lives in the tests as the oracle.
    """
    vals = np.asarray(values, dtype=float)
    n = len(vals)
    if n == 0:
        return []
    order = np.lexsort((vals[:, 1], vals[:, 0]))  # by f1, then f2

    keep = np.zeros(n, dtype=bool)
    best_f2_prev = np.inf  # min f2 among strictly smaller f1
    i = 0
    while i < n:
        j = i
        while j < n and vals[order[j], 0] == vals[order[i], 0]:
            j += 1
        group = order[i:j]
        group_min_f2 = vals[group, 1].min()
        for idx in group:
            f2 = vals[idx, 1]
            # dominated by an earlier-f1 point iff its f2 <= ours; by an
            # equal-f1 point iff its f2 is strictly smaller
            if f2 < best_f2_prev and f2 == group_min_f2:
                keep[idx] = True
        best_f2_prev = min(best_f2_prev, group_min_f2)
        i = j
    return [k for k in range(n) if keep[k]]


T = TypeVar("T")


def pareto_front(points: Sequence[T]) -> list[T]:
    """Nondominated subset of objects carrying an .objectives pair, input order kept."""
    values = [p.objectives for p in points]
    return [points[i] for i in nondominated_indices(values)]


def hypervolume_2d(values, ref=DEFAULT_REF_POINT) -> float:
    """Area of the union of rectangles [p, ref] over points strictly inside ref."""
    vals = np.asarray(values, dtype=float).reshape(-1, 2)
    rx, ry = float(ref[0]), float(ref[1])
    inside = vals[(vals[:, 0] < rx) & (vals[:, 1] < ry)]
    if len(inside) == 0:
        return 0.0
    front = inside[nondominated_indices(inside)]
    order = np.argsort(front[:, 0], kind="stable")
    front = front[order]
    area = 0.0
    prev_f2 = ry
    for f1, f2 in front:
        if f2 >= prev_f2:
            continue  # duplicate objective pair on the front
        area += (rx - f1) * (prev_f2 - f2)
        prev_f2 = f2
    return float(area)


def hypervolume_contributions(values, ref=DEFAULT_REF_POINT) -> np.ndarray:
    """Per-point drop in hypervolume when that point is removed from the set."""
    vals = np.asarray(values, dtype=float).reshape(-1, 2)
    total = hypervolume_2d(vals, ref)
    n = len(vals)
    contrib = np.empty(n)
    for i in range(n):
        rest = np.delete(vals, i, axis=0)
        contrib[i] = total - hypervolume_2d(rest, ref)
    return contrib
