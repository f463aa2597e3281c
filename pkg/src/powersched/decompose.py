"""Rounding a fractional interval solution into weighted integral candidates.

First strict containments in the support are unmade: two intervals where one
strictly contains the other are rewritten into two crossing-free intervals
with the same pointwise coverage and objective. The cleaned support is
totally ordered by start time (ties by end time), under which both starts
and ends are non-decreasing.

Each entry then owns the arc [s, s + x) on the unit circle, where s is the
fractional part of the total weight preceding it. Cutting the circle at
every arc boundary yields the candidate solutions: candidate k contains the
entries whose arc covers point k, and its weight is the length of its
segment. Weighted candidate membership reconstructs the fractional solution
exactly, and per-slot coverage limits carry over to every candidate.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import InternalInvariantError, Interval
from .rational import Rat, as_rat, frac_part

_UNCROSS_GUARD = 200000


def _combine(entries):
    acc: dict[Interval, Rat] = {}
    for iv, w in entries:
        acc[iv] = acc.get(iv, as_rat(0)) + w
    return sorted((iv, w) for iv, w in acc.items() if w > 0)


def uncross(entries: Sequence[tuple[Interval, Rat]]) -> list[tuple[Interval, Rat]]:
    """Remove strict containments, preserving coverage and objective.

    For nested intervals [a,d] strictly containing [b,c] with weights beta
    and alpha, the common weight min(alpha, beta) moves onto the crossing
    pair [a,c], [b,d]; any excess stays on the original interval. Each step
    strictly decreases sum(x * |I|^2), so the loop terminates.
    """
    work = _combine((iv, as_rat(w)) for iv, w in entries)
    for _ in range(_UNCROSS_GUARD):
        pair = None
        for i in range(len(work)):
            outer, beta = work[i]
            for k in range(i + 1, len(work)):
                inner, alpha = work[k]
                if outer.strictly_contains(inner):
                    pair = (i, k)
                    break
            if pair:
                break
        if pair is None:
            return work
        i, k = pair
        (outer, beta), (inner, alpha) = work[i], work[k]
        a, d = outer.start, outer.end
        b, c = inner.start, inner.end
        common = min(alpha, beta)
        rest = [e for n, e in enumerate(work) if n not in (i, k)]
        rest.append((Interval(a, c), common))
        rest.append((Interval(b, d), common))
        if beta > alpha:
            rest.append((outer, beta - alpha))
        elif alpha > beta:
            rest.append((inner, alpha - beta))
        work = _combine(rest)
    raise InternalInvariantError("uncrossing did not terminate")


@dataclass(frozen=True)
class CandidateSolution:
    """An integral interval multiset with its weight in the decomposition."""

    intervals: tuple[Interval, ...]
    weight: Rat

    def total_length(self) -> int:
        return sum(iv.length for iv in self.intervals)


def _split_heavy(entries):
    """Split weights above one into unit copies plus a fractional remainder.

    A unit-weight entry's arc covers the whole circle, so it lands in every
    candidate, which is exactly the multiplicity the multi-machine rounding
    needs.
    """
    out = []
    for iv, w in entries:
        while w > 1:
            out.append((iv, as_rat(1)))
            w = w - 1
        if w > 0:
            out.append((iv, w))
    return out


def _member(s: Rat, x: Rat, k: Rat) -> bool:
    return (s <= k < s + x) or (s <= k + 1 < s + x)


def convex_decompose(
    entries: Sequence[tuple[Interval, Rat]]
) -> list[CandidateSolution]:
    """Decompose an ordered support into weighted integral candidates.

    Cut points are the arc starts of all entries plus the fractional part of
    the total weight (the last arc's end, which need not coincide with any
    start). Weights are the segment lengths; they sum to one.
    """
    work = _split_heavy([(iv, as_rat(w)) for iv, w in entries])
    prefix = as_rat(0)
    arcs = []
    cuts = {as_rat(0)}
    for iv, w in work:
        s = frac_part(prefix)
        arcs.append((iv, s, w))
        cuts.add(s)
        prefix += w
    cuts.add(frac_part(prefix))
    points = sorted(cuts)

    candidates = []
    for idx, k in enumerate(points):
        weight = (points[idx + 1] - k) if idx + 1 < len(points) else (1 - k)
        if weight <= 0:
            continue
        members = tuple(iv for iv, s, w in arcs if _member(s, w, k))
        candidates.append(CandidateSolution(members, weight))
    total = sum((c.weight for c in candidates), as_rat(0))
    if total != 1:
        raise InternalInvariantError(f"candidate weights sum to {total}")
    return candidates


def overlap_count(candidate: CandidateSolution, a: int, b: int) -> int:
    """Number of candidate intervals overlapping [a, b] (touching counts)."""
    return sum(1 for iv in candidate.intervals if iv.overlaps_window(a, b))


def reconstruct_weight(candidates: Sequence[CandidateSolution],
                       interval: Interval) -> Rat:
    """Total candidate-weighted multiplicity of one interval."""
    return sum(
        (c.weight * sum(1 for iv in c.intervals if iv == interval)
         for c in candidates),
        as_rat(0),
    )
