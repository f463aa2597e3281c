"""Linear programs for energy-minimal activity intervals.

Variables x_I choose how strongly each candidate interval is switched on;
the objective charges |I| + Q per unit. The single-machine model constrains
per-slot coverage, window volumes and per-job overlap. The multi-machine
model embeds a fractional feasibility flow f(i,t) plus ceiling rows that
force enough intervals to overlap every heavily loaded window.

Candidate intervals are either all integer intervals in [0, D] or, in
restricted mode, intervals with endpoints in a geometric point set W, which
keeps the model polynomial at a (1+eps) cost in the active time.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .core import Instance, Interval, forced_volume_interval, total_volume
from .rational import Rat, as_rat, rat_ceil
from .simplex import solve_bounded


@dataclass(frozen=True)
class LpRow:
    coeffs: dict
    sense: str
    rhs: Rat
    label: str


@dataclass
class LpModel:
    instance: Instance
    intervals: list[Interval]
    slots: list[tuple[int, int]]
    var_names: list[str]
    objective: list[Rat]
    upper: list
    rows: list[LpRow]
    x_index: dict[Interval, int]
    flow_index: dict[tuple[int, int], int] = field(default_factory=dict)

    def check_point(self, x_values: dict, flow_values: dict | None = None):
        """Labels of rows violated by the given assignment (zero elsewhere)."""
        vals = [as_rat(0)] * len(self.var_names)
        for iv, w in x_values.items():
            vals[self.x_index[iv]] = as_rat(w)
        for key, w in (flow_values or {}).items():
            vals[self.flow_index[key]] = as_rat(w)
        bad = []
        for j, v in enumerate(vals):
            u = self.upper[j]
            if v < 0 or (u is not None and v > u):
                bad.append(f"bound:{self.var_names[j]}")
        for row in self.rows:
            lhs = sum((a * vals[j] for j, a in row.coeffs.items()), as_rat(0))
            ok = (
                lhs <= row.rhs if row.sense == "<="
                else lhs >= row.rhs if row.sense == ">="
                else lhs == row.rhs
            )
            if not ok:
                bad.append(row.label)
        return bad

    def point_objective(self, x_values: dict) -> Rat:
        return sum(
            (as_rat(w) * (iv.length + self.instance.wakeup)
             for iv, w in x_values.items()),
            as_rat(0),
        )

    def lp_text(self) -> str:
        """Human-readable dump in LP text form for external cross-checking."""
        out = ["Minimize", " obj: " + " + ".join(
            f"{self.objective[j]} {self.var_names[j]}"
            for j in range(len(self.var_names)) if self.objective[j]
        ), "Subject To"]
        for row in self.rows:
            terms = " + ".join(
                f"{a} {self.var_names[j]}" for j, a in sorted(row.coeffs.items())
            )
            out.append(f" {row.label}: {terms} {row.sense} {row.rhs}")
        out.append("Bounds")
        for j, name in enumerate(self.var_names):
            ub = self.upper[j]
            out.append(f" 0 <= {name}" + ("" if ub is None else f" <= {ub}"))
        out.append("End")
        return "\n".join(out)


@dataclass(frozen=True)
class FractionalSolution:
    objective: Rat
    x: dict
    flows: dict
    model: LpModel

    def support(self) -> list[tuple[Interval, Rat]]:
        return sorted(self.x.items())

    def coverage(self, t: int) -> Rat:
        return sum(
            (w for iv, w in self.x.items() if iv.covers_slot(t)), as_rat(0)
        )


def enumerate_intervals(horizon: int, points: Sequence[int] | None = None
                        ) -> list[Interval]:
    """All candidate activity intervals, optionally restricted to endpoints
    in a point set."""
    if points is None:
        return [
            Interval(a, b)
            for a in range(horizon)
            for b in range(a + 1, horizon + 1)
        ]
    pts = sorted(set(points))
    return [
        Interval(a, b) for i, a in enumerate(pts) for b in pts[i + 1:]
    ]


def build_point_set(instance: Instance, epsilon) -> list[int]:
    """Job endpoints plus geometrically spaced offsets around them.

    Around every release/deadline t the set holds the points at distance
    ceil((1+eps)^k) on both sides, so any interval endpoint can be pushed
    outward to a point at relative cost eps. Always contains 0 and D.
    """
    eps = as_rat(epsilon)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    horizon = instance.horizon
    anchors = sorted({j.release for j in instance.jobs}
                     | {j.deadline for j in instance.jobs})
    offsets = []
    step = as_rat(1)
    ratio = 1 + eps
    while True:
        d = rat_ceil(step)
        if d > horizon:
            break
        if not offsets or offsets[-1] != d:
            offsets.append(d)
        step *= ratio
    points = set(anchors) | {0, horizon}
    for t in anchors:
        for d in offsets:
            if t - d >= 0:
                points.add(t - d)
            if t + d <= horizon:
                points.add(t + d)
    return sorted(points)


def _slot_list(instance: Instance, points: Sequence[int] | None
               ) -> list[tuple[int, int]]:
    if points is None:
        return [(t, t + 1) for t in range(instance.horizon)]
    pts = sorted(set(points) | {0, instance.horizon})
    return list(zip(pts, pts[1:]))


def _volume_windows(instance: Instance) -> list[tuple[int, int, int]]:
    """Release/deadline window pairs with positive contained volume.

    Any window [a,b] is dominated by [a',b'] where a' is the first release
    at or after a and b' the last deadline at or before b: the contained
    volume is identical while every coverage coefficient shrinks, so the
    dominating row implies the dominated one. Enumerating only these pairs
    is therefore exact.
    """
    rels = sorted({j.release for j in instance.jobs})
    deads = sorted({j.deadline for j in instance.jobs})
    rows = []
    for a in rels:
        for b in deads:
            if a < b:
                v = total_volume(instance, a, b)
                if v > 0:
                    rows.append((a, b, v))
    return rows


def build_lp_single(instance: Instance, intervals: Sequence[Interval],
                    points: Sequence[int] | None = None) -> LpModel:
    """Single-machine model: slot capacity, window volume, per-job overlap."""
    if instance.machines != 1:
        raise ValueError("single-machine model needs machines == 1")
    intervals = sorted(intervals)
    x_index = {iv: j for j, iv in enumerate(intervals)}
    q = instance.wakeup
    objective = [as_rat(iv.length + q) for iv in intervals]
    upper = [as_rat(1)] * len(intervals)
    names = [f"x_{iv.start}_{iv.end}" for iv in intervals]
    rows: list[LpRow] = []

    slots = _slot_list(instance, points)
    for a, b in slots:
        coeffs = {
            x_index[iv]: as_rat(1)
            for iv in intervals if iv.start <= a and b <= iv.end
        }
        if coeffs:
            rows.append(LpRow(coeffs, "<=", as_rat(1), f"slot_{a}_{b}"))

    for a, b, v in _volume_windows(instance):
        coeffs = {}
        for iv in intervals:
            ln = iv.intersection_length(a, b)
            if ln:
                coeffs[x_index[iv]] = as_rat(ln)
        rows.append(LpRow(coeffs, ">=", as_rat(v), f"volume_{a}_{b}"))

    for j in instance.jobs:
        coeffs = {
            x_index[iv]: as_rat(1)
            for iv in intervals if iv.overlaps_window(j.release, j.deadline)
        }
        rows.append(LpRow(coeffs, ">=", as_rat(1), f"job_{j.id}"))

    return LpModel(instance, intervals, slots, names, objective, upper,
                   rows, x_index)


def _ceiling_windows(instance: Instance, horizon: int,
                     points: Sequence[int] | None) -> list[tuple[int, int, int]]:
    """Windows with a positive overlap requirement, dominated rows pruned.

    A nested window with an equal-or-larger requirement implies the outer
    one because overlapping the inner window implies overlapping the outer.
    """
    if points is None:
        pts = list(range(horizon + 1))
    else:
        pts = sorted(set(points))
    raw = []
    for i, a in enumerate(pts):
        for b in pts[i + 1:]:
            forced = sum(
                forced_volume_interval(j, a, b) for j in instance.jobs
            )
            if forced > 0:
                raw.append((a, b, rat_ceil(as_rat(forced) / (b - a))))
    keep = []
    for a, b, need in raw:
        dominated = False
        for a2, b2, need2 in raw:
            if (a2, b2) != (a, b) and a <= a2 and b2 <= b and need2 >= need:
                dominated = True
                break
        if not dominated:
            keep.append((a, b, need))
    return keep


def build_lp_multi(instance: Instance, intervals: Sequence[Interval],
                   points: Sequence[int] | None = None) -> LpModel:
    """Multi-machine model with an embedded fractional feasibility flow."""
    intervals = sorted(intervals)
    x_index = {iv: j for j, iv in enumerate(intervals)}
    m = instance.machines
    q = instance.wakeup
    objective = [as_rat(iv.length + q) for iv in intervals]
    upper: list = [as_rat(m)] * len(intervals)
    names = [f"x_{iv.start}_{iv.end}" for iv in intervals]
    slots = _slot_list(instance, points)

    flow_index: dict[tuple[int, int], int] = {}
    for k, (a, b) in enumerate(slots):
        for j in instance.jobs:
            if j.release <= a and b <= j.deadline:
                flow_index[(j.id, k)] = len(names)
                names.append(f"f_{j.id}_{a}_{b}")
                objective.append(as_rat(0))
                upper.append(as_rat(b - a))

    rows: list[LpRow] = []
    for k, (a, b) in enumerate(slots):
        cover = {
            x_index[iv]: as_rat(1)
            for iv in intervals if iv.start <= a and b <= iv.end
        }
        if cover:
            rows.append(LpRow(cover, "<=", as_rat(m), f"slot_{a}_{b}"))
        f_here = {
            flow_index[(j.id, k)]: as_rat(1)
            for j in instance.jobs if (j.id, k) in flow_index
        }
        if f_here:
            coeffs = dict(f_here)
            ln = b - a
            for col, one in cover.items():
                coeffs[col] = -as_rat(ln)
            rows.append(LpRow(coeffs, "<=", as_rat(0), f"flowcap_{a}_{b}"))

    for j in instance.jobs:
        coeffs = {
            col: as_rat(1)
            for (jid, _), col in flow_index.items() if jid == j.id
        }
        rows.append(LpRow(coeffs, "==", as_rat(j.ptime), f"demand_{j.id}"))

    for a, b, need in _ceiling_windows(instance, instance.horizon, points):
        coeffs = {
            x_index[iv]: as_rat(1)
            for iv in intervals if iv.overlaps_window(a, b)
        }
        rows.append(LpRow(coeffs, ">=", as_rat(need), f"overlap_{a}_{b}"))

    return LpModel(instance, intervals, slots, names, objective, upper,
                   rows, x_index, flow_index)


def solve_lp(model: LpModel) -> FractionalSolution:
    """Exact optimal basic solution; raises InfeasibleModelError otherwise."""
    rows = [(r.coeffs, r.sense, r.rhs) for r in model.rows]
    res = solve_bounded(model.objective, model.upper, rows)
    x = {}
    for iv, j in model.x_index.items():
        if j < len(res.values) and res.values[j] > 0:
            x[iv] = res.values[j]
    flows = {}
    for key, j in model.flow_index.items():
        if j < len(res.values) and res.values[j] > 0:
            flows[key] = res.values[j]
    return FractionalSolution(res.objective, x, flows, model)
