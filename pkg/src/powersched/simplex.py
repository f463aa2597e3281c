"""Exact primal simplex over rationals with variable upper bounds.

Dense two-phase tableau implementation. Upper bounds are handled implicitly
(nonbasic variables sit at either bound; the ratio test allows bound flips),
which keeps the row count at the number of structural constraints. Pricing
is largest-reduced-cost with a permanent switch to Bland's rule after a long
degenerate streak, so termination is guaranteed while typical runs stay
fast. Everything is exact; solving the same model twice gives identical
results.
"""
from __future__ import annotations

from dataclasses import dataclass

from .rational import Rat, as_rat

BASIC, AT_LOWER, AT_UPPER, BANNED = 0, 1, 2, 3

# consecutive degenerate pivots tolerated before switching to Bland pricing
_DEGENERATE_STREAK = 50


class SimplexError(Exception):
    pass


class InfeasibleModelError(SimplexError):
    pass


class UnboundedModelError(SimplexError):
    pass


@dataclass
class SimplexResult:
    objective: Rat
    values: list


class BoundedSimplex:
    """minimize c.x  s.t.  rows (A_i x <=|==|>= b_i),  0 <= x_j <= u_j."""

    def __init__(self, objective, upper, rows):
        self.n_struct = len(objective)
        self.c_struct = [as_rat(v) for v in objective]
        self.upper: list = [None if u is None else as_rat(u) for u in upper]
        self._build(rows)

    def _build(self, rows):
        zero = as_rat(0)
        one = as_rat(1)
        # normalize right-hand sides to be non-negative, drop vacuous rows
        norm = []
        for coeffs, sense, rhs in rows:
            rhs = as_rat(rhs)
            if not coeffs:
                if (sense == "==" and rhs != 0) or (sense == "<=" and rhs < 0) \
                        or (sense == ">=" and rhs > 0):
                    raise InfeasibleModelError("constant row unsatisfiable")
                continue
            if rhs < 0:
                coeffs = {j: -as_rat(a) for j, a in coeffs.items()}
                rhs = -rhs
                sense = {"<=": ">=", ">=": "<=", "==": "=="}[sense]
            norm.append((coeffs, sense, rhs))

        n = self.n_struct
        n_rows = len(norm)
        slack_col = {}
        art_col = {}
        col = n
        for i, (_, sense, _) in enumerate(norm):
            if sense in ("<=", ">="):
                slack_col[i] = col
                col += 1
        for i, (_, sense, rhs) in enumerate(norm):
            if sense in (">=", "=="):
                art_col[i] = col
                col += 1
        self.n_cols = col
        self.artificials = set(art_col.values())

        self.tab = []
        self.basis = []
        self.xb = []
        for i, (coeffs, sense, rhs) in enumerate(norm):
            row = [zero] * self.n_cols
            for j, a in coeffs.items():
                row[j] = as_rat(a)
            if i in slack_col:
                row[slack_col[i]] = one if sense == "<=" else -one
            if i in art_col:
                row[art_col[i]] = one
                self.basis.append(art_col[i])
            else:
                self.basis.append(slack_col[i])
            self.tab.append(row)
            self.xb.append(rhs)

        self.status = [AT_LOWER] * self.n_cols
        for b in self.basis:
            self.status[b] = BASIC
        self.all_upper = list(self.upper) + [None] * (self.n_cols - self.n_struct)

    # -- pivoting machinery -------------------------------------------------

    def _pivot(self, r, j, cost):
        prow = self.tab[r]
        piv = prow[j]
        if piv != 1:
            inv = 1 / piv
            prow = [a * inv for a in prow]
            self.tab[r] = prow
        for i, row in enumerate(self.tab):
            if i == r:
                continue
            f = row[j]
            if f:
                self.tab[i] = [a - f * b if b else a for a, b in zip(row, prow)]
        f = cost[j]
        if f:
            for k, b in enumerate(prow):
                if b:
                    cost[k] -= f * b

    def _entering(self, cost, bland):
        best, best_score = -1, None
        for j in range(self.n_cols):
            st = self.status[j]
            if st == AT_LOWER:
                score = -cost[j]
            elif st == AT_UPPER:
                score = cost[j]
            else:
                continue
            if score <= 0:
                continue
            if bland:
                return j
            if best_score is None or score > best_score:
                best, best_score = j, score
        return best if best_score is not None else -1

    def _optimize(self, cost):
        zero = as_rat(0)
        bland = False
        degen = 0
        guard = 5000 + 200 * (len(self.tab) + self.n_cols)
        for _ in range(guard):
            j = self._entering(cost, bland)
            if j < 0:
                return
            direction = 1 if self.status[j] == AT_LOWER else -1
            col = [row[j] for row in self.tab]

            # ratio test: step t moves basic i by -direction*t*col[i]
            step = None
            leave_row = -1
            leave_to = AT_LOWER
            for i, y in enumerate(col):
                if not y:
                    continue
                delta = y if direction == 1 else -y
                if delta > 0:
                    t = self.xb[i] / delta
                    to = AT_LOWER
                else:
                    ub = self.all_upper[self.basis[i]]
                    if ub is None:
                        continue
                    t = (ub - self.xb[i]) / (-delta)
                    to = AT_UPPER
                if step is None or t < step or (
                    t == step and leave_row >= 0
                    and self.basis[i] < self.basis[leave_row]
                ):
                    step, leave_row, leave_to = t, i, to
            flip_limit = self.all_upper[j]
            if flip_limit is not None and (step is None or flip_limit <= step):
                # bound flip: variable crosses to its other bound, basis fixed
                for i, y in enumerate(col):
                    if y:
                        self.xb[i] -= direction * flip_limit * y
                self.status[j] = AT_UPPER if direction == 1 else AT_LOWER
                degen = 0
                continue
            if step is None:
                raise UnboundedModelError("objective unbounded below")
            if step == 0:
                degen += 1
                if degen > _DEGENERATE_STREAK:
                    bland = True
            else:
                degen = 0
            enter_value = (zero if direction == 1 else flip_limit) + direction * step
            for i, y in enumerate(col):
                if y and i != leave_row:
                    self.xb[i] -= direction * step * y
            leaving = self.basis[leave_row]
            self.status[leaving] = leave_to
            self.basis[leave_row] = j
            self.status[j] = BASIC
            self.xb[leave_row] = enter_value
            self._pivot(leave_row, j, cost)
        raise SimplexError("iteration guard exceeded")

    def _reduced_costs(self, c_full):
        cost = list(c_full)
        for i, b in enumerate(self.basis):
            cb = c_full[b]
            if cb:
                row = self.tab[i]
                for k, a in enumerate(row):
                    if a:
                        cost[k] -= cb * a
        return cost

    # -- phases -------------------------------------------------------------

    def solve(self) -> SimplexResult:
        zero = as_rat(0)
        if self.artificials:
            c1 = [zero] * self.n_cols
            for j in self.artificials:
                c1[j] = as_rat(1)
            self._optimize(self._reduced_costs(c1))
            infeas = sum(
                (self.xb[i] for i, b in enumerate(self.basis)
                 if b in self.artificials),
                zero,
            )
            if infeas > 0:
                raise InfeasibleModelError("phase one ended above zero")
            self._expel_artificials()
            for j in self.artificials:
                if self.status[j] != BASIC:
                    self.status[j] = BANNED

        c2 = [zero] * self.n_cols
        for j, v in enumerate(self.c_struct):
            c2[j] = v
        self._optimize(self._reduced_costs(c2))
        values = self._values()
        obj = sum((self.c_struct[j] * values[j]
                   for j in range(self.n_struct)), zero)
        return SimplexResult(obj, values[: self.n_struct])

    def _expel_artificials(self):
        # swap every basic artificial (all at value zero now) for some real
        # column, or drop the row when it has become redundant
        r = 0
        while r < len(self.tab):
            b = self.basis[r]
            if b not in self.artificials:
                r += 1
                continue
            row = self.tab[r]
            pivot_col = -1
            for j in range(self.n_cols):
                if j in self.artificials or self.status[j] == BASIC:
                    continue
                if row[j]:
                    pivot_col = j
                    break
            if pivot_col < 0:
                del self.tab[r], self.basis[r], self.xb[r]
                self.status[b] = BANNED
                continue
            j = pivot_col
            # zero-step basis swap: nothing moves, labels change
            enter_value = (
                self.all_upper[j] if self.status[j] == AT_UPPER else as_rat(0)
            )
            self.status[b] = BANNED
            self.basis[r] = j
            self.status[j] = BASIC
            self.xb[r] = enter_value
            self._pivot(r, j, [as_rat(0)] * self.n_cols)
            r += 1

    def _values(self):
        vals = [as_rat(0)] * self.n_cols
        for j in range(self.n_cols):
            if self.status[j] == AT_UPPER:
                vals[j] = self.all_upper[j]
        for i, b in enumerate(self.basis):
            vals[b] = self.xb[i]
        return vals


def solve_bounded(objective, upper, rows) -> SimplexResult:
    """One-shot convenience wrapper."""
    if not objective:
        for coeffs, sense, rhs in rows:
            nz = {j: a for j, a in coeffs.items() if as_rat(a) != 0}
            rhs = as_rat(rhs)
            if (sense == "==" and rhs != 0) or (sense == "<=" and rhs < 0) \
                    or (sense == ">=" and rhs > 0):
                if not nz:
                    raise InfeasibleModelError("constant row unsatisfiable")
        return SimplexResult(as_rat(0), [])
    return BoundedSimplex(objective, upper, rows).solve()
