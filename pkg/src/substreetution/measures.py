"""Exact decision of invariant-probability existence on an orbit graph.

The balance conditions say the mass of each state equals the mass of its
a-preimages and also of its b-preimages.  Together with nonnegativity and
total mass one this is a small linear feasibility problem, solved here by
exact rational elimination: Gaussian on the equalities, Fourier-Motzkin on
what remains, and back-substitution to produce a concrete witness.  No
floating point: an infeasibility found this way is a proof.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import MalformedGraph
from .systems import OrbitGraph


@dataclass(frozen=True)
class MeasureResult:
    status: str  # "feasible" | "infeasible"
    assignment: dict | None
    certificate: tuple[str, ...]

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"

    def serialize(self) -> str:
        if not self.feasible:
            return "infeasible\n"
        lines = ["feasible"]
        lines += [f"mu {s} {val}" for s, val in self.assignment.items()]
        return "\n".join(lines) + "\n"


def _fmt(coeffs, const, names, rel):
    terms = [f"{c}*{names[i]}" for i, c in enumerate(coeffs) if c]
    lhs = " + ".join(terms) if terms else "0"
    return f"{lhs} {rel} {-const}"


def _substitute(row, var, expr, const):
    """In-place: replace x_var by sum(expr * x) + const inside `row`."""
    c = row[0][var]
    if not c:
        return
    row[0][var] = Fraction(0)
    for j, e in enumerate(expr):
        row[0][j] += c * e
    row[1] += c * const


def _eval(coeffs, const, values):
    return sum(c * values[j] for j, c in enumerate(coeffs) if c) + const


def invariant_measure(g: OrbitGraph) -> MeasureResult:
    """Decide the balance system exactly; feasible results carry a witness."""
    states = list(g.states)
    if not states:
        raise MalformedGraph("empty graph")
    for s in states:
        if s not in g.a_edges or s not in g.b_edges:
            raise MalformedGraph(f"state {s} lacks an edge")
    n = len(states)
    index = {s: i for i, s in enumerate(states)}

    eqs = []  # [coeffs, const] meaning sum + const == 0
    for edges in (g.a_edges, g.b_edges):
        for x in states:
            coeffs = [Fraction(0)] * n
            coeffs[index[x]] = Fraction(1)
            for y in states:
                if edges[y] == x:
                    coeffs[index[y]] -= 1
            eqs.append([coeffs, Fraction(0)])
    eqs.append([[Fraction(1)] * n, Fraction(-1)])

    ineqs = []  # [coeffs, const] meaning sum + const >= 0
    for i in range(n):
        coeffs = [Fraction(0)] * n
        coeffs[i] = Fraction(1)
        ineqs.append([coeffs, Fraction(0)])

    trail = []

    # Gaussian elimination over the equalities
    substitutions = []  # (var, expr, const): x_var = sum(expr * x) + const
    for row in eqs:
        pivot = next((i for i, c in enumerate(row[0]) if c), None)
        if pivot is None:
            if row[1] != 0:
                trail.append(_fmt(row[0], row[1], states, "=="))
                return MeasureResult("infeasible", None, tuple(trail))
            continue
        pc = row[0][pivot]
        expr = [-c / pc for c in row[0]]
        expr[pivot] = Fraction(0)
        const = -row[1] / pc
        substitutions.append((pivot, expr, const))
        trail.append(f"eliminate {states[pivot]}")
        for other in eqs:
            if other is not row:
                _substitute(other, pivot, expr, const)
        row[0][pivot] = Fraction(0)
        row[1] = Fraction(0)
        for other in ineqs:
            _substitute(other, pivot, expr, const)

    # Fourier-Motzkin over the variables the inequalities still mention
    free = [i for i in range(n) if any(row[0][i] for row in ineqs)]
    eliminated = []  # (var, lower bound exprs, upper bound exprs)
    rows = ineqs
    for var in free:
        lowers, uppers, keep = [], [], []
        for row in rows:
            c = row[0][var]
            if c:
                rest = list(row[0])
                rest[var] = Fraction(0)
                if c > 0:  # x >= -(rest + const)/c
                    lowers.append(([-x / c for x in rest], -row[1] / c))
                else:  # x <= (rest + const)/(-c)
                    uppers.append(([x / -c for x in rest], row[1] / -c))
            else:
                keep.append(row)
        rows = list(keep)
        for lo_c, lo_k in lowers:
            for up_c, up_k in uppers:
                rows.append([[u - l for u, l in zip(up_c, lo_c)], up_k - lo_k])
        eliminated.append((var, lowers, uppers))
        trail.append(f"project out {states[var]}")

    for row in rows:
        if not any(row[0]) and row[1] < 0:
            trail.append(_fmt(row[0], row[1], states, ">="))
            return MeasureResult("infeasible", None, tuple(trail))

    # Back-substitute a witness
    values = [Fraction(0)] * n
    for var, lowers, uppers in reversed(eliminated):
        lo = max((_eval(c, k, values) for c, k in lowers), default=None)
        up = min((_eval(c, k, values) for c, k in uppers), default=None)
        if lo is not None and up is not None:
            values[var] = (lo + up) / 2
        elif lo is not None:
            values[var] = lo
        elif up is not None:
            values[var] = min(up, Fraction(0))
    for var, expr, const in reversed(substitutions):
        values[var] = _eval(expr, const, values)

    assignment = {s: values[index[s]] for s in states}
    _verify(g, assignment)
    return MeasureResult("feasible", assignment, tuple(trail))


def _verify(g: OrbitGraph, mu: dict) -> None:
    total = sum(mu.values())
    if total != 1:
        raise AssertionError(f"witness mass {total} != 1")
    for s, val in mu.items():
        if val < 0:
            raise AssertionError(f"negative mass on {s}")
    for edges in (g.a_edges, g.b_edges):
        for x in g.states:
            pulled = sum(mu[y] for y in g.states if edges[y] == x)
            if pulled != mu[x]:
                raise AssertionError(f"balance fails at {x}")
