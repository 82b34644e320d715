"""Exact linear programming over the rationals.

A dense two-phase tableau simplex with Bland's rule. Bland's rule
guarantees termination, so degenerate problems cannot cycle. Sizes here are
tiny (tens of variables), so clarity beats speed.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

RELATIONS = ("<=", "=", ">=")


@dataclass(frozen=True)
class Constraint:
    coefficients: Mapping[str, Fraction]
    relation: str
    rhs: Fraction


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    values: dict[str, Fraction] | None = None
    objective: Fraction | None = None

    @property
    def feasible(self) -> bool:
        return self.status != "infeasible"


@dataclass
class LinearProgram:
    """A linear program over named variables.

    Variables default to the bounds ``[0, inf)``; pass ``lower=None`` for a
    free variable. Coefficients may be given as a mapping from variable name
    or as a dense sequence aligned with :attr:`variables`.
    """

    variables: list[str] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)
    objective: dict[str, Fraction] | None = None
    sense: str = "max"
    bounds: dict[str, tuple[Fraction | None, Fraction | None]] = field(default_factory=dict)

    def add_variable(self, name: str, lower=0, upper=None) -> str:
        if name in self.bounds:
            raise ValueError(f"duplicate variable {name!r}")
        self.variables.append(name)
        self.bounds[name] = (
            None if lower is None else Fraction(lower),
            None if upper is None else Fraction(upper),
        )
        return name

    def _coefficients(self, coefficients) -> dict[str, Fraction]:
        if isinstance(coefficients, Mapping):
            result = {}
            for name, value in coefficients.items():
                if name not in self.bounds:
                    raise ValueError(f"unknown variable {name!r}")
                if value:
                    result[name] = result.get(name, 0) + Fraction(value)
            return result
        coefficients = list(coefficients)
        if len(coefficients) != len(self.variables):
            raise ValueError(f"expected {len(self.variables)} coefficients, got {len(coefficients)}")
        return {name: Fraction(v) for name, v in zip(self.variables, coefficients) if v}

    def add_constraint(self, coefficients, relation: str, rhs) -> None:
        if relation not in RELATIONS:
            raise ValueError(f"relation must be one of {RELATIONS}, got {relation!r}")
        self.constraints.append(Constraint(self._coefficients(coefficients), relation, Fraction(rhs)))

    def set_objective(self, coefficients, sense: str = "max") -> None:
        if sense not in ("max", "min"):
            raise ValueError("sense must be 'max' or 'min'")
        self.objective = self._coefficients(coefficients)
        self.sense = sense

    def is_satisfied_by(self, values: Mapping[str, Fraction]) -> bool:
        for name in self.variables:
            lo, hi = self.bounds[name]
            if (lo is not None and values[name] < lo) or (hi is not None and values[name] > hi):
                return False
        for con in self.constraints:
            lhs = sum((coef * values[name] for name, coef in con.coefficients.items()), Fraction(0))
            if not _holds(lhs, con.relation, con.rhs):
                return False
        return True


def _holds(lhs, relation, rhs) -> bool:
    if relation == "<=":
        return lhs <= rhs
    if relation == ">=":
        return lhs >= rhs
    return lhs == rhs


class _Tableau:
    def __init__(self, rows, rhs, basis, ncols):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.ncols = ncols

    def pivot(self, r: int, col: int, objective: list, objective_rhs: list) -> None:
        row = self.rows[r]
        inv = 1 / row[col]
        if inv != 1:
            row[:] = [a * inv for a in row]
            self.rhs[r] *= inv
        support = [j for j, a in enumerate(row) if a]
        pivot_rhs = self.rhs[r]
        for i, other in enumerate(self.rows):
            if i != r and other[col]:
                f = other[col]
                for j in support:
                    other[j] -= f * row[j]
                self.rhs[i] -= f * pivot_rhs
        f = objective[col]
        if f:
            for j in support:
                objective[j] -= f * row[j]
            objective_rhs[0] -= f * pivot_rhs
        self.basis[r] = col

    def run(self, objective: list, objective_rhs: list, allowed) -> str:
        """Minimize; ``objective`` holds reduced costs. Returns final status."""
        while True:
            entering = next((j for j in range(self.ncols) if allowed[j] and objective[j] < 0), None)
            if entering is None:
                return "optimal"
            best = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "unbounded"
            self.pivot(best[1], entering, objective, objective_rhs)


def lp_solve(lp: LinearProgram) -> LPResult:
    """Solve ``lp`` exactly.

    Returns an :class:`LPResult` whose ``status`` is ``"optimal"`` (with an
    exact optimal assignment), ``"infeasible"`` or ``"unbounded"``. Without
    an objective, any feasible assignment is reported as optimal.
    """
    # Substitute bounded variables by non-negative columns: x = offset + sum(sign * col).
    columns = 0
    mapping: dict[str, tuple[Fraction, list[tuple[int, int]]]] = {}
    bound_rows: list[tuple[dict[int, Fraction], str, Fraction]] = []
    for name in lp.variables:
        lo, hi = lp.bounds[name]
        if lo is not None:
            mapping[name] = (lo, [(columns, 1)])
            if hi is not None:
                if hi < lo:
                    return LPResult("infeasible")
                bound_rows.append(({columns: Fraction(1)}, "<=", hi - lo))
            columns += 1
        elif hi is not None:
            mapping[name] = (hi, [(columns, -1)])
            columns += 1
        else:
            mapping[name] = (Fraction(0), [(columns, 1), (columns + 1, -1)])
            columns += 2

    def translate(coefficients: Mapping[str, Fraction]):
        row: dict[int, Fraction] = {}
        shift = Fraction(0)
        for name, coef in coefficients.items():
            offset, cols = mapping[name]
            shift += coef * offset
            for col, sign in cols:
                row[col] = row.get(col, 0) + sign * coef
        return row, shift

    raw_rows = []
    for con in lp.constraints:
        row, shift = translate(con.coefficients)
        raw_rows.append((row, con.relation, con.rhs - shift))
    raw_rows.extend(bound_rows)

    normalized = []
    for row, relation, rhs in raw_rows:
        if rhs < 0:
            row = {j: -a for j, a in row.items()}
            rhs = -rhs
            relation = {"<=": ">=", ">=": "<=", "=": "="}[relation]
        normalized.append((row, relation, rhs))

    structural = columns
    extra = sum(1 for _, rel, _ in normalized if rel != "=")
    artificial_count = sum(1 for _, rel, _ in normalized if rel != "<=")
    ncols = structural + extra + artificial_count
    rows, rhs, basis = [], [], []
    slack = structural
    artificial = structural + extra
    artificial_cols = set()
    for row, relation, value in normalized:
        dense = [Fraction(0)] * ncols
        for j, a in row.items():
            dense[j] = Fraction(a)
        if relation == "<=":
            dense[slack] = Fraction(1)
            basis.append(slack)
            slack += 1
        else:
            if relation == ">=":
                dense[slack] = Fraction(-1)
                slack += 1
            dense[artificial] = Fraction(1)
            basis.append(artificial)
            artificial_cols.add(artificial)
            artificial += 1
        rows.append(dense)
        rhs.append(Fraction(value))
    tableau = _Tableau(rows, rhs, basis, ncols)

    if artificial_cols:
        objective = [Fraction(1) if j in artificial_cols else Fraction(0) for j in range(ncols)]
        objective_rhs = [Fraction(0)]
        for i, b in enumerate(basis):
            if b in artificial_cols:
                objective = [o - a for o, a in zip(objective, rows[i])]
                objective_rhs[0] -= rhs[i]
        tableau.run(objective, objective_rhs, [True] * ncols)
        if objective_rhs[0] != 0:
            return LPResult("infeasible")
        # Drive zero-level artificials out of the basis or drop redundant rows.
        i = 0
        while i < len(tableau.rows):
            if tableau.basis[i] in artificial_cols:
                col = next(
                    (j for j in range(ncols) if j not in artificial_cols and tableau.rows[i][j]),
                    None,
                )
                if col is None:
                    del tableau.rows[i], tableau.rhs[i], tableau.basis[i]
                    continue
                tableau.pivot(i, col, [Fraction(0)] * ncols, [Fraction(0)])
            i += 1

    allowed = [j not in artificial_cols for j in range(ncols)]
    status = "optimal"
    if lp.objective is not None:
        cost_row, _ = translate(lp.objective)
        sign = -1 if lp.sense == "max" else 1
        cost = [Fraction(0)] * ncols
        for j, a in cost_row.items():
            cost[j] = sign * a
        objective = list(cost)
        objective_rhs = [Fraction(0)]
        for i, b in enumerate(tableau.basis):
            if cost[b]:
                f = cost[b]
                objective = [o - f * a for o, a in zip(objective, tableau.rows[i])]
                objective_rhs[0] -= f * tableau.rhs[i]
        status = tableau.run(objective, objective_rhs, allowed)
        if status == "unbounded":
            return LPResult("unbounded")

    column_values = [Fraction(0)] * ncols
    for i, b in enumerate(tableau.basis):
        column_values[b] = tableau.rhs[i]
    values = {}
    for name in lp.variables:
        offset, cols = mapping[name]
        values[name] = offset + sum((sign * column_values[col] for col, sign in cols), Fraction(0))
    objective_value = None
    if lp.objective is not None:
        objective_value = sum((coef * values[name] for name, coef in lp.objective.items()), Fraction(0))
    return LPResult(status, values, objective_value)
