"""Integer-program export for PAV and MAV, plus a reader for the same text format.

Format::

    IP v1
    var <name> binary            (or ``integer`` for the MAV bound D)
    max: <coeff> <var> + <coeff> <var> ...
    <coeff> <var> + ... <=|=|>= <rhs>

Coefficients are canonical rationals. Voter indices in variable names are
1-based (``x_<voter>_<level>``); candidate indices are the 0-based engine
indices (``y_<candidate>``, ``d_<voter>_<candidate>``).
"""

from __future__ import annotations

import re
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction

from .core import ElectionInstance, format_rational, parse_rational
from .solver.lp import Constraint

HEADER = "IP v1"
_VAR_LINE = re.compile(r"var\s+(\S+)\s+(binary|integer)")
_RELATIONS = ("<=", ">=", "=")


@dataclass(frozen=True)
class IpModel:
    variables: tuple[tuple[str, str], ...]  # (name, domain) in declaration order
    sense: str
    objective: tuple[tuple[Fraction, str], ...]
    constraints: tuple[Constraint, ...]

    def __post_init__(self):
        names = [name for name, _ in self.variables]
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        declared = set(names)
        used = {v for _, v in self.objective}
        for con in self.constraints:
            used.update(con.coefficients)
        undeclared = used - declared
        if undeclared:
            raise ValueError(f"undeclared variables: {sorted(undeclared)}")

    def objective_value(self, values: Mapping[str, Fraction]) -> Fraction:
        return sum((coeff * values.get(name, 0) for coeff, name in self.objective), Fraction(0))

    def is_feasible(self, values: Mapping[str, Fraction]) -> bool:
        for name, domain in self.variables:
            x = Fraction(values.get(name, 0))
            if x.denominator != 1 or (domain == "binary" and x not in (0, 1)):
                return False
        for con in self.constraints:
            lhs = sum((coeff * values.get(name, 0) for name, coeff in con.coefficients.items()), Fraction(0))
            if not {"<=": lhs <= con.rhs, ">=": lhs >= con.rhs, "=": lhs == con.rhs}[con.relation]:
                return False
        return True


def _pav_model(inst: ElectionInstance) -> IpModel:
    variables = []
    objective = []
    constraints = []
    for i in range(inst.n):
        for level in range(1, inst.k + 1):
            name = f"x_{i + 1}_{level}"
            variables.append((name, "binary"))
            objective.append((Fraction(1, level), name))
    variables += [(f"y_{c}", "binary") for c in range(inst.m)]
    constraints.append(Constraint({f"y_{c}": Fraction(1) for c in range(inst.m)}, "=", Fraction(inst.k)))
    for i, ballot in enumerate(inst.approvals):
        coefficients = {f"x_{i + 1}_{level}": Fraction(1) for level in range(1, inst.k + 1)}
        coefficients.update({f"y_{c}": Fraction(-1) for c in sorted(ballot)})
        constraints.append(Constraint(coefficients, "=", Fraction(0)))
    return IpModel(tuple(variables), "max", tuple(objective), tuple(constraints))


def _mav_model(inst: ElectionInstance) -> IpModel:
    variables = [(f"y_{c}", "binary") for c in range(inst.m)]
    variables += [(f"d_{i + 1}_{c}", "binary") for i in range(inst.n) for c in range(inst.m)]
    variables.append(("D", "integer"))
    constraints = [Constraint({f"y_{c}": Fraction(1) for c in range(inst.m)}, "=", Fraction(inst.k))]
    for i, ballot in enumerate(inst.approvals):
        for c in range(inst.m):
            if c in ballot:
                constraints.append(Constraint({f"d_{i + 1}_{c}": Fraction(1), f"y_{c}": Fraction(1)}, "=", Fraction(1)))
            else:
                constraints.append(Constraint({f"d_{i + 1}_{c}": Fraction(1), f"y_{c}": Fraction(-1)}, "=", Fraction(0)))
    for i in range(inst.n):
        coefficients = {f"d_{i + 1}_{c}": Fraction(1) for c in range(inst.m)}
        coefficients["D"] = Fraction(-1)
        constraints.append(Constraint(coefficients, "<=", Fraction(0)))
    return IpModel(tuple(variables), "min", ((Fraction(1), "D"),), tuple(constraints))


def build_ip(inst: ElectionInstance, rule: str) -> IpModel:
    if rule == "pav":
        return _pav_model(inst)
    if rule == "mav":
        return _mav_model(inst)
    raise ValueError(f"no integer program for rule {rule!r}; choose pav or mav")


def _terms(pairs) -> str:
    return " + ".join(f"{format_rational(coeff)} {name}" for coeff, name in pairs)


def format_ip(model: IpModel) -> str:
    lines = [HEADER]
    lines += [f"var {name} {domain}" for name, domain in model.variables]
    lines.append(f"{model.sense}: {_terms(model.objective)}")
    for con in model.constraints:
        pairs = [(coeff, name) for name, coeff in con.coefficients.items()]
        lines.append(f"{_terms(pairs)} {con.relation} {format_rational(con.rhs)}")
    return "\n".join(lines) + "\n"


def export_ip(inst: ElectionInstance, rule: str) -> str:
    """The PAV or MAV integer program for ``inst`` as text."""
    return format_ip(build_ip(inst, rule))


def _parse_terms(text: str, lineno: int) -> list[tuple[Fraction, str]]:
    pairs = []
    for chunk in text.split(" + "):
        parts = chunk.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: malformed term {chunk!r}")
        pairs.append((parse_rational(parts[0]), parts[1]))
    return pairs


def parse_ip(text: str) -> IpModel:
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines or lines[0] != HEADER:
        raise ValueError(f"missing {HEADER!r} header")
    variables = []
    sense = None
    objective: list = []
    constraints = []
    for lineno, line in enumerate(lines[1:], start=2):
        declared = _VAR_LINE.fullmatch(line)
        if declared:
            variables.append((declared.group(1), declared.group(2)))
            continue
        head, _, rest = line.partition(":")
        if head in ("min", "max") and rest:
            if sense is not None:
                raise ValueError(f"line {lineno}: second objective")
            sense, objective = head, _parse_terms(rest.strip(), lineno)
            continue
        parts = line.rsplit(" ", 2)
        if len(parts) != 3 or parts[1] not in _RELATIONS:
            raise ValueError(f"line {lineno}: cannot parse {line!r}")
        coefficients = {}
        for coeff, name in _parse_terms(parts[0], lineno):
            coefficients[name] = coefficients.get(name, Fraction(0)) + coeff
        constraints.append(Constraint(coefficients, parts[1], parse_rational(parts[2])))
    if sense is None:
        raise ValueError("no objective line")
    return IpModel(tuple(variables), sense, tuple(objective), tuple(constraints))


def committee_assignment(inst: ElectionInstance, rule: str, W) -> dict[str, Fraction]:
    """Variable values encoding committee ``W`` at its best objective value."""
    members = set(W)
    values = {f"y_{c}": Fraction(int(c in members)) for c in range(inst.m)}
    if rule == "pav":
        for i, ballot in enumerate(inst.approvals):
            covered = len(ballot & members)
            for level in range(1, inst.k + 1):
                values[f"x_{i + 1}_{level}"] = Fraction(int(level <= covered))
    elif rule == "mav":
        worst = 0
        for i, ballot in enumerate(inst.approvals):
            for c in range(inst.m):
                values[f"d_{i + 1}_{c}"] = Fraction(int((c in ballot) != (c in members)))
            worst = max(worst, len(ballot ^ members))
        values["D"] = Fraction(worst)
    else:
        raise ValueError(f"no integer program for rule {rule!r}")
    return values
