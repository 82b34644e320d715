"""Load-balancing rules: sequential Phragmén, lexmin-Phragmén and Rule X.

Loads are the shares of a unit cost per committee member that the
member's approvers carry. Everything is exact: loads and budgets are
``Fraction`` values.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    DEFAULT_CAP,
    DEFAULT_TIE,
    CapExceeded,
    ElectionInstance,
    RuleResult,
    TieOrder,
    Verdict,
    committee,
)
from .search import CloneStructure, best_patterns
from .solver.flow import FlowNetwork, min_cost_flow
from .solver.lp import LinearProgram, lp_solve

SUBSET_LIMIT = 20  # lexmin decomposition enumerates subsets of up to 2^20 member groups


@dataclass(frozen=True)
class PhragmenRound:
    candidate: int
    load: Fraction | None  # None when the seat was filled by tie order alone
    loads: tuple[Fraction, ...]  # voter loads after the round


def _phragmen_rounds(inst, loads, chosen, rounds, tie):
    loads = list(loads)
    chosen = list(chosen)
    trace = []
    for _ in range(rounds):
        best = None
        for c in tie.candidates_in_order(set(range(inst.m)) - set(chosen)):
            voters = inst.approvers[c]
            if not voters:
                continue
            load = (1 + sum((loads[i] for i in voters), Fraction(0))) / len(voters)
            if best is None or load < best[1]:
                best = (c, load)
        if best is None:
            c = tie.candidates_in_order(set(range(inst.m)) - set(chosen))[0]
            chosen.append(c)
            trace.append(PhragmenRound(c, None, tuple(loads)))
            continue
        c, load = best
        for i in inst.approvers[c]:
            loads[i] = load
        chosen.append(c)
        trace.append(PhragmenRound(c, load, tuple(loads)))
    return chosen, trace


def seq_phragmen(
    inst: ElectionInstance,
    tie: TieOrder = DEFAULT_TIE,
    start_loads: Sequence[Fraction] | None = None,
) -> RuleResult:
    """Sequential Phragmén in its discrete formulation.

    Each round selects the candidate ``c`` minimizing
    ``(1 + sum of current loads of N(c)) / |N(c)|`` and raises the loads of
    its approvers to that value. Candidates nobody approves are only used to
    fill seats once every approved candidate is taken.
    """
    tie.validate(inst)
    loads = [Fraction(0)] * inst.n if start_loads is None else [Fraction(x) for x in start_loads]
    if len(loads) != inst.n:
        raise ValueError("start_loads needs one entry per voter")
    chosen, trace = _phragmen_rounds(inst, loads, [], inst.k, tie)
    max_load = max(trace[-1].loads) if trace else Fraction(0)
    return RuleResult([committee(chosen)], max_load, tuple(trace), rule="seq-phragmen")


# ----------------------------------------------------------------------------
# lexmin-Phragmén


@dataclass(frozen=True)
class LoadDistribution:
    """A valid load distribution for a committee.

    ``payments[(c, i)]`` is the part of member ``c`` carried by voter ``i``.
    """

    voter_loads: tuple[Fraction, ...]
    payments: dict

    @property
    def sorted_loads(self) -> tuple[Fraction, ...]:
        return tuple(sorted(self.voter_loads, reverse=True))


def _densest_levels(items, approvers_of, weight_of):
    """Peel off densest groups: returns [(load, items, voters)].

    ``items`` maps an item to its multiplicity (committee members it stands
    for); ``approvers_of(item)`` is a frozenset of voter nodes and
    ``weight_of(node)`` counts the voters a node stands for.
    """
    remaining = dict(items)
    taken: set = set()
    levels = []
    while remaining:
        keys = list(remaining)
        if len(keys) > SUBSET_LIMIT:
            raise CapExceeded(f"lexmin decomposition over {len(keys)} member groups")
        best = None
        for size in range(1, len(keys) + 1):
            for subset in itertools.combinations(keys, size):
                voters = frozenset().union(*(approvers_of(x) for x in subset)) - taken
                weight = sum(weight_of(v) for v in voters)
                mass = sum(remaining[x] for x in subset)
                if weight == 0:
                    raise ValueError("a committee member has no approvers")
                density = Fraction(mass, weight)
                if best is None or density > best[0] or (density == best[0] and size > len(best[1])):
                    best = (density, subset, voters)
        density, subset, voters = best
        levels.append((density, subset, voters))
        taken |= voters
        for x in subset:
            del remaining[x]
    return levels


def lexmin_loads(inst: ElectionInstance, W: Iterable[int], method: str = "decomposition") -> LoadDistribution:
    """The load distribution of ``W`` whose descending voter-load vector is lexicographically least.

    ``method="decomposition"`` repeatedly extracts the densest member group
    (most members per approving voter); its approvers all carry exactly that
    density, and the rest is solved recursively. ``method="lp"`` solves a
    sequence of exact min-max linear programs instead and serves as an
    independent cross-check.
    """
    W = committee(W)
    for c in W:
        if not inst.approvers[c]:
            raise ValueError(f"committee member {c} has no approvers")
    if method == "lp":
        return _lexmin_loads_lp(inst, W)
    if method != "decomposition":
        raise ValueError(f"unknown method {method!r}")
    groups: dict[frozenset, list[int]] = {}
    for c in W:
        groups.setdefault(inst.approvers[c], []).append(c)
    items = {approvers: len(members) for approvers, members in groups.items()}
    levels = _densest_levels(items, lambda x: x, lambda v: 1)
    loads = [Fraction(0)] * inst.n
    payments = {}
    for density, subset, voters in levels:
        members = [c for x in subset for c in groups[x]]
        voters = sorted(voters)
        for i in voters:
            loads[i] = density
        payments.update(_split_level(inst, members, voters, density))
    return LoadDistribution(tuple(loads), payments)


def _split_level(inst, members, voters, density):
    """Payments in which every voter of a level carries exactly ``density``."""
    scale = len(voters)  # one member is worth `scale` units, one voter carries len(members)
    net = FlowNetwork(source="source", sink="sink")
    arcs = []
    for c in members:
        net.add_arc("source", ("member", c), scale, scale)
    for c in members:
        for i in voters:
            if i in inst.approvers[c]:
                arcs.append((c, i, net.add_arc(("member", c), ("voter", i), scale)))
    for i in voters:
        net.add_arc(("voter", i), "sink", len(members), len(members))
    solution = min_cost_flow(net, scale * len(members))
    assert solution is not None, "densest level must be exactly payable"
    return {(c, i): Fraction(solution.flows[a], scale) for c, i, a in arcs if solution.flows[a]}


def _lexmin_loads_lp(inst: ElectionInstance, W) -> LoadDistribution:
    pairs = [(c, i) for c in W for i in sorted(inst.approvers[c])]
    involved = sorted({i for _, i in pairs})
    fixed = {i: Fraction(0) for i in range(inst.n) if i not in involved}

    def base_program(limit=None):
        lp = LinearProgram()
        for c, i in pairs:
            lp.add_variable(f"l_{c}_{i}")
        if limit is None:
            lp.add_variable("t")
        for c in W:
            lp.add_constraint({f"l_{c}_{i}": 1 for i in inst.approvers[c]}, "=", 1)
        for i in involved:
            row = {f"l_{c}_{i}": 1 for c in W if i in inst.approvers[c]}
            if i in fixed:
                lp.add_constraint(row, "=", fixed[i])
            elif limit is None:
                lp.add_constraint({**row, "t": -1}, "<=", 0)
            else:
                lp.add_constraint(row, "<=", limit)
        return lp

    last = None
    while len(fixed) < inst.n:
        lp = base_program()
        lp.set_objective({"t": 1}, "min")
        level = lp_solve(lp).objective
        pinned = []
        for j in involved:
            if j in fixed:
                continue
            probe = base_program(level)
            probe.set_objective({f"l_{c}_{j}": 1 for c in W if j in inst.approvers[c]}, "min")
            if lp_solve(probe).objective == level:
                pinned.append(j)
        assert pinned, "some voter must be pinned at the min-max level"
        for j in pinned:
            fixed[j] = level
        last = base_program(level)
    solution = lp_solve(last).values if last is not None else {}
    payments = {(c, i): solution[f"l_{c}_{i}"] for c, i in pairs if solution.get(f"l_{c}_{i}")}
    return LoadDistribution(tuple(fixed[i] for i in range(inst.n)), payments)


def _pattern_key(inst: ElectionInstance, structure: CloneStructure, pattern):
    unapproved = 0
    items = {}
    for j, s in enumerate(pattern):
        if not s:
            continue
        approvers = frozenset(ti for ti, t in enumerate(structure.types) if j in t.classes)
        if not approvers:
            unapproved += s
        else:
            items[j] = (s, approvers)
    levels = _densest_levels(
        {j: s for j, (s, _) in items.items()},
        lambda j: items[j][1],
        lambda ti: structure.types[ti].weight,
    )
    loads = []
    for density, _, types in levels:
        loads.extend([density] * sum(structure.types[ti].weight for ti in types))
    loads.extend([Fraction(0)] * (inst.n - len(loads)))
    # Committees with unapproved members cannot be paid for; they rank last.
    return unapproved, tuple(sorted(loads, reverse=True))


def lexmin_phragmen(inst: ElectionInstance, *, cap: int | None = DEFAULT_CAP) -> RuleResult:
    """All committees whose lexmin voter-load vector is lexicographically least."""
    best, structure, winners = best_patterns(
        inst, lambda s, p: _pattern_key(inst, s, p), maximize=False, cap=cap
    )
    unapproved, loads = best
    return RuleResult(structure.committee_set(winners), loads[0], rule="lexmin-phragmen")


# ----------------------------------------------------------------------------
# Rule X


@dataclass(frozen=True)
class RuleXPurchase:
    candidate: int
    rho: Fraction
    payments: tuple[tuple[int, Fraction], ...]  # (voter, amount), amount > 0
    budgets: tuple[Fraction, ...]  # budgets after the purchase


def _price(budgets: list[Fraction]) -> Fraction | None:
    """Smallest rho with sum(min(rho, b)) == 1, or None if unaffordable."""
    if sum(budgets, Fraction(0)) < 1:
        return None
    paid = Fraction(0)
    ordered = sorted(budgets)
    for j, b in enumerate(ordered):
        rho = (1 - paid) / (len(ordered) - j)
        if rho <= b:
            return rho
        paid += b
    return None


def rule_x(inst: ElectionInstance, tie: TieOrder = DEFAULT_TIE) -> RuleResult:
    """Rule X with sequential Phragmén completion.

    Every voter starts with budget ``k/n``. While some unselected candidate's
    approvers can jointly pay 1, the candidate with the smallest per-voter
    price ``rho`` is bought, each approver paying ``min(rho, budget)``. Seats
    left over are filled by sequential Phragmén starting from loads
    ``k/n - remaining budget``.
    """
    tie.validate(inst)
    budgets = [Fraction(inst.k, inst.n)] * inst.n
    chosen: list[int] = []
    trace: list = []
    while len(chosen) < inst.k:
        best = None
        for c in tie.candidates_in_order(set(range(inst.m)) - set(chosen)):
            voters = sorted(inst.approvers[c])
            if not voters:
                continue
            rho = _price([budgets[i] for i in voters])
            if rho is not None and (best is None or rho < best[1]):
                best = (c, rho)
        if best is None:
            break
        c, rho = best
        payments = []
        for i in sorted(inst.approvers[c]):
            amount = min(rho, budgets[i])
            budgets[i] -= amount
            if amount:
                payments.append((i, amount))
        chosen.append(c)
        trace.append(RuleXPurchase(c, rho, tuple(payments), tuple(budgets)))
    if len(chosen) < inst.k:
        start = [Fraction(inst.k, inst.n) - b for b in budgets]
        chosen, rounds = _phragmen_rounds(inst, start, chosen, inst.k - len(chosen), tie)
        trace.extend(rounds)
    return RuleResult([committee(chosen)], trace=tuple(trace), rule="rule-x")


# ----------------------------------------------------------------------------
# priceability


@dataclass(frozen=True)
class PriceSystem:
    budget: Fraction
    payments: dict  # (voter, candidate) -> amount, only non-zero entries


def check_priceability(inst: ElectionInstance, W: Iterable[int]) -> Verdict:
    """Search for a price system supporting ``W``.

    Solves an exact LP over the budget ``p`` and payments ``p_i(c)`` for
    approved members, minimizing ``p``. Satisfied verdicts carry the
    :class:`PriceSystem`; a violated verdict means none exists.
    """
    W = committee(W)
    members = set(W)
    lp = LinearProgram()
    lp.add_variable("p")
    pay = {}
    for i, ballot in enumerate(inst.approvals):
        for c in sorted(ballot & members):
            pay[(i, c)] = lp.add_variable(f"x_{i}_{c}", 0, 1)
    for i, ballot in enumerate(inst.approvals):
        row = {pay[(i, c)]: 1 for c in ballot & members}
        lp.add_constraint({**row, "p": -1}, "<=", 0)
    for c in W:
        lp.add_constraint({pay[(i, c)]: 1 for i in inst.approvers[c]}, "=", 1)
    for c in range(inst.m):
        if c in members or not inst.approvers[c]:
            continue
        row = {"p": len(inst.approvers[c])}
        for i in inst.approvers[c]:
            for d in inst.approvals[i] & members:
                row[pay[(i, d)]] = row.get(pay[(i, d)], 0) - 1
        lp.add_constraint(row, "<=", 1)
    lp.set_objective({"p": 1}, "min")
    result = lp_solve(lp)
    if result.status != "optimal":
        return Verdict.fail(None)
    payments = {key: result.values[name] for key, name in pay.items() if result.values[name]}
    return Verdict.ok(PriceSystem(result.values["p"], payments))
