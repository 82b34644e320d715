"""Monroe's rule and Greedy Monroe.

The Monroe score of a committee is the largest number of voters that can be
satisfied by a balanced assignment of voters to committee members (every
member represents between floor(n/k) and ceil(n/k) voters). It is computed
as a min-cost flow where approved voter-member arcs cost -1.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

from .core import DEFAULT_CAP, DEFAULT_TIE, ElectionInstance, RuleResult, TieOrder, committee
from .search import CloneStructure, best_patterns, clone_structure
from .solver.flow import FlowNetwork, min_cost_flow


@dataclass(frozen=True)
class MonroeAssignment:
    representative: tuple[int, ...]  # committee member assigned to each voter
    satisfied: tuple[bool, ...]

    @property
    def score(self) -> int:
        return sum(self.satisfied)

    def group(self, c: int) -> tuple[int, ...]:
        return tuple(i for i, r in enumerate(self.representative) if r == c)


def group_bounds(n: int, k: int) -> tuple[int, int]:
    return n // k, -(-n // k)


def monroe_network(inst: ElectionInstance, W: Iterable[int], aggregate: bool = True) -> FlowNetwork:
    """The assignment network of a committee.

    With ``aggregate=False`` there is one node per voter. Otherwise voters
    with identical ballots share a node whose arcs carry their multiplicity,
    which yields the same optimum on a smaller graph.
    """
    W = committee(W)
    low, high = group_bounds(inst.n, len(W))
    net = FlowNetwork(source="source", sink="sink")
    if aggregate:
        groups: dict[frozenset, list[int]] = {}
        for i, ballot in enumerate(inst.approvals):
            groups.setdefault(ballot, []).append(i)
        voter_nodes = [(("ballot", tuple(sorted(b))), b, len(vs)) for b, vs in groups.items()]
    else:
        voter_nodes = [(("voter", i), ballot, 1) for i, ballot in enumerate(inst.approvals)]
    for c in W:
        net.add_arc("source", ("member", c), high, low)
    for c in W:
        for node, ballot, weight in voter_nodes:
            net.add_arc(("member", c), node, weight, 0, -1 if c in ballot else 0)
    for node, _, weight in voter_nodes:
        net.add_arc(node, "sink", weight)
    return net


def monroe_score(inst: ElectionInstance, W: Iterable[int], tie: TieOrder = DEFAULT_TIE) -> tuple[int, MonroeAssignment]:
    """Optimal Monroe score of ``W`` and an assignment attaining it."""
    W = committee(W)
    net = monroe_network(inst, W)
    solution = min_cost_flow(net, inst.n)
    if solution is None:
        raise ValueError("no balanced assignment exists")  # cannot happen for |W| = k >= 1
    voters_by_ballot: dict[tuple, list[int]] = {}
    for i, ballot in enumerate(inst.approvals):
        voters_by_ballot.setdefault(tuple(sorted(ballot)), []).append(i)
    queues = {key: tie.voters_in_order(vs) for key, vs in voters_by_ballot.items()}
    representative = [None] * inst.n
    for arc, flow in zip(net.arcs, solution.flows):
        if flow and isinstance(arc.tail, tuple) and arc.tail[0] == "member":
            queue = queues[arc.head[1]]
            for _ in range(flow):
                representative[queue.pop(0)] = arc.tail[1]
    satisfied = tuple(r in ballot for r, ballot in zip(representative, inst.approvals))
    return -solution.cost, MonroeAssignment(tuple(representative), satisfied)


def _pattern_score(inst: ElectionInstance, structure: CloneStructure, pattern) -> int:
    # Clones are interchangeable, so members of a clone class share one node
    # whose bounds are scaled by the number of chosen members.
    low, high = group_bounds(inst.n, inst.k)
    net = FlowNetwork(source="source", sink="sink")
    for j, s in enumerate(pattern):
        if s:
            net.add_arc("source", ("class", j), s * high, s * low)
            for ti, t in enumerate(structure.types):
                net.add_arc(("class", j), ("type", ti), t.weight, 0, -1 if j in t.classes else 0)
    for ti, t in enumerate(structure.types):
        net.add_arc(("type", ti), "sink", t.weight)
    return -min_cost_flow(net, inst.n).cost


def monroe_exact(inst: ElectionInstance, *, cap: int | None = DEFAULT_CAP) -> RuleResult:
    """All committees with maximum Monroe score."""
    best, structure, winners = best_patterns(
        inst, lambda s, p: _pattern_score(inst, s, p), maximize=True, cap=cap
    )
    return RuleResult(structure.committee_set(winners), best, rule="monroe")


@dataclass(frozen=True)
class GreedyMonroeRound:
    candidate: int
    group: tuple[int, ...]
    cap: int


def greedy_monroe(inst: ElectionInstance, tie: TieOrder = DEFAULT_TIE, *, capped: bool = False) -> RuleResult:
    """Greedy Monroe in its simplified form (dissatisfied voters stay unassigned).

    Each round picks the candidate approved by the most unassigned voters and
    assigns up to the round's group size of them, preferring voters by
    ``tie.voter_priority``. With ``capped=True`` candidates are compared by
    ``min(support, group size)`` instead, as in the original formulation,
    which lets the tie order decide among all candidates able to fill a group.
    """
    tie.validate(inst)
    n, k = inst.n, inst.k
    base, extra = divmod(n, k)
    caps = [base + 1] * extra + [base] * (k - extra)
    unassigned = set(range(n))
    chosen: list[int] = []
    trace = []
    for size in caps:
        best = None
        for c in tie.candidates_in_order(set(range(inst.m)) - set(chosen)):
            support = len(inst.approvers[c] & unassigned)
            value = min(support, size) if capped else support
            if best is None or value > best[1]:
                best = (c, value)
        c = best[0]
        group = tuple(tie.voters_in_order(inst.approvers[c] & unassigned)[:size])
        unassigned.difference_update(group)
        chosen.append(c)
        trace.append(GreedyMonroeRound(c, group, size))
    return RuleResult([tuple(sorted(chosen))], trace=tuple(trace), rule="greedy-monroe")
