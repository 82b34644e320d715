"""Committee-level property checks with explicit witnesses.

Every checker returns a :class:`~abcengine.core.Verdict` (or, for the
search-style helpers, an optional witness). Size thresholds such as
``|V| >= l*n/k`` are compared exactly by cross-multiplication.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Callable, Iterable
from dataclasses import dataclass
from fractions import Fraction

from .apportionment import as_party_list
from .core import (
    DEFAULT_CAP,
    CommitteeSet,
    ElectionInstance,
    RuleResult,
    Verdict,
    committee,
    welfare_vector,
)
from .phragmen import check_priceability
from .search import CloneStructure, clone_structure, iter_patterns, search_space
from .solver.flow import FlowNetwork, min_cost_flow
from .thiele import make_weights, thiele_exact

__all__ = [
    "CohesiveGroup",
    "CoreDeviation",
    "JRWitness",
    "PRPartition",
    "check_condorcet_committee",
    "check_core",
    "check_disjoint_diversity",
    "check_disjoint_equality",
    "check_ejr",
    "check_jr",
    "check_pareto_optimal",
    "check_perfect_representation",
    "check_pjr",
    "check_priceability",
    "exists_pr_committee",
    "find_condorcet_committee",
    "find_core_violation",
    "pr_committees",
    "probe_committee_monotonicity",
    "proportionality_degree",
    "ratios",
]


@dataclass(frozen=True)
class JRWitness:
    candidate: int
    voters: tuple[int, ...]


@dataclass(frozen=True)
class CohesiveGroup:
    voters: tuple[int, ...]
    level: int
    candidates: tuple[int, ...]


@dataclass(frozen=True)
class CoreDeviation:
    voters: tuple[int, ...]
    candidates: tuple[int, ...]
    gamma: Fraction = Fraction(1)
    eta: Fraction = Fraction(0)
    beta: Fraction = Fraction(1)


@dataclass(frozen=True)
class PRPartition:
    groups: dict  # committee member -> voters it represents


def _bits(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


def _large(size: int, level: int, inst: ElectionInstance) -> bool:
    """``size >= level * n / k`` exactly."""
    return size * inst.k >= level * inst.n


# ----------------------------------------------------------------------------
# efficiency


def _type_counts(structure: CloneStructure, W) -> list[int]:
    return structure.counts(structure.pattern_of(W))


def check_pareto_optimal(inst: ElectionInstance, W: Iterable[int], *, cap: int | None = DEFAULT_CAP) -> Verdict:
    """Violated verdicts carry the lexicographically first dominating committee."""
    W = committee(W)
    structure, _ = search_space(inst, cap)
    own = _type_counts(structure, W)
    dominating = []
    for pattern in iter_patterns(structure.sizes, inst.k):
        other = structure.counts(pattern)
        if all(a >= b for a, b in zip(other, own)) and other != own:
            dominating.append(structure.representative(pattern))
    return Verdict.fail(min(dominating)) if dominating else Verdict.ok()


def _orbit(structure: CloneStructure, pattern):
    choices = [itertools.combinations(cl, s) for cl, s in zip(structure.classes, pattern)]
    for parts in itertools.product(*choices):
        yield tuple(sorted(itertools.chain.from_iterable(parts)))


def check_condorcet_committee(inst: ElectionInstance, W: Iterable[int], *, cap: int | None = DEFAULT_CAP) -> Verdict:
    """``W`` is a Condorcet committee if, against every other committee, a strict majority prefers ``W``.

    A violated verdict carries a rival committee that ``W`` fails to beat.
    """
    W = committee(W)
    structure, _ = search_space(inst, cap)
    own_pattern = structure.pattern_of(W)
    own = structure.counts(own_pattern)
    for rival in _orbit(structure, own_pattern):
        if rival != W:
            return Verdict.fail(rival)  # a clone swap leaves every voter indifferent
    rivals = []
    for pattern in iter_patterns(structure.sizes, inst.k):
        if pattern == own_pattern:
            continue
        other = structure.counts(pattern)
        majority = sum(t.weight for t, a, b in zip(structure.types, own, other) if a > b)
        if 2 * majority <= inst.n:
            rivals.append(structure.representative(pattern))
    return Verdict.fail(min(rivals)) if rivals else Verdict.ok()


def find_condorcet_committee(inst: ElectionInstance, *, cap: int | None = DEFAULT_CAP):
    """The Condorcet committee, or ``None``; there is at most one."""
    structure, _ = search_space(inst, cap)
    for pattern in iter_patterns(structure.sizes, inst.k):
        if math.prod(math.comb(len(cl), s) for cl, s in zip(structure.classes, pattern)) != 1:
            continue
        W = structure.representative(pattern)
        if check_condorcet_committee(inst, W, cap=cap):
            return W
    return None


# ----------------------------------------------------------------------------
# justified representation


def check_jr(inst: ElectionInstance, W: Iterable[int]) -> Verdict:
    """Justified representation, checked in polynomial time."""
    W = set(committee(W))
    unrepresented = {i for i, ballot in enumerate(inst.approvals) if not ballot & W}
    for c in range(inst.m):
        if c in W:
            continue
        group = inst.approvers[c] & unrepresented
        if _large(len(group), 1, inst):
            return Verdict.fail(JRWitness(c, tuple(sorted(group))))
    return Verdict.ok()


def _cohesive_sets(inst: ElectionInstance, level: int, within: int):
    """Candidate sets ``T`` of size ``level`` (lexicographic) whose approvers
    inside the voter mask ``within`` form a large enough group."""
    masks = inst.approver_masks

    def rec(start: int, chosen: list[int], mask: int):
        if len(chosen) == level:
            yield tuple(chosen), mask
            return
        for c in range(start, inst.m - (level - len(chosen)) + 1):
            narrowed = mask & masks[c]
            if _large(_popcount(narrowed), level, inst):
                chosen.append(c)
                yield from rec(c + 1, chosen, narrowed)
                chosen.pop()

    yield from rec(0, [], within)


def check_ejr(inst: ElectionInstance, W: Iterable[int]) -> Verdict:
    """Extended justified representation.

    Violated iff for some level ``l`` and ``l`` candidates ``T``, the voters
    approving all of ``T`` but having fewer than ``l`` approved members
    number at least ``l*n/k``. The witness lists all such voters.
    """
    W = frozenset(committee(W))
    counts = welfare_vector(inst, W)
    for level in range(1, inst.k + 1):
        deprived = sum(1 << i for i, x in enumerate(counts) if x < level)
        for T, mask in _cohesive_sets(inst, level, deprived):
            return Verdict.fail(CohesiveGroup(_bits(mask), level, T))
    return Verdict.ok()


def check_pjr(inst: ElectionInstance, W: Iterable[int]) -> Verdict:
    """Proportional justified representation.

    Violated iff some ``l``-cohesive group ``V`` (sharing candidates ``T``)
    jointly approves fewer than ``l`` members of ``W``. Such a group exists
    iff, for some ``l-1`` members ``U``, the approvers of ``T`` whose approved
    members all lie in ``U`` already form a large enough group. Scanning ``U``
    over subsets of ``W`` covers every voter subset exactly.
    """
    W = committee(W)
    members = set(W)
    approved_members = [frozenset(ballot & members) for ballot in inst.approvals]
    for level in range(1, inst.k + 1):
        everyone = (1 << inst.n) - 1
        for T, mask in _cohesive_sets(inst, level, everyone):
            voters = _bits(mask)
            for U in itertools.combinations(W, level - 1):
                allowed = set(U)
                group = tuple(i for i in voters if approved_members[i] <= allowed)
                if _large(len(group), level, inst):
                    return Verdict.fail(CohesiveGroup(group, level, T))
    return Verdict.ok()


def proportionality_degree(inst: ElectionInstance, W: Iterable[int]) -> dict[int, Fraction | None]:
    """For each level ``l``, the least average number of approved members over ``l``-cohesive groups.

    ``None`` marks levels without a cohesive group. For fixed common
    candidates ``T`` the least average is attained by the smallest admissible
    group made of the worst-represented approvers of ``T``.
    """
    counts = welfare_vector(inst, committee(W))
    everyone = (1 << inst.n) - 1
    degree: dict[int, Fraction | None] = {}
    for level in range(1, inst.k + 1):
        size = -(-level * inst.n // inst.k)
        best = None
        for _, mask in _cohesive_sets(inst, level, everyone):
            worst = sorted(counts[i] for i in _bits(mask))[:size]
            average = Fraction(sum(worst), size)
            if best is None or average < best:
                best = average
        degree[level] = best
    return degree


# ----------------------------------------------------------------------------
# core


def find_core_violation(
    inst: ElectionInstance,
    W: Iterable[int],
    gamma=1,
    eta=0,
    beta=1,
) -> CoreDeviation | None:
    """First deviation ``(V, T)`` in order of ``|T|`` then lexicographic ``T``, or ``None``.

    ``V`` collects every voter with ``|A(i) & T| > gamma * |A(i) & W| + eta``;
    the pair deviates when ``beta * |T| / k <= |V| / n``. The defaults give
    the plain core.
    """
    gamma, eta, beta = Fraction(gamma), Fraction(eta), Fraction(beta)
    if beta <= 0:
        raise ValueError("beta must be positive")
    counts = welfare_vector(inst, committee(W))
    approved = [c for c in range(inst.m) if inst.approvers[c]]  # unapproved members never help
    largest = min(len(approved), int(inst.k / beta))
    for size in range(1, largest + 1):
        for T in itertools.combinations(approved, size):
            T_set = set(T)
            group = tuple(
                i for i, ballot in enumerate(inst.approvals) if len(ballot & T_set) > gamma * counts[i] + eta
            )
            if beta * size * inst.n <= len(group) * inst.k:
                return CoreDeviation(group, T, gamma, eta, beta)
    return None


def check_core(inst: ElectionInstance, W: Iterable[int], gamma=1, eta=0, beta=1) -> Verdict:
    deviation = find_core_violation(inst, W, gamma, eta, beta)
    return Verdict.ok() if deviation is None else Verdict.fail(deviation)


# ----------------------------------------------------------------------------
# perfect representation


def check_perfect_representation(inst: ElectionInstance, W: Iterable[int]) -> Verdict:
    """Can voters be split into ``k`` groups of ``n/k``, each unanimously approving its own member?"""
    W = committee(W)
    if inst.n % inst.k:
        return Verdict.skip(f"k={inst.k} does not divide n={inst.n}")
    size = inst.n // inst.k
    net = FlowNetwork(source="source", sink="sink")
    arcs = []
    for c in W:
        net.add_arc("source", ("member", c), size, size)
    for c in W:
        for i in sorted(inst.approvers[c]):
            arcs.append((c, i, net.add_arc(("member", c), ("voter", i), 1)))
    for i in range(inst.n):
        net.add_arc(("voter", i), "sink", 1)
    solution = min_cost_flow(net, inst.n)
    if solution is None:
        return Verdict.fail(None)
    groups = {c: [] for c in W}
    for c, i, a in arcs:
        if solution.flows[a]:
            groups[c].append(i)
    return Verdict.ok(PRPartition({c: tuple(v) for c, v in groups.items()}))


def _pattern_has_pr(inst: ElectionInstance, structure: CloneStructure, pattern) -> bool:
    size = inst.n // inst.k
    net = FlowNetwork(source="source", sink="sink")
    for j, s in enumerate(pattern):
        if s:
            net.add_arc("source", ("class", j), s * size, s * size)
            for ti, t in enumerate(structure.types):
                if j in t.classes:
                    net.add_arc(("class", j), ("type", ti), t.weight)
    for ti, t in enumerate(structure.types):
        net.add_arc(("type", ti), "sink", t.weight)
    return min_cost_flow(net, inst.n) is not None


def pr_committees(inst: ElectionInstance, *, cap: int | None = DEFAULT_CAP) -> CommitteeSet | None:
    """Every committee admitting perfect representation; ``None`` if ``k`` does not divide ``n``."""
    if inst.n % inst.k:
        return None
    structure, _ = search_space(inst, cap)
    found = [p for p in iter_patterns(structure.sizes, inst.k) if _pattern_has_pr(inst, structure, p)]
    return structure.committee_set(found)


def exists_pr_committee(inst: ElectionInstance, *, cap: int | None = DEFAULT_CAP):
    """The lexicographically first committee with perfect representation, or ``None``."""
    found = pr_committees(inst, cap=cap)
    return found.first() if found else None


# ----------------------------------------------------------------------------
# instance-level ratios and probes


def ratios(inst: ElectionInstance, W: Iterable[int]) -> tuple[Fraction, Fraction]:
    """(AV score / best AV score, voters covered / best coverage); a zero optimum gives ratio 1."""
    W = committee(W)
    av_score = sum(len(inst.approvers[c]) for c in W)
    best_av = sum(sorted((len(v) for v in inst.approvers), reverse=True)[: inst.k])
    coverage = sum(1 for ballot in inst.approvals if ballot & set(W))
    best_coverage = thiele_exact(inst, make_weights("cc", inst.k)).score
    utilitarian = Fraction(av_score, best_av) if best_av else Fraction(1)
    representation = Fraction(coverage) / best_coverage if best_coverage else Fraction(1)
    return utilitarian, representation


def probe_committee_monotonicity(
    rule: str | Callable[[ElectionInstance], RuleResult],
    inst: ElectionInstance,
    k_max: int | None = None,
) -> int | None:
    """Smallest ``k`` whose winner does not contain the winner for ``k-1``; ``None`` if the chain holds.

    Irresolute rules are made resolute by taking the lexicographically first winner.
    """
    if isinstance(rule, str):
        from .rules import compute

        rule_id = rule
        rule = lambda instance: compute(rule_id, instance)  # noqa: E731
    k_max = inst.m if k_max is None else k_max
    previous = None
    for k in range(1, k_max + 1):
        current = set(rule(inst.with_k(k)).resolute)
        if previous is not None and not previous <= current:
            return k
        previous = current
    return None


# ----------------------------------------------------------------------------
# apportionment-style properties


def check_disjoint_diversity(inst: ElectionInstance, result: RuleResult) -> Verdict:
    """Does some winner include a candidate of each of the ``min(p, k)`` largest parties?"""
    parties = as_party_list(inst)
    if parties is None or not parties.full:
        return Verdict.skip("not a party-list instance")
    ordered = sorted(parties.parties, key=lambda p: -len(p.voters))[: min(len(parties.parties), inst.k)]
    for W in result.committees.representatives():
        if all(set(W) & p.candidates for p in ordered):
            return Verdict.ok(W)
    return Verdict.fail(None)


def check_disjoint_equality(inst: ElectionInstance, result: RuleResult) -> Verdict:
    """When no candidate has two approvers, winners must be exactly the committees of approved candidates."""
    if any(len(voters) > 1 for voters in inst.approvers):
        return Verdict.skip("some candidate is approved by more than one voter")
    approved = {c for c in range(inst.m) if inst.approvers[c]}
    if len(approved) < inst.k:
        return Verdict.skip("fewer than k approved candidates")
    for W in result.committees.representatives():
        if not set(W) <= approved:
            return Verdict.fail(W)
    if len(result.committees) != math.comb(len(approved), inst.k):
        return Verdict.fail(None)
    return Verdict.ok()
