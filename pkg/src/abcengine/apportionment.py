"""Party-list apportionment and the bridge from approval profiles.

Ties between parties follow a priority order: by default more votes first,
then input order. Quotients are compared as exact fractions.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .core import ElectionInstance


@dataclass(frozen=True)
class ApportionmentInstance:
    votes: tuple[int, ...]
    seats: int

    def __post_init__(self):
        votes = tuple(self.votes)
        if not votes or any(not isinstance(v, int) or v < 0 for v in votes):
            raise ValueError("votes must be a non-empty list of non-negative integers")
        if sum(votes) == 0:
            raise ValueError("at least one vote is needed")
        if not isinstance(self.seats, int) or self.seats < 1:
            raise ValueError("seats must be a positive integer")
        object.__setattr__(self, "votes", votes)

    @property
    def total(self) -> int:
        return sum(self.votes)

    def quota(self, party: int) -> Fraction:
        return Fraction(self.seats * self.votes[party], self.total)


@dataclass(frozen=True)
class Allocation:
    seats: tuple[int, ...]
    trace: tuple[int, ...]  # recipient of each seat handed out one at a time


def default_party_order(votes: Sequence[int]) -> tuple[int, ...]:
    return tuple(sorted(range(len(votes)), key=lambda i: (-votes[i], i)))


def _rank(inst: ApportionmentInstance, tie: Sequence[int] | None) -> dict[int, int]:
    order = default_party_order(inst.votes) if tie is None else tuple(tie)
    if sorted(order) != list(range(len(inst.votes))):
        raise ValueError("tie order must be a permutation of the parties")
    return {party: r for r, party in enumerate(order)}


def divisor_method(
    inst: ApportionmentInstance, divisor: Callable[[int], int], tie: Sequence[int] | None = None
) -> Allocation:
    """Hand out seats one by one to the party maximizing ``votes / divisor(seats so far)``."""
    rank = _rank(inst, tie)
    seats = [0] * len(inst.votes)
    trace = []
    for _ in range(inst.seats):
        winner = min(
            range(len(seats)),
            key=lambda i: (-Fraction(inst.votes[i], divisor(seats[i])), rank[i]),
        )
        seats[winner] += 1
        trace.append(winner)
    return Allocation(tuple(seats), tuple(trace))


def dhondt(inst: ApportionmentInstance, tie: Sequence[int] | None = None) -> Allocation:
    return divisor_method(inst, lambda s: s + 1, tie)


def sainte_lague(inst: ApportionmentInstance, tie: Sequence[int] | None = None) -> Allocation:
    return divisor_method(inst, lambda s: 2 * s + 1, tie)


def largest_remainder(inst: ApportionmentInstance, tie: Sequence[int] | None = None) -> Allocation:
    """Floor of each quota, then one extra seat for each of the largest remainders."""
    rank = _rank(inst, tie)
    quotas = [inst.quota(i) for i in range(len(inst.votes))]
    seats = [int(q) for q in quotas]  # quotas are non-negative, so int() floors
    leftover = inst.seats - sum(seats)
    by_remainder = sorted(range(len(seats)), key=lambda i: (-(quotas[i] - seats[i]), rank[i]))
    trace = tuple(by_remainder[:leftover])
    for i in trace:
        seats[i] += 1
    return Allocation(tuple(seats), trace)


@dataclass(frozen=True)
class Party:
    candidates: frozenset[int]
    voters: tuple[int, ...]


@dataclass(frozen=True)
class PartyStructure:
    """Voters grouped by identical ballots, with pairwise disjoint ballots.

    ``full`` records whether every ballot has at least ``k`` candidates, the
    extra condition for a party-list instance proper.
    """

    parties: tuple[Party, ...]
    full: bool

    @property
    def votes(self) -> tuple[int, ...]:
        return tuple(len(p.voters) for p in self.parties)

    def seat_counts(self, W: Iterable[int]) -> tuple[int, ...]:
        W = set(W)
        return tuple(len(W & p.candidates) for p in self.parties)

    def apportionment(self, seats: int) -> ApportionmentInstance:
        return ApportionmentInstance(self.votes, seats)


def as_party_list(inst: ElectionInstance) -> PartyStructure | None:
    """Group voters into parties, or return ``None`` if two ballots overlap without being equal."""
    groups: dict[frozenset, list[int]] = {}
    for i, ballot in enumerate(inst.approvals):
        groups.setdefault(ballot, []).append(i)
    ballots = list(groups)
    for a_index, a in enumerate(ballots):
        for b in ballots[a_index + 1:]:
            if a & b:
                return None
    parties = tuple(Party(ballot, tuple(voters)) for ballot, voters in groups.items())
    full = all(len(ballot) >= inst.k for ballot in inst.approvals)
    return PartyStructure(parties, full)
