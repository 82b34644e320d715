"""Exhaustive committee search over clone classes.

Two candidates are clones when exactly the same voters approve them. Every
score-based rule in this package depends on a committee only through the
per-voter counts ``|A(i) & W|`` (and ballot sizes), so swapping clones never
changes a score. Searching over *patterns* (how many members each clone class
contributes) is therefore exact, and usually far smaller than the raw
``C(m, k)`` space. Winners are reported as a :class:`CommitteeSet` that
expands patterns back into committees on demand.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterator
from dataclasses import dataclass
from functools import lru_cache

from .core import DEFAULT_CAP, CommitteeSet, ElectionInstance, check_cap


@dataclass(frozen=True)
class VoterType:
    classes: frozenset[int]  # indices of approved clone classes
    voters: tuple[int, ...]
    ballot_size: int

    @property
    def weight(self) -> int:
        return len(self.voters)


@dataclass(frozen=True)
class CloneStructure:
    classes: tuple[tuple[int, ...], ...]
    types: tuple[VoterType, ...]

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(cl) for cl in self.classes)

    def counts(self, pattern) -> list[int]:
        """Per voter type, the number of approved committee members."""
        return [sum(pattern[j] for j in t.classes) for t in self.types]

    def pattern_of(self, W) -> tuple[int, ...]:
        members = set(W)
        return tuple(len(members.intersection(cl)) for cl in self.classes)

    def representative(self, pattern) -> tuple[int, ...]:
        return tuple(sorted(c for cl, s in zip(self.classes, pattern) for c in cl[:s]))

    def committee_set(self, patterns) -> CommitteeSet:
        return CommitteeSet.from_patterns(self.classes, patterns)


def clone_structure(inst: ElectionInstance) -> CloneStructure:
    by_mask: dict[int, list[int]] = {}
    for c, mask in enumerate(inst.approver_masks):
        by_mask.setdefault(mask, []).append(c)
    classes = tuple(sorted((tuple(members) for members in by_mask.values()), key=lambda cl: cl[0]))
    class_of = {c: j for j, cl in enumerate(classes) for c in cl}
    grouped: dict[frozenset, list[int]] = {}
    for i, ballot in enumerate(inst.approvals):
        grouped.setdefault(frozenset(ballot), []).append(i)
    types = tuple(
        VoterType(frozenset(class_of[c] for c in ballot), tuple(voters), len(ballot))
        for ballot, voters in grouped.items()
    )
    return CloneStructure(classes, types)


def count_patterns(sizes: tuple[int, ...], k: int) -> int:
    @lru_cache(maxsize=None)
    def ways(j: int, remaining: int) -> int:
        if j == len(sizes):
            return int(remaining == 0)
        return sum(ways(j + 1, remaining - s) for s in range(min(sizes[j], remaining) + 1))

    return ways(0, k)


def iter_patterns(sizes: tuple[int, ...], k: int) -> Iterator[tuple[int, ...]]:
    suffix = [0] * (len(sizes) + 1)
    for j in range(len(sizes) - 1, -1, -1):
        suffix[j] = suffix[j + 1] + sizes[j]
    pattern = [0] * len(sizes)

    def rec(j: int, remaining: int):
        if j == len(sizes):
            if remaining == 0:
                yield tuple(pattern)
            return
        low = max(0, remaining - suffix[j + 1])
        for s in range(min(sizes[j], remaining), low - 1, -1):
            pattern[j] = s
            yield from rec(j + 1, remaining - s)
        pattern[j] = 0

    yield from rec(0, k)


def search_space(inst: ElectionInstance, cap: int | None = DEFAULT_CAP) -> tuple[CloneStructure, int]:
    structure = clone_structure(inst)
    total = count_patterns(structure.sizes, inst.k)
    check_cap(total, cap)
    return structure, total


def best_patterns(
    inst: ElectionInstance,
    evaluate: Callable[[CloneStructure, tuple[int, ...]], object],
    *,
    maximize: bool,
    cap: int | None = DEFAULT_CAP,
) -> tuple[object, CloneStructure, list[tuple[int, ...]]]:
    """Scan every pattern and keep those with the optimal ``evaluate`` value."""
    structure, _ = search_space(inst, cap)
    best = None
    winners: list[tuple[int, ...]] = []
    for pattern in iter_patterns(structure.sizes, inst.k):
        value = evaluate(structure, pattern)
        if best is None or (value > best if maximize else value < best):
            best, winners = value, [pattern]
        elif value == best:
            winners.append(pattern)
    return best, structure, winners


def orbit_size(structure: CloneStructure, pattern) -> int:
    return math.prod(math.comb(len(cl), s) for cl, s in zip(structure.classes, pattern))
