"""Minimax approval voting and its lexicographic refinement.

SAV is an ABC scoring rule and lives in :mod:`abcengine.thiele`.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

from .core import DEFAULT_CAP, ElectionInstance, RuleResult, committee, hamming
from .search import CloneStructure, best_patterns
from .thiele import sav

__all__ = ["DistanceProfile", "distance_profile", "lex_mav_exact", "mav_exact", "mav_score", "sav"]


@dataclass(frozen=True)
class DistanceProfile:
    distances: tuple[int, ...]

    @property
    def descending(self) -> tuple[int, ...]:
        return tuple(sorted(self.distances, reverse=True))


def distance_profile(inst: ElectionInstance, W: Iterable[int]) -> DistanceProfile:
    W = committee(W)
    return DistanceProfile(tuple(hamming(ballot, W) for ballot in inst.approvals))


def mav_score(inst: ElectionInstance, W: Iterable[int]) -> int:
    """Largest Hamming distance between a ballot and ``W``."""
    return max(distance_profile(inst, W).distances)


def _pattern_distances(inst: ElectionInstance, structure: CloneStructure, pattern) -> list[tuple[int, int]]:
    return [
        (t.ballot_size + inst.k - 2 * x, t.weight) for t, x in zip(structure.types, structure.counts(pattern))
    ]


def mav_exact(inst: ElectionInstance, *, cap: int | None = DEFAULT_CAP) -> RuleResult:
    """All committees minimizing the largest distance to a ballot."""
    best, structure, winners = best_patterns(
        inst,
        lambda s, p: max(d for d, _ in _pattern_distances(inst, s, p)),
        maximize=False,
        cap=cap,
    )
    return RuleResult(structure.committee_set(winners), best, rule="mav")


def lex_mav_exact(inst: ElectionInstance, *, cap: int | None = DEFAULT_CAP) -> RuleResult:
    """Committees whose descending distance tuple is lexicographically least."""

    def key(structure, pattern):
        expanded = [d for d, weight in _pattern_distances(inst, structure, pattern) for _ in range(weight)]
        return tuple(sorted(expanded, reverse=True))

    best, structure, winners = best_patterns(inst, key, maximize=False, cap=cap)
    return RuleResult(structure.committee_set(winners), best[0], rule="lex-mav")
