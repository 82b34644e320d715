"""Thiele methods and generic ABC scoring rules.

A Thiele method is given by marginal weights ``w(1)-w(0), w(2)-w(1), ...``;
a committee scores ``sum_i w(|A(i) & W|)``. The exact rule maximizes this
score, the sequential rule adds candidates greedily, and the reverse
sequential rule starts from all candidates and removes greedily.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .core import DEFAULT_CAP, DEFAULT_TIE, ElectionInstance, RuleResult, TieOrder
from .search import CloneStructure, best_patterns, search_space

BRUTE_FORCE_LIMIT = 10**5


@dataclass(frozen=True)
class ThieleWeights:
    """Marginal weights of a Thiele method.

    ``marginals[x-1]`` is the gain from a voter's ``x``-th approved member.
    Named kinds (av, cc, pav, geometric) extend beyond the stored prefix by
    their closed form; custom weights do not.
    """

    kind: str
    marginals: tuple[Fraction, ...]
    param: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "marginals", tuple(Fraction(x) for x in self.marginals))
        if any(x < 0 for x in self.marginals):
            raise ValueError("marginal weights must be non-negative")

    @property
    def label(self) -> str:
        if self.kind == "geometric":
            return f"{self.param}-geometric"
        if self.kind == "custom":
            return "custom(" + ",".join(str(x) for x in self.marginals) + ")"
        return self.kind

    def marginal(self, x: int) -> Fraction:
        if x < 1:
            raise ValueError("marginals are indexed from 1")
        if x <= len(self.marginals):
            return self.marginals[x - 1]
        if self.kind == "av":
            return Fraction(1)
        if self.kind == "cc":
            return Fraction(0)
        if self.kind == "pav":
            return Fraction(1, x)
        if self.kind == "geometric":
            return (1 / self.param) ** x
        raise ValueError(f"custom weights define only {len(self.marginals)} marginals, needed {x}")

    def cumulative(self, upto: int) -> list[Fraction]:
        """``[w(0), w(1), ..., w(upto)]``."""
        table = [Fraction(0)]
        for x in range(1, upto + 1):
            table.append(table[-1] + self.marginal(x))
        return table

    def is_concave(self, upto: int) -> bool:
        gains = [self.marginal(x) for x in range(1, upto + 1)]
        return all(a >= b for a, b in zip(gains, gains[1:]))


def make_weights(kind: str, k: int, p=None, values: Sequence | None = None) -> ThieleWeights:
    """Build the first ``k`` marginal weights of a named Thiele method.

    ``kind`` is one of ``"av"``, ``"cc"``, ``"pav"``, ``"geometric"`` (needs
    ``p > 1``) or ``"custom"`` (needs ``values``).
    """
    if kind == "av":
        return ThieleWeights("av", (1,) * k)
    if kind == "cc":
        return ThieleWeights("cc", (1,) + (0,) * (k - 1))
    if kind == "pav":
        return ThieleWeights("pav", tuple(Fraction(1, x) for x in range(1, k + 1)))
    if kind in ("geometric", "geom"):
        p = Fraction(p)
        if p <= 1:
            raise ValueError("geometric weights need p > 1")
        return ThieleWeights("geometric", tuple((1 / p) ** x for x in range(1, k + 1)), p)
    if kind == "custom":
        if values is None or len(values) < k:
            raise ValueError(f"custom weights need at least k={k} marginals")
        return ThieleWeights("custom", tuple(values))
    raise ValueError(f"unknown weight kind {kind!r}")


def thiele_score(inst: ElectionInstance, W: Iterable[int], w: ThieleWeights) -> Fraction:
    W = frozenset(W)
    counts = [len(ballot & W) for ballot in inst.approvals]
    table = w.cumulative(max(counts, default=0))
    return sum((table[x] for x in counts), Fraction(0))


def _pattern_score(structure: CloneStructure, pattern, table) -> Fraction:
    return sum((t.weight * table[x] for t, x in zip(structure.types, structure.counts(pattern))), Fraction(0))


def thiele_exact(
    inst: ElectionInstance,
    w: ThieleWeights,
    *,
    cap: int | None = DEFAULT_CAP,
    algorithm: str = "auto",
) -> RuleResult:
    """All committees of maximum ``w``-score.

    ``algorithm`` is ``"enumerate"``, ``"branch-and-bound"`` or ``"auto"``
    (enumerate when the search space has at most 10^5 clone patterns).
    """
    table = w.cumulative(inst.k)
    structure, total = search_space(inst, cap)
    if algorithm == "enumerate" or (algorithm == "auto" and total <= BRUTE_FORCE_LIMIT):
        best, structure, winners = best_patterns(
            inst, lambda s, p: _pattern_score(s, p, table), maximize=True, cap=cap
        )
    elif algorithm in ("auto", "branch-and-bound"):
        seed = thiele_score(inst, seq_thiele(inst, w).committee, w)
        best, winners = _branch_and_bound(inst, structure, w, table, seed)
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    return RuleResult(structure.committee_set(winners), best, rule=f"{w.label}-thiele")


def _branch_and_bound(inst, structure: CloneStructure, w: ThieleWeights, table, seed):
    k = inst.k
    sizes = structure.sizes
    types = structure.types
    concave = w.is_concave(k)
    members = [[ti for ti, t in enumerate(types) if j in t.classes] for j in range(len(sizes))]
    # avail[ti][j]: approved seats for type ti among classes j, j+1, ...
    avail = []
    for t in types:
        row = [0] * (len(sizes) + 1)
        for j in range(len(sizes) - 1, -1, -1):
            row[j] = row[j + 1] + (sizes[j] if j in t.classes else 0)
        avail.append(row)
    capacity = [0] * (len(sizes) + 1)
    for j in range(len(sizes) - 1, -1, -1):
        capacity[j] = capacity[j + 1] + sizes[j]

    best = [seed]
    winners: list[tuple[int, ...]] = []
    counts = [0] * len(types)
    pattern = [0] * len(sizes)

    def bound(j: int, remaining: int) -> Fraction:
        optimistic = sum(
            (t.weight * table[counts[ti] + min(remaining, avail[ti][j])] for ti, t in enumerate(types)),
            Fraction(0),
        )
        if concave and remaining:
            gains = []
            for jj in range(j, len(sizes)):
                gain = sum((types[ti].weight * w.marginal(counts[ti] + 1) for ti in members[jj]), Fraction(0))
                gains.extend([gain] * min(sizes[jj], remaining))
            gains.sort(reverse=True)
            current = sum((t.weight * table[counts[ti]] for ti, t in enumerate(types)), Fraction(0))
            optimistic = min(optimistic, current + sum(gains[:remaining], Fraction(0)))
        return optimistic

    def rec(j: int, remaining: int):
        if remaining == 0:
            score = sum((t.weight * table[counts[ti]] for ti, t in enumerate(types)), Fraction(0))
            if score > best[0]:
                best[0] = score
                winners.clear()
            if score == best[0]:
                winners.append(tuple(pattern))
            return
        if j == len(sizes) or capacity[j] < remaining or bound(j, remaining) < best[0]:
            return
        for s in range(min(sizes[j], remaining), -1, -1):
            pattern[j] = s
            for ti in members[j]:
                counts[ti] += s
            rec(j + 1, remaining - s)
            for ti in members[j]:
                counts[ti] -= s
        pattern[j] = 0

    rec(0, k)
    return best[0], winners


@dataclass(frozen=True)
class SequentialStep:
    candidate: int
    delta: Fraction  # marginal gain when adding, score loss when removing


def seq_thiele(inst: ElectionInstance, w: ThieleWeights, tie: TieOrder = DEFAULT_TIE) -> RuleResult:
    """Sequential Thiele: add the candidate with the largest marginal gain, k times."""
    tie.validate(inst)
    counts = [0] * inst.n
    chosen: list[int] = []
    trace = []
    for _ in range(inst.k):
        best = None
        for c in tie.candidates_in_order(set(range(inst.m)) - set(chosen)):
            gain = sum((w.marginal(counts[i] + 1) for i in inst.approvers[c]), Fraction(0))
            if best is None or gain > best[1]:
                best = (c, gain)
        c, gain = best
        chosen.append(c)
        for i in inst.approvers[c]:
            counts[i] += 1
        trace.append(SequentialStep(c, gain))
    W = tuple(sorted(chosen))
    return RuleResult([W], thiele_score(inst, W, w), tuple(trace), rule=f"seq-{w.label}")


def revseq_thiele(inst: ElectionInstance, w: ThieleWeights, tie: TieOrder = DEFAULT_TIE) -> RuleResult:
    """Reverse sequential Thiele: from all candidates, repeatedly drop the one whose removal costs least.

    Among equally cheap removals the candidate with the lowest priority goes.
    """
    tie.validate(inst)
    counts = [len(ballot) for ballot in inst.approvals]
    remaining = set(range(inst.m))
    trace = []
    for _ in range(inst.m - inst.k):
        worst = None
        for c in reversed(tie.candidates_in_order(remaining)):
            loss = sum((w.marginal(counts[i]) for i in inst.approvers[c]), Fraction(0))
            if worst is None or loss < worst[1]:
                worst = (c, loss)
        c, loss = worst
        remaining.remove(c)
        for i in inst.approvers[c]:
            counts[i] -= 1
        trace.append(SequentialStep(c, loss))
    W = tuple(sorted(remaining))
    return RuleResult([W], thiele_score(inst, W, w), tuple(trace), rule=f"revseq-{w.label}")


# ----------------------------------------------------------------------------
# ABC scoring rules


class ScoringFunction:
    """A scoring function ``f(x, y)``: utility of ``x`` approved members for a ballot of size ``y``.

    Construction tabulates ``f`` on ``0 <= x <= y <= m`` and rejects
    functions that are not monotone in ``x``.
    """

    def __init__(self, f: Callable[[int, int], Fraction], m: int, label: str = "custom"):
        self.label = label
        self.m = m
        self.table = {
            (x, y): Fraction(f(x, y)) for y in range(m + 1) for x in range(y + 1)
        }
        for y in range(m + 1):
            for x in range(y):
                if self.table[(x + 1, y)] < self.table[(x, y)]:
                    raise ValueError(f"scoring function decreases in x at y={y}: f({x + 1},{y}) < f({x},{y})")

    def __call__(self, x: int, y: int) -> Fraction:
        return self.table[(x, y)]


def sav_scoring(m: int) -> ScoringFunction:
    """Satisfaction approval voting: ``x/y``, with empty ballots scoring 0."""
    return ScoringFunction(lambda x, y: Fraction(x, y) if y else Fraction(0), m, "sav")


def thiele_scoring(w: ThieleWeights, m: int) -> ScoringFunction:
    table = w.cumulative(m)
    return ScoringFunction(lambda x, y: table[x], m, w.label)


def abc_scoring_score(inst: ElectionInstance, W: Iterable[int], f: ScoringFunction) -> Fraction:
    W = frozenset(W)
    return sum((f(len(ballot & W), len(ballot)) for ballot in inst.approvals), Fraction(0))


def abc_scoring_exact(inst: ElectionInstance, f: ScoringFunction, *, cap: int | None = DEFAULT_CAP) -> RuleResult:
    """All committees maximizing ``sum_i f(|A(i) & W|, |A(i)|)``."""
    if f.m < inst.m:
        raise ValueError(f"scoring function tabulated up to m={f.m}, instance has m={inst.m}")

    def evaluate(structure: CloneStructure, pattern):
        return sum(
            (t.weight * f(x, t.ballot_size) for t, x in zip(structure.types, structure.counts(pattern))),
            Fraction(0),
        )

    best, structure, winners = best_patterns(inst, evaluate, maximize=True, cap=cap)
    return RuleResult(structure.committee_set(winners), best, rule=f.label)


def sav(inst: ElectionInstance, *, cap: int | None = DEFAULT_CAP) -> RuleResult:
    return abc_scoring_exact(inst, sav_scoring(inst.m), cap=cap)
