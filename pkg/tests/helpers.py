"""Shared builders, fixture profiles, seeded generators and brute-force oracles."""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

from abcengine.core import ElectionInstance, TieOrder

LETTERS = "abcdefghijklmnopqrstuvwxyz"


def build(text: str, k: int, m: int | None = None) -> ElectionInstance:
    """Letter profile such as ``"2:a 3:ac 3:bc 2:c"``; ``-`` is an empty ballot."""
    ballots = []
    for token in text.split():
        count, _, body = token.partition(":")
        ballot = [] if body == "-" else [LETTERS.index(ch) for ch in body]
        ballots.extend([ballot] * int(count))
    if m is None:
        m = max((c for ballot in ballots for c in ballot), default=0) + 1
    return ElectionInstance.from_ballots(ballots, k, m=m, names=list(LETTERS[:m]))


def cset(*words: str) -> set[tuple[int, ...]]:
    """Committees written as letter strings: ``cset("abcd", "abcf")``."""
    return {tuple(sorted(LETTERS.index(ch) for ch in word)) for word in words}


def com(word: str) -> tuple[int, ...]:
    return tuple(sorted(LETTERS.index(ch) for ch in word))


def letters_of(W) -> str:
    return "".join(LETTERS[c] for c in sorted(W))


def priority(order: str, m: int) -> TieOrder:
    """Tie order listing ``order`` first, the rest alphabetically."""
    first = [LETTERS.index(ch) for ch in order]
    rest = [c for c in range(m) if c not in first]
    return TieOrder(priority=tuple(first + rest))


# ----------------------------------------------------------------------------
# fixture profiles


def running_example(k: int = 4) -> ElectionInstance:
    return build("3:ab 3:ac 2:ad 1:bcf 1:e 1:f 1:g", k)


def seq_pav_example() -> ElectionInstance:
    return build("3:ab 6:ad 4:b 5:c 5:cd", 2)


def rule_x_example() -> ElectionInstance:
    return build("11:abc 9:abcde 4:abde 6:de", 4)


def cohesive_example() -> ElectionInstance:
    return build("1:ad 2:a 1:ab 2:b 1:bc 2:c 1:cd 2:d", 3)


def pjr_ejr_example(k: int, group: int = 2) -> ElectionInstance:
    """``k`` groups; group ``i`` approves ``c_i`` and the shared block ``c_{k+1..2k}``."""
    block = list(range(k, 2 * k))
    ballots = [[i] + block for i in range(k) for _ in range(group)]
    return ElectionInstance.from_ballots(ballots, k, m=2 * k)


def laminar_example() -> ElectionInstance:
    """15 candidates c_1..c_15 (indices 0..14), 6 voters, k = 12."""
    ballots = [
        [0, 1, 2, 3],
        [0, 1, 2, 4],
        [0, 1, 2, 5],
        [6, 7, 8],
        [9, 10, 11],
        [12, 13, 14],
    ]
    return ElectionInstance.from_ballots(ballots, 12, m=15)


def party_list(votes, seats: int, size: int | None = None) -> ElectionInstance:
    """Party ``j`` gets ``size`` (default ``seats``) candidates; its voters approve exactly those."""
    size = seats if size is None else size
    ballots = []
    for j, v in enumerate(votes):
        ballots.extend([list(range(j * size, (j + 1) * size))] * v)
    return ElectionInstance.from_ballots(ballots, seats, m=size * len(votes))


def rule_x_degree_example(level: int) -> ElectionInstance:
    """Groups N_i of size i approve C_i (|C_i| = i); each group's first voter also approves A (|A| = level)."""
    k = level * (level + 1) // 2
    ballots = []
    start = 0
    extra = list(range(k, k + level))
    for i in range(1, level + 1):
        block = list(range(start, start + i))
        start += i
        ballots.append(block + extra)
        ballots.extend([block] * (i - 1))
    return ElectionInstance.from_ballots(ballots, k, m=k + level)


# ----------------------------------------------------------------------------
# seeded generators


def random_instance(rng: random.Random, n_max: int, m_max: int, k_max: int, p: float | None = None):
    n = rng.randint(1, n_max)
    m = rng.randint(1, m_max)
    k = rng.randint(1, min(k_max, m))
    prob = rng.uniform(0.15, 0.7) if p is None else p
    ballots = [[c for c in range(m) if rng.random() < prob] for _ in range(n)]
    return ElectionInstance.from_ballots(ballots, k, m=m)


def random_party_list(rng: random.Random, p_max: int = 5, k_max: int = 8, divisible: bool = False):
    """Random party-list instance: disjoint party ballots, each of size at least k."""
    while True:
        p = rng.randint(1, p_max)
        k = rng.randint(1, k_max)
        votes = [rng.randint(1, 12) for _ in range(p)]
        if divisible:
            n = sum(votes)
            votes[-1] += (-n) % k
        if not divisible or sum(votes) % k == 0:
            break
    sizes = [rng.randint(k, k + 2) for _ in range(p)]
    ballots = []
    start = 0
    for v, s in zip(votes, sizes):
        ballots.extend([list(range(start, start + s))] * v)
        start += s
    order = list(range(len(ballots)))
    rng.shuffle(order)
    return ElectionInstance.from_ballots([ballots[i] for i in order], k, m=start)


def exhaustive_family(seed: int = 2024, count: int = 520):
    """Deterministic small instances with n, m <= 6 covering every (n, m, k) shape."""
    rng = random.Random(seed)
    shapes = [(n, m, k) for n in range(1, 7) for m in range(1, 7) for k in range(1, m + 1)]
    instances = []
    while len(instances) < count:
        for n, m, k in shapes:
            prob = rng.choice((0.25, 0.45, 0.65))
            ballots = [[c for c in range(m) if rng.random() < prob] for _ in range(n)]
            instances.append(ElectionInstance.from_ballots(ballots, k, m=m))
    return instances[:count]


# ----------------------------------------------------------------------------
# brute-force oracles


def all_committees(inst: ElectionInstance):
    return list(itertools.combinations(range(inst.m), inst.k))


def oracle_thiele(inst: ElectionInstance, weights):
    """Every committee maximizing sum_i w(|A(i) & W|), by plain enumeration."""
    prefix = [Fraction(0)]
    for x in range(1, inst.k + 1):
        prefix.append(prefix[-1] + weights.marginal(x))
    best, winners = None, []
    for W in all_committees(inst):
        s = set(W)
        score = sum((prefix[len(b & s)] for b in inst.approvals), Fraction(0))
        if best is None or score > best:
            best, winners = score, [W]
        elif score == best:
            winners.append(W)
    return best, set(winners)


def oracle_monroe_score(inst: ElectionInstance, W) -> int:
    """Best Monroe score over every balanced assignment, enumerated directly."""
    W = tuple(W)
    base, extra = divmod(inst.n, inst.k)
    best = -1
    for labels in itertools.product(range(inst.k), repeat=inst.n):
        sizes = [labels.count(j) for j in range(inst.k)]
        if all(base <= s <= base + (1 if extra else 0) for s in sizes):
            score = sum(1 for i, j in enumerate(labels) if W[j] in inst.approvals[i])
            best = max(best, score)
    return best


def oracle_monroe_score_dp(inst: ElectionInstance, W) -> int:
    """Same value as :func:`oracle_monroe_score`, by dynamic programming over group fill levels."""
    W = tuple(W)
    base, extra = divmod(inst.n, inst.k)
    upper = base + (1 if extra else 0)
    memo = {}

    def best(i: int, fills: tuple[int, ...]) -> float:
        if i == inst.n:
            return 0 if all(f >= base for f in fills) else -math.inf
        key = (i, fills)
        if key in memo:
            return memo[key]
        value = -math.inf
        for j in range(inst.k):
            if fills[j] < upper:
                nxt = fills[:j] + (fills[j] + 1,) + fills[j + 1:]
                value = max(value, int(W[j] in inst.approvals[i]) + best(i + 1, nxt))
        memo[key] = value
        return value

    return int(best(0, (0,) * inst.k))


def _voter_subsets(voters):
    for r in range(1, len(voters) + 1):
        yield from itertools.combinations(voters, r)


def _cohesive(inst: ElectionInstance, V, level: int) -> bool:
    if len(V) * inst.k < level * inst.n:
        return False
    common = frozenset.intersection(*(inst.approvals[i] for i in V))
    return len(common) >= level


def oracle_jr(inst: ElectionInstance, W) -> bool:
    s = set(W)
    for V in _voter_subsets(range(inst.n)):
        if _cohesive(inst, V, 1) and all(not (inst.approvals[i] & s) for i in V):
            return False
    return True


def oracle_ejr(inst: ElectionInstance, W) -> bool:
    s = set(W)
    for V in _voter_subsets(range(inst.n)):
        for level in range(1, inst.k + 1):
            if _cohesive(inst, V, level) and all(len(inst.approvals[i] & s) < level for i in V):
                return False
    return True


def oracle_pjr(inst: ElectionInstance, W) -> bool:
    s = set(W)
    for V in _voter_subsets(range(inst.n)):
        union = frozenset().union(*(inst.approvals[i] for i in V)) & s
        for level in range(1, inst.k + 1):
            if _cohesive(inst, V, level) and len(union) < level:
                return False
    return True


def oracle_core(inst: ElectionInstance, W) -> bool:
    """No pair (V, T) with |V|/n >= |T|/k where every voter of V strictly prefers T."""
    s = set(W)
    for size in range(1, inst.m + 1):
        for T in itertools.combinations(range(inst.m), size):
            t = set(T)
            for V in _voter_subsets(range(inst.n)):
                if len(V) * inst.k >= size * inst.n and all(
                    len(inst.approvals[i] & t) > len(inst.approvals[i] & s) for i in V
                ):
                    return False
    return True


def oracle_proportionality_degree(inst: ElectionInstance, W):
    s = set(W)
    counts = [len(b & s) for b in inst.approvals]
    result = {}
    for level in range(1, inst.k + 1):
        best = None
        for V in _voter_subsets(range(inst.n)):
            if _cohesive(inst, V, level):
                avg = Fraction(sum(counts[i] for i in V), len(V))
                best = avg if best is None or avg < best else best
        result[level] = best
    return result


def oracle_pareto_dominators(inst: ElectionInstance, W):
    s = set(W)
    own = [len(b & s) for b in inst.approvals]
    found = []
    for other in all_committees(inst):
        t = set(other)
        theirs = [len(b & t) for b in inst.approvals]
        if all(a >= b for a, b in zip(theirs, own)) and theirs != own:
            found.append(other)
    return found


def oracle_condorcet(inst: ElectionInstance, W) -> bool:
    s = set(W)
    for other in all_committees(inst):
        if set(other) == s:
            continue
        t = set(other)
        wins = sum(1 for b in inst.approvals if len(b & s) > len(b & t))
        if 2 * wins <= inst.n:
            return False
    return True


def oracle_pr(inst: ElectionInstance, W) -> bool | None:
    if inst.n % inst.k:
        return None
    size = inst.n // inst.k
    W = list(W)

    def assign(i, fills):
        if i == inst.n:
            return True
        for j, c in enumerate(W):
            if fills[j] < size and c in inst.approvals[i]:
                fills[j] += 1
                if assign(i + 1, fills):
                    return True
                fills[j] -= 1
        return False

    return assign(0, [0] * len(W))
