"""Domain model shared by every rule and checker.

Candidates and voters are 0-based integer indices. Labels are used for
presentation only. All scores, loads and budgets are ``fractions.Fraction``
values so results can be compared exactly.
"""

from __future__ import annotations

import itertools
import logging
import math
import re
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

logger = logging.getLogger(__name__)

DEFAULT_CAP = 10**8

Committee = tuple[int, ...]


class CapExceeded(RuntimeError):
    """Raised when an exhaustive search would exceed the enumeration cap."""


class ProfileSyntaxError(ValueError):
    """Raised for malformed profile text; carries the offending line number."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        prefix = f"line {lineno}: " if lineno is not None else ""
        super().__init__(prefix + message)


def format_rational(value) -> str:
    """Render an int or Fraction as ``p/q`` in lowest terms, integers bare."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


def committee(members: Iterable[int]) -> Committee:
    """Normalize an iterable of candidate indices to a sorted tuple."""
    members = tuple(members)
    result = tuple(sorted(set(members)))
    if len(result) != len(members):
        raise ValueError(f"duplicate members in committee {members}")
    return result


@dataclass(frozen=True)
class ElectionInstance:
    """An approval profile together with the committee size.

    Parameters
    ----------
    m : int
        Number of candidates; candidates are ``0..m-1``.
    k : int
        Committee size, ``1 <= k <= m``.
    approvals : sequence of iterables
        One approval ballot per voter. Ballots given as lists or tuples are
        checked for repeated indices.
    names : sequence of str, optional
        Candidate labels used when printing committees.
    """

    m: int
    k: int
    approvals: tuple[frozenset[int], ...]
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m!r}")
        if not isinstance(self.k, int) or not 1 <= self.k <= self.m:
            raise ValueError(f"k must satisfy 1 <= k <= m={self.m}, got {self.k!r}")
        ballots = []
        for i, ballot in enumerate(self.approvals):
            if not isinstance(ballot, (set, frozenset)):
                ballot = tuple(ballot)
                if len(set(ballot)) != len(ballot):
                    raise ValueError(f"voter {i}: duplicate candidate in ballot {ballot}")
            ballot = frozenset(ballot)
            for c in ballot:
                if not isinstance(c, int) or not 0 <= c < self.m:
                    raise ValueError(f"voter {i}: candidate {c!r} outside 0..{self.m - 1}")
            ballots.append(ballot)
        if not ballots:
            raise ValueError("an instance needs at least one voter")
        object.__setattr__(self, "approvals", tuple(ballots))
        if self.names is not None:
            names = tuple(self.names)
            if len(names) != self.m:
                raise ValueError(f"expected {self.m} names, got {len(names)}")
            if len(set(names)) != len(names):
                raise ValueError("candidate names must be distinct")
            object.__setattr__(self, "names", names)

    @classmethod
    def from_ballots(cls, ballots, k: int, m: int | None = None, names=None):
        ballots = [tuple(b) for b in ballots]
        if m is None:
            m = len(names) if names is not None else 1 + max((c for b in ballots for c in b), default=0)
        return cls(m=m, k=k, approvals=tuple(ballots), names=names)

    @property
    def n(self) -> int:
        return len(self.approvals)

    @property
    def candidates(self) -> range:
        return range(self.m)

    @cached_property
    def approvers(self) -> tuple[frozenset[int], ...]:
        """``approvers[c]`` is the set of voters approving candidate ``c``."""
        result = [set() for _ in range(self.m)]
        for i, ballot in enumerate(self.approvals):
            for c in ballot:
                result[c].add(i)
        return tuple(frozenset(s) for s in result)

    @cached_property
    def approver_masks(self) -> tuple[int, ...]:
        """Bitmask over voters for each candidate."""
        return tuple(sum(1 << i for i in voters) for voters in self.approvers)

    @property
    def empty_ballots(self) -> tuple[int, ...]:
        return tuple(i for i, ballot in enumerate(self.approvals) if not ballot)

    def with_k(self, k: int) -> ElectionInstance:
        return ElectionInstance(self.m, k, self.approvals, self.names)

    def with_approvals(self, approvals) -> ElectionInstance:
        return ElectionInstance(self.m, self.k, tuple(approvals), self.names)

    def label(self, c: int) -> str:
        return self.names[c] if self.names is not None else str(c)


@dataclass(frozen=True)
class TieOrder:
    """Priority orders used to break ties; earlier entries win.

    ``None`` means ascending index order, which is the default everywhere.
    """

    priority: tuple[int, ...] | None = None
    voter_priority: tuple[int, ...] | None = None

    def __post_init__(self):
        for name in ("priority", "voter_priority"):
            order = getattr(self, name)
            if order is not None:
                order = tuple(order)
                if sorted(order) != list(range(len(order))):
                    raise ValueError(f"{name} must be a permutation of 0..{len(order) - 1}")
                object.__setattr__(self, name, order)

    @cached_property
    def _candidate_rank(self):
        return None if self.priority is None else {c: r for r, c in enumerate(self.priority)}

    @cached_property
    def _voter_rank(self):
        return None if self.voter_priority is None else {v: r for r, v in enumerate(self.voter_priority)}

    def validate(self, inst: ElectionInstance) -> None:
        if self.priority is not None and len(self.priority) != inst.m:
            raise ValueError(f"candidate priority has length {len(self.priority)}, expected {inst.m}")
        if self.voter_priority is not None and len(self.voter_priority) != inst.n:
            raise ValueError(f"voter priority has length {len(self.voter_priority)}, expected {inst.n}")

    def candidate_rank(self, c: int) -> int:
        return c if self._candidate_rank is None else self._candidate_rank[c]

    def voter_rank(self, i: int) -> int:
        return i if self._voter_rank is None else self._voter_rank[i]

    def candidates_in_order(self, candidates: Iterable[int]) -> list[int]:
        return sorted(candidates, key=self.candidate_rank)

    def voters_in_order(self, voters: Iterable[int]) -> list[int]:
        return sorted(voters, key=self.voter_rank)


DEFAULT_TIE = TieOrder()


def hamming(first: Iterable[int], second: Iterable[int]) -> int:
    """Size of the symmetric difference of two candidate sets."""
    return len(set(first) ^ set(second))


def welfare_vector(inst: ElectionInstance, W: Iterable[int]) -> tuple[int, ...]:
    """Number of approved committee members, per voter."""
    W = frozenset(W)
    return tuple(len(ballot & W) for ballot in inst.approvals)


def dominates(inst: ElectionInstance, W1: Iterable[int], W2: Iterable[int]) -> bool:
    """True iff every voter weakly prefers ``W1`` and some voter strictly does."""
    first = welfare_vector(inst, W1)
    second = welfare_vector(inst, W2)
    return all(a >= b for a, b in zip(first, second)) and first != second


def check_cap(count: int, cap: int | None) -> None:
    if cap is not None and count > cap:
        raise CapExceeded(f"search space of {count} exceeds the cap of {cap}")


def enumerate_committees(m: int, k: int, cap: int | None = DEFAULT_CAP) -> Iterator[Committee]:
    """All size-``k`` subsets of ``range(m)`` in lexicographic order."""
    if not 1 <= k <= m:
        raise ValueError(f"need 1 <= k <= m, got m={m}, k={k}")
    check_cap(math.comb(m, k), cap)
    return itertools.combinations(range(m), k)


class CommitteeSet(Sequence):
    """An immutable, lexicographically ordered set of committees.

    Exact rules often produce many tied committees that differ only by
    swapping clones (candidates with identical approver sets). Such sets are
    stored as *patterns*: for each clone class, how many of its members are
    chosen. Every committee in the orbit of a pattern is a member of the set.
    Materialization into explicit tuples happens lazily on iteration.
    """

    def __init__(self, committees: Iterable[Iterable[int]] = ()):
        self._classes = None
        self._patterns = None
        self._items = tuple(sorted({committee(W) for W in committees}))

    @classmethod
    def from_patterns(cls, classes: Sequence[Sequence[int]], patterns: Iterable[Sequence[int]]):
        obj = cls.__new__(cls)
        obj._classes = tuple(tuple(sorted(cl)) for cl in classes)
        obj._patterns = frozenset(tuple(p) for p in patterns)
        obj._items = None
        return obj

    @property
    def patterns(self) -> frozenset | None:
        return self._patterns

    @property
    def classes(self):
        return self._classes

    def _materialize(self) -> tuple[Committee, ...]:
        if self._items is None:
            found = []
            for pattern in self._patterns:
                choices = [itertools.combinations(cl, s) for cl, s in zip(self._classes, pattern)]
                for parts in itertools.product(*choices):
                    found.append(tuple(sorted(itertools.chain.from_iterable(parts))))
            self._items = tuple(sorted(found))
        return self._items

    def representatives(self) -> tuple[Committee, ...]:
        """One committee per clone orbit (the lexicographically smallest), sorted."""
        if self._patterns is None:
            return self._items
        reps = (
            tuple(sorted(itertools.chain.from_iterable(cl[:s] for cl, s in zip(self._classes, p))))
            for p in self._patterns
        )
        return tuple(sorted(reps))

    def first(self) -> Committee:
        return self.representatives()[0]

    def __len__(self) -> int:
        if self._items is not None:
            return len(self._items)
        return sum(
            math.prod(math.comb(len(cl), s) for cl, s in zip(self._classes, p)) for p in self._patterns
        )

    def __iter__(self):
        return iter(self._materialize())

    def __getitem__(self, index):
        return self._materialize()[index]

    def __contains__(self, W) -> bool:
        try:
            W = committee(W)
        except (TypeError, ValueError):
            return False
        if self._patterns is None:
            return W in set(self._items)
        members = set(W)
        if not members <= set(itertools.chain.from_iterable(self._classes)):
            return False
        return tuple(len(members.intersection(cl)) for cl in self._classes) in self._patterns

    def __eq__(self, other) -> bool:
        if isinstance(other, CommitteeSet):
            if self._patterns is not None and other._patterns is not None and self._classes == other._classes:
                return self._patterns == other._patterns
            return len(self) == len(other) and set(self) == set(other)
        if isinstance(other, (set, frozenset, list, tuple)):
            try:
                return set(self) == {committee(W) for W in other}
            except (TypeError, ValueError):
                return False
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._materialize()))

    def __repr__(self) -> str:
        if self._items is not None:
            return f"CommitteeSet({list(self._items)!r})"
        return f"CommitteeSet(<{len(self)} committees in {len(self._patterns)} clone orbits>)"


@dataclass(frozen=True)
class RuleResult:
    """Outcome of a voting rule.

    ``committees`` holds every winner (a single one for resolute rules).
    ``score`` is the shared optimal value where the rule has one, and
    ``trace`` is the rule-specific round log.
    """

    committees: CommitteeSet
    score: object = None
    trace: tuple = field(default=(), compare=False)
    rule: str = ""

    def __post_init__(self):
        if not isinstance(self.committees, CommitteeSet):
            object.__setattr__(self, "committees", CommitteeSet(self.committees))
        if len(self.committees) == 0:
            raise ValueError("a rule result needs at least one committee")

    @property
    def committee(self) -> Committee:
        """The unique winner; raises if the outcome is tied."""
        if len(self.committees) != 1:
            raise ValueError(f"{len(self.committees)} tied committees, no unique winner")
        return self.committees[0]

    @property
    def resolute(self) -> Committee:
        """The lexicographically first winner."""
        return self.committees.first()


@dataclass(frozen=True)
class Verdict:
    """Result of a property check.

    ``status`` is ``"satisfied"``, ``"violated"`` or ``"not applicable"``.
    ``witness`` certifies the verdict: a violation certificate, or for
    constructive properties (priceability, perfect representation) the
    certifying object. A verdict is truthy only when satisfied.
    """

    status: str
    witness: object = None

    SATISFIED = "satisfied"
    VIOLATED = "violated"
    NOT_APPLICABLE = "not applicable"

    def __bool__(self) -> bool:
        return self.status == self.SATISFIED

    @property
    def violated(self) -> bool:
        return self.status == self.VIOLATED

    @classmethod
    def ok(cls, witness=None) -> Verdict:
        return cls(cls.SATISFIED, witness)

    @classmethod
    def fail(cls, witness=None) -> Verdict:
        return cls(cls.VIOLATED, witness)

    @classmethod
    def skip(cls, reason: str) -> Verdict:
        return cls(cls.NOT_APPLICABLE, reason)


# ----------------------------------------------------------------------------
# text formats


def format_committee(W: Iterable[int], names: Sequence[str] | None = None) -> str:
    members = sorted(W)
    if names is not None:
        return "{" + ",".join(names[c] for c in members) + "}"
    return "{" + ",".join(str(c) for c in members) + "}"


def parse_committee(text: str, inst: ElectionInstance) -> Committee:
    """Read ``{a,b,c}`` (labels) or ``{0,1,2}`` (indices)."""
    body = text.strip()
    if body.startswith("{") and body.endswith("}"):
        body = body[1:-1]
    tokens = [t for t in re.split(r"[,\s]+", body) if t]
    lookup = {name: c for c, name in enumerate(inst.names)} if inst.names else {}
    members = []
    for token in tokens:
        if token in lookup:
            members.append(lookup[token])
        elif token.isdigit() and int(token) < inst.m:
            members.append(int(token))
        else:
            raise ValueError(f"unknown candidate {token!r}")
    return committee(members)


_MULTIPLICITY = re.compile(r"^\s*(\d+)\s*\*(.*)$")


def parse_profile(text: str) -> ElectionInstance:
    """Parse the line-oriented profile format.

    The first data line is ``<m> <k>``; an optional ``names:`` line follows;
    every further line is a ballot of candidate indices, optionally prefixed
    by ``<count> *``. ``#`` starts a comment line and blank lines are skipped.
    A ballot line consisting of only ``<count> *`` denotes empty ballots.
    """
    header = None
    names = None
    ballots: list[tuple[int, ...]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            parts = line.split()
            if len(parts) != 2 or not all(p.isdigit() for p in parts):
                raise ProfileSyntaxError("expected header '<m> <k>'", lineno)
            m, k = int(parts[0]), int(parts[1])
            if m < 1:
                raise ProfileSyntaxError("m must be positive", lineno)
            if not 1 <= k <= m:
                raise ProfileSyntaxError(f"k={k} out of range 1..{m}", lineno)
            header = (m, k)
            continue
        if line.startswith("names:"):
            if names is not None or ballots:
                raise ProfileSyntaxError("names line must directly follow the header", lineno)
            names = line[len("names:"):].split()
            if len(names) != header[0]:
                raise ProfileSyntaxError(f"expected {header[0]} names, got {len(names)}", lineno)
            if len(set(names)) != len(names):
                raise ProfileSyntaxError("candidate names must be distinct", lineno)
            continue
        count = 1
        match = _MULTIPLICITY.match(line)
        if match:
            count = int(match.group(1))
            line = match.group(2)
        tokens = line.split()
        if not all(t.isdigit() for t in tokens):
            raise ProfileSyntaxError(f"ballot must list candidate indices: {raw.strip()!r}", lineno)
        ballot = tuple(int(t) for t in tokens)
        for c in ballot:
            if c >= header[0]:
                raise ProfileSyntaxError(f"candidate index {c} >= m={header[0]}", lineno)
        if len(set(ballot)) != len(ballot):
            raise ProfileSyntaxError("duplicate candidate index in ballot", lineno)
        ballots.extend([ballot] * count)
    if header is None:
        raise ProfileSyntaxError("missing header '<m> <k>'")
    if not ballots:
        raise ProfileSyntaxError("profile has no ballots")
    inst = ElectionInstance(m=header[0], k=header[1], approvals=tuple(ballots), names=names)
    if inst.empty_ballots:
        logger.warning("profile contains %d empty ballot(s): voters %s", len(inst.empty_ballots), inst.empty_ballots)
    return inst


def serialize_profile(inst: ElectionInstance) -> str:
    """Inverse of :func:`parse_profile`; consecutive equal ballots are merged."""
    lines = [f"{inst.m} {inst.k}"]
    if inst.names is not None:
        lines.append("names: " + " ".join(inst.names))
    for ballot, group in itertools.groupby(inst.approvals):
        count = len(list(group))
        body = " ".join(str(c) for c in sorted(ballot))
        if count == 1 and body:
            lines.append(body)
        else:
            lines.append(f"{count} * {body}".rstrip())
    return "\n".join(lines) + "\n"
