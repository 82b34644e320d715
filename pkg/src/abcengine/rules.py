"""Rule identifiers and a uniform way to run any rule.

Identifiers: ``av``, ``cc``, ``pav``, ``geom:<p>``, ``custom:<w1,w2,...>``
for exact Thiele methods; ``seq-`` and ``revseq-`` prefixes of these for the
greedy variants; and ``sav``, ``mav``, ``lex-mav``, ``monroe``,
``greedy-monroe``, ``seq-phragmen``, ``lexmin-phragmen``, ``rule-x``.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction

from .core import DEFAULT_TIE, ElectionInstance, RuleResult, TieOrder
from .monroe import greedy_monroe, monroe_exact
from .nonstandard import lex_mav_exact, mav_exact
from .phragmen import lexmin_phragmen, rule_x, seq_phragmen
from .thiele import make_weights, revseq_thiele, sav, seq_thiele, thiele_exact


@dataclass(frozen=True)
class Rule:
    rule_id: str
    run: Callable[[ElectionInstance, TieOrder], RuleResult]
    resolute: bool

    def __call__(self, inst: ElectionInstance, tie: TieOrder = DEFAULT_TIE) -> RuleResult:
        return self.run(inst, tie)


def weights_for(weights_id: str, k: int):
    """Weights for ``av``, ``cc``, ``pav``, ``geom:<p>`` or ``custom:<w1,...>``."""
    if weights_id in ("av", "cc", "pav"):
        return make_weights(weights_id, k)
    if weights_id.startswith("geom:"):
        return make_weights("geometric", k, p=Fraction(weights_id[len("geom:"):]))
    if weights_id.startswith("custom:"):
        values = [Fraction(x) for x in weights_id[len("custom:"):].split(",") if x.strip()]
        return make_weights("custom", k, values=values)
    raise ValueError(f"unknown weight vector {weights_id!r}")


def _check_weights_id(weights_id: str) -> None:
    weights_for(weights_id, 1)  # fail on malformed ids before any instance is seen


_FIXED = {
    "sav": Rule("sav", lambda inst, tie: sav(inst), False),
    "mav": Rule("mav", lambda inst, tie: mav_exact(inst), False),
    "lex-mav": Rule("lex-mav", lambda inst, tie: lex_mav_exact(inst), False),
    "monroe": Rule("monroe", lambda inst, tie: monroe_exact(inst), False),
    "greedy-monroe": Rule("greedy-monroe", greedy_monroe, True),
    "seq-phragmen": Rule("seq-phragmen", lambda inst, tie: seq_phragmen(inst, tie), True),
    "lexmin-phragmen": Rule("lexmin-phragmen", lambda inst, tie: lexmin_phragmen(inst), False),
    "rule-x": Rule("rule-x", rule_x, True),
}


def get_rule(rule_id: str) -> Rule:
    if rule_id in _FIXED:
        return _FIXED[rule_id]
    for prefix, method in (("seq-", seq_thiele), ("revseq-", revseq_thiele)):
        if rule_id.startswith(prefix):
            weights_id = rule_id[len(prefix):]
            _check_weights_id(weights_id)
            return Rule(rule_id, lambda inst, tie, s=weights_id, f=method: f(inst, weights_for(s, inst.k), tie), True)
    _check_weights_id(rule_id)
    return Rule(rule_id, lambda inst, tie: thiele_exact(inst, weights_for(rule_id, inst.k)), False)


def compute(rule_id: str, inst: ElectionInstance, tie: TieOrder = DEFAULT_TIE) -> RuleResult:
    return get_rule(rule_id)(inst, tie)


RULE_IDS = (
    "av", "cc", "pav", "seq-pav", "revseq-pav", "seq-cc", "geom:<p>", "custom:<w1,w2,...>",
    "sav", "mav", "lex-mav", "monroe", "greedy-monroe", "seq-phragmen", "lexmin-phragmen", "rule-x",
)
