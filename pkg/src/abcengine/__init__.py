"""Exact computation of approval-based committee election rules and their properties."""

from .apportionment import (
    Allocation,
    ApportionmentInstance,
    as_party_list,
    dhondt,
    largest_remainder,
    sainte_lague,
)
from .axioms import (
    check_condorcet_committee,
    check_core,
    check_disjoint_diversity,
    check_disjoint_equality,
    check_ejr,
    check_jr,
    check_pareto_optimal,
    check_perfect_representation,
    check_pjr,
    exists_pr_committee,
    find_condorcet_committee,
    find_core_violation,
    probe_committee_monotonicity,
    proportionality_degree,
    ratios,
)
from .core import (
    DEFAULT_CAP,
    CapExceeded,
    CommitteeSet,
    ElectionInstance,
    ProfileSyntaxError,
    RuleResult,
    TieOrder,
    Verdict,
    format_committee,
    format_rational,
    parse_committee,
    parse_profile,
    serialize_profile,
)
from .ilp import export_ip, parse_ip
from .monroe import greedy_monroe, monroe_exact, monroe_score
from .nonstandard import lex_mav_exact, mav_exact, mav_score
from .phragmen import check_priceability, lexmin_loads, lexmin_phragmen, rule_x, seq_phragmen
from .rules import RULE_IDS, compute, get_rule
from .thiele import make_weights, revseq_thiele, sav, seq_thiele, thiele_exact, thiele_score

__version__ = "0.1.0"
