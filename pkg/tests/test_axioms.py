import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from helpers import (
    build,
    com,
    cohesive_example,
    laminar_example,
    letters_of,
    oracle_condorcet,
    oracle_core,
    oracle_ejr,
    oracle_jr,
    oracle_pareto_dominators,
    oracle_pjr,
    oracle_pr,
    oracle_proportionality_degree,
    party_list,
    pjr_ejr_example,
    rule_x_degree_example,
    running_example,
)
from strategies import instance_and_committee, instances

from abcengine import axioms
from abcengine.core import ElectionInstance, RuleResult
from abcengine.monroe import monroe_exact
from abcengine.nonstandard import mav_exact
from abcengine.phragmen import check_priceability, rule_x, seq_phragmen
from abcengine.rules import compute
from abcengine.thiele import make_weights, sav, thiele_exact

LAMINAR_PAV = (0, 1, 2) + tuple(range(6, 15))
PR_PARETO_PROFILE = "2:ac 1:acd 1:ad 1:bd 3:bc"


class TestPareto:
    def test_monroe_committee_dominated(self):
        inst = build("2:a 1:ac 1:ad 10:bc 10:bd", 2)
        result = monroe_exact(inst)
        assert set(result.committees) == {com("cd")} and result.score == 22
        verdict = axioms.check_pareto_optimal(inst, com("cd"))
        assert verdict.violated and verdict.witness == com("ab")

    def test_pr_committee_dominated(self):
        verdict = axioms.check_pareto_optimal(build(PR_PARETO_PROFILE, 2), com("ab"))
        assert verdict.witness == com("cd")

    @given(instances(n_max=6, m_max=6))
    def test_av_winner_optimal(self, inst):
        W = thiele_exact(inst, make_weights("av", inst.k)).resolute
        assert axioms.check_pareto_optimal(inst, W)

    @given(instance_and_committee(n_max=6, m_max=6))
    def test_matches_oracle(self, pair):
        inst, W = pair
        dominators = oracle_pareto_dominators(inst, W)
        verdict = axioms.check_pareto_optimal(inst, W)
        if dominators:
            assert verdict.witness == min(dominators)
        else:
            assert verdict


class TestCondorcet:
    def test_full_committee(self):
        inst = build("1:a 1:b", 2)
        assert axioms.check_condorcet_committee(inst, (0, 1))

    def test_running_example(self):
        verdict = axioms.check_condorcet_committee(running_example(), com("abcf"))
        assert verdict.violated and verdict.witness == com("abcd")

    def test_single_voter(self):
        inst = build("1:ab", 2, m=3)
        assert axioms.check_condorcet_committee(inst, com("ab"))
        assert not axioms.check_condorcet_committee(inst, com("ac"))
        assert axioms.find_condorcet_committee(inst) == com("ab")

    def test_unanimous_with_spare_candidates(self):
        inst = build("3:abc", 2)
        assert axioms.find_condorcet_committee(inst) is None

    @given(instance_and_committee(n_max=6, m_max=5))
    def test_matches_oracle(self, pair):
        inst, W = pair
        assert bool(axioms.check_condorcet_committee(inst, W)) == oracle_condorcet(inst, W)

    @given(instances(n_max=5, m_max=5))
    def test_find_matches_oracle(self, inst):
        expected = [W for W in itertools.combinations(range(inst.m), inst.k) if oracle_condorcet(inst, W)]
        assert axioms.find_condorcet_committee(inst) == (expected[0] if expected else None)


class TestJustifiedRepresentation:
    def test_every_committee_of_cohesive_example(self):
        inst = cohesive_example()
        for W in itertools.combinations(range(inst.m), inst.k):
            assert axioms.check_jr(inst, W) and axioms.check_ejr(inst, W)

    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_pjr_without_ejr(self, k):
        inst = pjr_ejr_example(k)
        low = tuple(range(k))
        high = tuple(range(k, 2 * k))
        assert axioms.check_jr(inst, low) and axioms.check_pjr(inst, low)
        verdict = axioms.check_ejr(inst, low)
        assert verdict.violated
        assert verdict.witness.level >= 2
        assert axioms.check_ejr(inst, high)

    def test_jr_witness(self):
        inst = build("2:a 2:b", 2, m=3)
        verdict = axioms.check_jr(inst, com("ac"))
        assert verdict.witness == axioms.JRWitness(1, (2, 3))

    def test_ejr_witness_is_cohesive(self):
        inst = pjr_ejr_example(3)
        witness = axioms.check_ejr(inst, (0, 1, 2)).witness
        assert len(witness.candidates) == witness.level
        assert len(witness.voters) * inst.k >= witness.level * inst.n
        for i in witness.voters:
            assert set(witness.candidates) <= inst.approvals[i]

    def test_everyone_fully_represented(self):
        inst = build("3:abc 2:abcd", 3)
        W = com("abc")
        assert axioms.check_jr(inst, W) and axioms.check_pjr(inst, W) and axioms.check_ejr(inst, W)

    @given(instance_and_committee(n_max=6, m_max=6))
    def test_match_oracles(self, pair):
        inst, W = pair
        assert bool(axioms.check_jr(inst, W)) == oracle_jr(inst, W)
        assert bool(axioms.check_pjr(inst, W)) == oracle_pjr(inst, W)
        assert bool(axioms.check_ejr(inst, W)) == oracle_ejr(inst, W)

    @given(instance_and_committee(n_max=7, m_max=7))
    def test_implication_chain(self, pair):
        inst, W = pair
        ejr, pjr, jr = axioms.check_ejr(inst, W), axioms.check_pjr(inst, W), axioms.check_jr(inst, W)
        assert not ejr or pjr
        assert not pjr or jr
        if check_priceability(inst, W):
            assert pjr
        if axioms.find_core_violation(inst, W) is None:
            assert ejr

    def test_exact_threshold_when_k_does_not_divide_n(self):
        # n=5, k=2: a group of 2 is below 5/2, a group of 3 is not.
        inst = build("2:a 3:b", 1, m=3).with_k(2)
        assert axioms.check_jr(inst, com("bc"))
        assert not axioms.check_jr(build("3:a 2:b", 2, m=3), com("bc"))


class TestProportionalityDegree:
    @pytest.mark.parametrize("level", [1, 2, 3, 4, 5])
    def test_rule_x_construction(self, level):
        inst = rule_x_degree_example(level)
        W = rule_x(inst).committee
        assert W == tuple(range(inst.k))
        assert axioms.proportionality_degree(inst, W)[level] == Fraction(level + 1, 2)

    def test_sav_construction(self):
        # level 2: k = 5, the first 2 voters approve a_1..a_5, the other 3 approve b_1..b_5
        ballots = [list(range(5))] * 2 + [list(range(5, 10))] * 3
        inst = ElectionInstance.from_ballots(ballots, 5, m=10)
        W = sav(inst).resolute
        assert W == tuple(range(5, 10))
        assert axioms.proportionality_degree(inst, W)[2] == 0

    def test_mav_construction(self):
        # level 2: k = 3, 2 voters approve a_1..a_3, one voter approves b_1..b_10
        ballots = [[0, 1, 2]] * 2 + [list(range(3, 13))]
        inst = ElectionInstance.from_ballots(ballots, 3, m=13)
        winners = mav_exact(inst).committees
        assert len(winners) == 120 and all(min(W) >= 3 for W in winners)
        assert all(axioms.proportionality_degree(inst, W)[2] == 0 for W in winners)

    def test_no_group_at_top_level(self):
        inst = build("1:a 1:b", 2)
        degree = axioms.proportionality_degree(inst, com("ab"))
        assert degree == {1: 1, 2: None}

    @given(instance_and_committee(n_max=6, m_max=6))
    def test_matches_oracle(self, pair):
        inst, W = pair
        assert axioms.proportionality_degree(inst, W) == oracle_proportionality_degree(inst, W)

    @given(instance_and_committee(n_max=6, m_max=6))
    def test_ejr_committees_reach_half_level(self, pair):
        inst, W = pair
        if axioms.check_ejr(inst, W):
            for level, value in axioms.proportionality_degree(inst, W).items():
                assert value is None or value >= Fraction(level - 1, 2)


class TestCore:
    def test_laminar_pav_committee(self):
        inst = laminar_example()
        assert set(thiele_exact(inst, make_weights("pav", 12)).committees) == {LAMINAR_PAV}
        deviation = axioms.find_core_violation(inst, LAMINAR_PAV)
        assert deviation.candidates == (0, 1, 2, 3, 4, 5)
        assert deviation.voters == (0, 1, 2)

    def test_full_committee(self):
        inst = build("2:ab 1:c", 3)
        assert axioms.check_core(inst, (0, 1, 2))

    def test_beta_must_be_positive(self):
        with pytest.raises(ValueError):
            axioms.find_core_violation(running_example(), com("abcf"), beta=0)

    @given(instance_and_committee(n_max=5, m_max=5))
    def test_matches_oracle(self, pair):
        inst, W = pair
        assert (axioms.find_core_violation(inst, W) is None) == oracle_core(inst, W)

    @given(instances(n_max=7, m_max=6))
    def test_pav_has_no_doubled_deviation(self, inst):
        for W in thiele_exact(inst, make_weights("pav", inst.k)).committees.representatives():
            assert axioms.find_core_violation(inst, W, gamma=2) is None

    @given(instance_and_committee(n_max=6, m_max=6))
    def test_deviation_is_genuine(self, pair):
        inst, W = pair
        deviation = axioms.find_core_violation(inst, W, gamma=Fraction(3, 2), eta=Fraction(1, 2))
        if deviation is not None:
            counts = [len(b & set(W)) for b in inst.approvals]
            T = set(deviation.candidates)
            assert len(T) * inst.n <= len(deviation.voters) * inst.k
            for i in deviation.voters:
                assert len(inst.approvals[i] & T) > Fraction(3, 2) * counts[i] + Fraction(1, 2)


class TestPerfectRepresentation:
    def test_unique_pr_committee_is_dominated(self):
        inst = build(PR_PARETO_PROFILE, 2)
        assert set(axioms.pr_committees(inst)) == {com("ab")}
        assert axioms.exists_pr_committee(inst) == com("ab")
        assert axioms.check_pareto_optimal(inst, com("ab")).violated

    def test_running_example_monroe_winner(self):
        verdict = axioms.check_perfect_representation(running_example(), com("abce"))
        assert verdict.violated

    def test_distinct_singletons(self):
        inst = ElectionInstance.from_ballots([[0], [1], [2]], 3, m=4)
        verdict = axioms.check_perfect_representation(inst, (0, 1, 2))
        assert verdict.witness == axioms.PRPartition({0: (0,), 1: (1,), 2: (2,)})

    def test_not_applicable(self):
        inst = build("3:ab", 2)
        assert axioms.check_perfect_representation(inst, com("ab")).status == "not applicable"
        assert axioms.pr_committees(inst) is None

    @given(instance_and_committee(n_max=6, m_max=5))
    def test_matches_oracle(self, pair):
        inst, W = pair
        expected = oracle_pr(inst, W)
        verdict = axioms.check_perfect_representation(inst, W)
        if expected is None:
            assert verdict.status == "not applicable"
        else:
            assert bool(verdict) == expected
            if verdict:
                groups = verdict.witness.groups
                assert sorted(i for g in groups.values() for i in g) == list(range(inst.n))
                for c, voters in groups.items():
                    assert len(voters) == inst.n // inst.k
                    assert all(c in inst.approvals[i] for i in voters)

    @given(instances(n_max=6, m_max=5))
    def test_committee_scan_matches_oracle(self, inst):
        found = axioms.pr_committees(inst)
        if inst.n % inst.k:
            assert found is None
        else:
            expected = {W for W in itertools.combinations(range(inst.m), inst.k) if oracle_pr(inst, W)}
            assert set(found) == expected


class TestRatios:
    def test_running_example_cc_winner(self):
        # AV score of {a,e,f,g} is 8 + 1 + 2 + 1 = 12 against the optimum 18
        assert axioms.ratios(running_example(), com("aefg")) == (Fraction(2, 3), 1)

    @given(instances(n_max=6, m_max=6))
    def test_optimal_committees_score_one(self, inst):
        av = thiele_exact(inst, make_weights("av", inst.k)).resolute
        cc = thiele_exact(inst, make_weights("cc", inst.k)).resolute
        assert axioms.ratios(inst, av)[0] == 1
        assert axioms.ratios(inst, cc)[1] == 1


class TestCommitteeMonotonicity:
    @pytest.mark.parametrize("rule", ["cc", "pav", "monroe", "lexmin-phragmen", "mav"])
    def test_optimization_rules_break(self, rule):
        inst = build("2:a 3:ac 3:bc 2:b", 1)
        assert compute(rule, inst).resolute == com("c")
        assert compute(rule, inst.with_k(2)).resolute == com("ab")
        assert axioms.probe_committee_monotonicity(rule, inst, 2) == 2

    def test_rule_x_breaks_at_three(self):
        inst = build("4:ac 2:ad 3:bd 1:b", 1)
        assert rule_x(inst.with_k(2)).committee == com("ab")
        assert rule_x(inst.with_k(3)).committee == com("acd")
        assert axioms.probe_committee_monotonicity("rule-x", inst, 3) == 3

    def test_greedy_monroe_breaks_at_three(self):
        inst = build("6:a 4:ac 2:abc 2:a 1:ad 3:bd", 1)
        assert axioms.probe_committee_monotonicity("greedy-monroe", inst, 3) == 3

    @given(instances(n_max=6, m_max=6))
    def test_sequential_chain_holds(self, inst):
        assert axioms.probe_committee_monotonicity(lambda i: seq_phragmen(i), inst) is None
        assert axioms.probe_committee_monotonicity("seq-pav", inst) is None


class TestPartyProperties:
    def test_cc_disjoint_diversity(self):
        inst = party_list([5, 4, 3, 2], 3)
        result = thiele_exact(inst, make_weights("cc", 3))
        assert axioms.check_disjoint_diversity(inst, result)

    def test_av_lacks_disjoint_diversity(self):
        inst = party_list([60, 20, 10, 8, 2], 10)
        result = thiele_exact(inst, make_weights("av", 10))
        assert letters_of(result.resolute) == "abcdefghij"
        assert axioms.check_disjoint_diversity(inst, result).violated

    def test_diversity_needs_party_list(self):
        inst = running_example()
        result = RuleResult([com("abcf")])
        assert axioms.check_disjoint_diversity(inst, result).status == "not applicable"

    def test_av_disjoint_equality(self):
        inst = ElectionInstance.from_ballots([[0], [1], [2], [3]], 2, m=6)
        result = thiele_exact(inst, make_weights("av", 2))
        assert axioms.check_disjoint_equality(inst, result)
        assert axioms.check_disjoint_equality(inst, RuleResult([(0, 4)])).violated
        assert axioms.check_disjoint_equality(inst, RuleResult([(0, 1)])).violated

    def test_equality_not_applicable(self):
        assert axioms.check_disjoint_equality(running_example(), RuleResult([com("abcf")])).status == "not applicable"
