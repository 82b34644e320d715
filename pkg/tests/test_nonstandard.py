import itertools

from hypothesis import given
from helpers import build, com, cset, oracle_pareto_dominators, running_example
from strategies import instance_and_committee, instances

from abcengine.core import hamming
from abcengine.nonstandard import distance_profile, lex_mav_exact, mav_exact, mav_score, sav


class TestMavScore:
    def test_far_minority(self):
        assert mav_score(build("99:a 1:bc", 1), com("a")) == 3

    def test_own_ballot(self):
        assert mav_score(build("1:abd", 3), com("abd")) == 0

    @given(instance_and_committee(n_max=6, m_max=6))
    def test_matches_recomputation(self, pair):
        inst, W = pair
        distances = [len(set(b) ^ set(W)) for b in inst.approvals]
        profile = distance_profile(inst, W)
        assert profile.distances == tuple(distances)
        assert sorted(profile.descending) == sorted(distances)
        assert mav_score(inst, W) == max(distances)


class TestMavExact:
    def test_minority_ballot_decides(self):
        result = mav_exact(build("99:a 1:bc", 1))
        assert set(result.committees) == cset("b", "c") and result.score == 2

    def test_lex_refinement(self):
        inst = build("99:a 1:abc", 1)
        assert set(mav_exact(inst).committees) == cset("a", "b", "c")
        lex = lex_mav_exact(inst)
        assert set(lex.committees) == cset("a")
        assert distance_profile(inst, com("a")).descending == (2,) + (0,) * 99

    def test_single_voter(self):
        inst = build("1:bd", 2, m=4)
        assert set(mav_exact(inst).committees) == cset("bd")
        assert set(lex_mav_exact(inst).committees) == cset("bd")

    def test_running_example(self):
        inst = running_example()
        result = mav_exact(inst)
        assert len(result.committees) == 22 and result.score == 5
        assert set(lex_mav_exact(inst).committees) == cset("abef", "abfg", "acef", "acfg")

    def test_dominated_winners_exist(self):
        inst = build("1:ac 1:bc 1:de", 1)
        winners = set(mav_exact(inst).committees)
        assert winners == cset("a", "b", "c", "d", "e")
        assert oracle_pareto_dominators(inst, com("a"))

    @given(instances(n_max=6, m_max=6))
    def test_matches_enumeration(self, inst):
        committees = list(itertools.combinations(range(inst.m), inst.k))
        worst = {W: max(hamming(b, W) for b in inst.approvals) for W in committees}
        best = min(worst.values())
        result = mav_exact(inst)
        assert result.score == best
        assert set(result.committees) == {W for W in committees if worst[W] == best}
        tuples = {W: distance_profile(inst, W).descending for W in committees}
        least = min(tuples.values())
        assert set(lex_mav_exact(inst).committees) == {W for W in committees if tuples[W] == least}

    @given(instances(n_max=6, m_max=6))
    def test_lex_winners_are_mav_winners(self, inst):
        assert set(lex_mav_exact(inst).committees) <= set(mav_exact(inst).committees)

    @given(instances(n_max=6, m_max=6))
    def test_no_committee_is_closer_to_every_voter(self, inst):
        for W in mav_exact(inst).committees:
            own = distance_profile(inst, W).distances
            for other in itertools.combinations(range(inst.m), inst.k):
                theirs = distance_profile(inst, other).distances
                assert not all(t < o for t, o in zip(theirs, own))


@given(instances(n_max=6, m_max=6))
def test_sav_winners_are_undominated(inst):
    for W in sav(inst).committees:
        assert oracle_pareto_dominators(inst, W) == []

