"""Party-list profiles: committee rules reproduce apportionment methods.

Usage: python demos/apportionment_bridge.py 60,20,10,8,2 10
"""

import sys

from abcengine import (
    ApportionmentInstance,
    ElectionInstance,
    as_party_list,
    dhondt,
    greedy_monroe,
    largest_remainder,
    lexmin_phragmen,
    make_weights,
    rule_x,
    sainte_lague,
    seq_phragmen,
    thiele_exact,
)


def party_profile(votes: list[int], seats: int) -> ElectionInstance:
    """One block of ``seats`` candidates per party; each voter approves their party's block."""
    ballots = []
    for party, count in enumerate(votes):
        ballots += [range(party * seats, (party + 1) * seats)] * count
    return ElectionInstance.from_ballots(ballots, seats, m=seats * len(votes))


def main(votes: list[int], seats: int) -> None:
    apportionment = ApportionmentInstance(tuple(votes), seats)
    print("D'Hondt          ", dhondt(apportionment).seats)
    print("Sainte-Lague     ", sainte_lague(apportionment).seats)
    print("largest remainder", largest_remainder(apportionment).seats)

    inst = party_profile(votes, seats)
    parties = as_party_list(inst)
    rules = {
        "PAV": lambda: thiele_exact(inst, make_weights("pav", seats)).committees[0],
        "seq-Phragmen": lambda: seq_phragmen(inst).committee,
        "lexmin-Phragmen": lambda: lexmin_phragmen(inst).committees[0],
        "Rule X": lambda: rule_x(inst).committee,
        "Greedy Monroe": lambda: greedy_monroe(inst).committee,
    }
    for name, winner in rules.items():
        print(f"{name:17}", parties.seat_counts(winner()))


if __name__ == "__main__":
    if len(sys.argv) == 3:
        main([int(v) for v in sys.argv[1].split(",")], int(sys.argv[2]))
    else:
        main([60, 20, 10, 8, 2], 10)
