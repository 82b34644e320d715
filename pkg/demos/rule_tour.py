"""Run every rule on a small profile and audit the winners.

Usage: python demos/rule_tour.py [profile-file]
"""

import sys
from pathlib import Path

from abcengine import (
    RULE_IDS,
    check_ejr,
    check_jr,
    check_pjr,
    check_priceability,
    compute,
    format_committee,
    format_rational,
    parse_profile,
)

DEFAULT_PROFILE = Path(__file__).with_name("twelve_voters.abc")
PARAMETER_EXAMPLES = {"geom": "geom:2", "custom": "custom:1,1/2,1/4,0"}


def main(path: Path) -> None:
    inst = parse_profile(path.read_text())
    print(f"n={inst.n} m={inst.m} k={inst.k}\n")
    for template in RULE_IDS:
        rule = PARAMETER_EXAMPLES.get(template.split(":")[0], template)
        result = compute(rule, inst)
        W = result.committees[0]
        audits = {
            "JR": check_jr(inst, W),
            "PJR": check_pjr(inst, W),
            "EJR": check_ejr(inst, W),
            "priceable": check_priceability(inst, W),
        }
        passed = " ".join(name for name, verdict in audits.items() if verdict)
        score = "" if result.score is None else f"score {format_rational(result.score)}"
        ties = f"(+{len(result.committees) - 1} tied)" if len(result.committees) > 1 else ""
        print(f"{rule:20} {format_committee(W, inst.names):12} {score:14} {ties:10} {passed}")


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else DEFAULT_PROFILE)
