"""Command-line front end.

Exit codes: 0 success or property satisfied, 2 property violated, 3 property
not applicable, 64 usage or input error, 65 enumeration cap exceeded.
Voters are printed 1-based; candidates by their profile names.
"""

from __future__ import annotations

import argparse
import sys
from collections.abc import Sequence
from fractions import Fraction

from . import axioms
from .apportionment import ApportionmentInstance, dhondt, largest_remainder, sainte_lague
from .core import (
    CapExceeded,
    ElectionInstance,
    ProfileSyntaxError,
    RuleResult,
    TieOrder,
    Verdict,
    format_committee,
    format_rational,
    parse_committee,
    parse_profile,
)
from .ilp import export_ip
from .monroe import GreedyMonroeRound
from .phragmen import PhragmenRound, PriceSystem, RuleXPurchase, check_priceability
from .rules import compute
from .thiele import SequentialStep

EXIT_OK = 0
EXIT_VIOLATED = 2
EXIT_NOT_APPLICABLE = 3
EXIT_USAGE = 64
EXIT_CAP = 65

APPORTIONMENT_METHODS = {"dhondt": dhondt, "sainte-lague": sainte_lague, "lrm": largest_remainder}
AXIOMS = ("jr", "pjr", "ejr", "pareto", "core", "priceable", "pr", "condorcet")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _voters(voters) -> str:
    return ",".join(str(i + 1) for i in voters)


def _names(inst: ElectionInstance) -> list[str]:
    return [inst.label(c) for c in range(inst.m)]


def _committee(inst: ElectionInstance, W) -> str:
    return format_committee(W, _names(inst))


def format_result(inst: ElectionInstance, result: RuleResult) -> list[str]:
    suffix = "" if result.score is None else f"  score {format_rational(result.score)}"
    return [_committee(inst, W) + suffix for W in result.committees]


def format_trace(inst: ElectionInstance, result: RuleResult) -> list[str]:
    lines = []
    adding = result.rule.startswith("seq-") and result.rule != "seq-phragmen"
    for r, step in enumerate(result.trace, start=1):
        if isinstance(step, SequentialStep):
            verb, sign = ("add", "+") if adding else ("remove", "-")
            lines.append(f"round {r}: {verb} {inst.label(step.candidate)}  {sign}{format_rational(step.delta)}")
        elif isinstance(step, PhragmenRound):
            load = "tie order" if step.load is None else f"load {format_rational(step.load)}"
            lines.append(f"round {r}: {inst.label(step.candidate)}  {load}")
        elif isinstance(step, RuleXPurchase):
            payments = " ".join(f"{i + 1}:{format_rational(x)}" for i, x in step.payments)
            lines.append(f"round {r}: buy {inst.label(step.candidate)}  rho {format_rational(step.rho)}  paid {payments}")
        elif isinstance(step, GreedyMonroeRound):
            lines.append(f"round {r}: {inst.label(step.candidate)}  group {{{_voters(step.group)}}}  size {step.cap}")
    return lines


def format_witness(inst: ElectionInstance, witness) -> str:
    if witness is None:
        return ""
    if isinstance(witness, str):
        return witness
    if isinstance(witness, tuple):
        return _committee(inst, witness)
    if isinstance(witness, axioms.JRWitness):
        return f"candidate {inst.label(witness.candidate)}  voters {{{_voters(witness.voters)}}}"
    if isinstance(witness, axioms.CohesiveGroup):
        return (
            f"level {witness.level}  candidates {_committee(inst, witness.candidates)}"
            f"  voters {{{_voters(witness.voters)}}}"
        )
    if isinstance(witness, axioms.CoreDeviation):
        return f"candidates {_committee(inst, witness.candidates)}  voters {{{_voters(witness.voters)}}}"
    if isinstance(witness, axioms.PRPartition):
        return "  ".join(f"{inst.label(c)}:{{{_voters(v)}}}" for c, v in witness.groups.items())
    if isinstance(witness, PriceSystem):
        payments = " ".join(
            f"{i + 1}->{inst.label(c)}:{format_rational(x)}" for (i, c), x in sorted(witness.payments.items())
        )
        return f"budget {format_rational(witness.budget)}  payments {payments}"
    return str(witness)


def _read_profile(path: str) -> ElectionInstance:
    try:
        with open(path, encoding="utf-8") as handle:
            return parse_profile(handle.read())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except ProfileSyntaxError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _load(args) -> ElectionInstance:
    inst = _read_profile(args.input)
    if getattr(args, "k", None) is not None:
        if not 1 <= args.k <= inst.m:
            raise UsageError(f"--k must lie in 1..{inst.m}")
        inst = inst.with_k(args.k)
    return inst


def _tie_order(inst: ElectionInstance, text: str | None) -> TieOrder:
    if not text:
        return TieOrder()
    try:
        priority = tuple(parse_committee(t, inst)[0] for t in text.split(",") if t.strip())
    except (ValueError, IndexError) as exc:
        raise UsageError(f"--priority: {exc}") from exc
    if sorted(priority) != list(range(inst.m)):
        raise UsageError("--priority must list every candidate exactly once")
    return TieOrder(priority=priority)


def _run_rule(args, inst: ElectionInstance) -> RuleResult:
    try:
        return compute(args.rule, inst, _tie_order(inst, args.priority))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_compute(args, out) -> int:
    inst = _load(args)
    result = _run_rule(args, inst)
    for line in format_result(inst, result):
        print(line, file=out)
    if args.trace:
        for line in format_trace(inst, result):
            print(line, file=out)
    return EXIT_OK


def cmd_trace(args, out) -> int:
    inst = _load(args)
    result = _run_rule(args, inst)
    lines = format_trace(inst, result)
    if not lines:
        print(f"{args.rule} is not a sequential rule; no trace", file=out)
    for line in lines:
        print(line, file=out)
    return EXIT_OK


def check_axiom(name: str, inst: ElectionInstance, W, gamma=1, eta=0, beta=1) -> Verdict:
    if name == "jr":
        return axioms.check_jr(inst, W)
    if name == "pjr":
        return axioms.check_pjr(inst, W)
    if name == "ejr":
        return axioms.check_ejr(inst, W)
    if name == "pareto":
        return axioms.check_pareto_optimal(inst, W)
    if name == "core":
        return axioms.check_core(inst, W, gamma, eta, beta)
    if name == "priceable":
        return check_priceability(inst, W)
    if name == "pr":
        return axioms.check_perfect_representation(inst, W)
    if name == "condorcet":
        return axioms.check_condorcet_committee(inst, W)
    raise UsageError(f"unknown axiom {name!r}")


def cmd_check(args, out) -> int:
    inst = _read_profile(args.input)
    try:
        W = parse_committee(args.committee, inst)
        gamma, eta, beta = (Fraction(x) for x in (args.gamma, args.eta, args.beta))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if len(W) != inst.k:
        raise UsageError(f"committee has {len(W)} members but the profile asks for k={inst.k}")
    verdict = check_axiom(args.axiom, inst, W, gamma, eta, beta)
    detail = format_witness(inst, verdict.witness)
    print(verdict.status + (f": {detail}" if detail else ""), file=out)
    if verdict.status == Verdict.SATISFIED:
        return EXIT_OK
    return EXIT_VIOLATED if verdict.violated else EXIT_NOT_APPLICABLE


def cmd_apportion(args, out) -> int:
    try:
        votes = tuple(int(v) for v in args.votes.split(","))
        instance = ApportionmentInstance(votes, args.seats)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    allocation = APPORTIONMENT_METHODS[args.method](instance)
    print(" ".join(str(s) for s in allocation.seats), file=out)
    if args.trace:
        for r, party in enumerate(allocation.trace, start=1):
            print(f"seat {r}: party {party + 1}", file=out)
    return EXIT_OK


def cmd_export_ip(args, out) -> int:
    inst = _load(args)
    out.write(export_ip(inst, args.rule))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="abcengine", description="Approval-based committee elections with exact arithmetic.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def rule_command(name, handler, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--rule", required=True, help="rule id, e.g. pav, seq-phragmen, geom:2")
        p.add_argument("--input", required=True, help="profile file")
        p.add_argument("--k", type=int, help="override the committee size in the profile")
        p.add_argument("--priority", help="tie-breaking order as comma-separated candidates")
        p.set_defaults(handler=handler)
        return p

    rule_command("compute", cmd_compute, "compute winning committees").add_argument(
        "--trace", action="store_true", help="also print the round log"
    )
    rule_command("trace", cmd_trace, "print the round log of a sequential rule")

    check = sub.add_parser("check", help="check a committee against a property")
    check.add_argument("--axiom", required=True, choices=AXIOMS)
    check.add_argument("--input", required=True)
    check.add_argument("--committee", required=True, help='e.g. "{a,b,c}"')
    check.add_argument("--gamma", default="1", help="core: multiplicative slack")
    check.add_argument("--eta", default="0", help="core: additive slack")
    check.add_argument("--beta", default="1", help="core: entitlement factor")
    check.set_defaults(handler=cmd_check)

    apportion = sub.add_parser("apportion", help="party-list seat allocation")
    apportion.add_argument("--method", required=True, choices=sorted(APPORTIONMENT_METHODS))
    apportion.add_argument("--votes", required=True, help="comma-separated vote counts")
    apportion.add_argument("--seats", required=True, type=int)
    apportion.add_argument("--trace", action="store_true")
    apportion.set_defaults(handler=cmd_apportion)

    ip = sub.add_parser("export-ip", help="write the PAV or MAV integer program")
    ip.add_argument("--rule", required=True, choices=("pav", "mav"))
    ip.add_argument("--input", required=True)
    ip.add_argument("--k", type=int)
    ip.set_defaults(handler=cmd_export_ip)
    return parser


def run_cli(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.handler(args, out)
    except UsageError as exc:
        print(f"abcengine: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceeded as exc:
        print(f"abcengine: {exc}", file=sys.stderr)
        return EXIT_CAP


def main() -> None:
    sys.exit(run_cli())
