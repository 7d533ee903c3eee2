"""CLI module - batch subcommands emitting one JSON report on standard out."""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

try:
    from algorithms import OracleFunction, OracleId, classical_distinguish, deutsch_jozsa, ghz_prepare
    from circuit import parse_circuit, run_program
    from decoherence import (DEFAULT_TAU_DEC, DEFAULT_TAU_OP, DecoherenceBudget, feasible,
                             max_operations, shor_requirements)
    from errors import CircuitParseError, SimulatorError
    from nmr import (PURE_STATE_CONFIG, PureStateKind, certificate_threshold, make_pseudo_pure,
                     ppt_check, pure_state, separability_certificate)
    from qstate import measure_all
except ImportError:
    from src.algorithms import OracleFunction, OracleId, classical_distinguish, deutsch_jozsa, ghz_prepare
    from src.circuit import parse_circuit, run_program
    from src.decoherence import (DEFAULT_TAU_DEC, DEFAULT_TAU_OP, DecoherenceBudget, feasible,
                                 max_operations, shor_requirements)
    from src.errors import CircuitParseError, SimulatorError
    from src.nmr import (PURE_STATE_CONFIG, PureStateKind, certificate_threshold, make_pseudo_pure,
                         ppt_check, pure_state, separability_certificate)
    from src.qstate import measure_all

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1


def dj_report(function: str) -> dict:
    """Deutsch-Jozsa run plus the classical two-call comparison."""
    f = OracleFunction(function)
    result = deutsch_jozsa(f)
    classical = classical_distinguish(OracleFunction(function))
    report = result.to_dict()
    report["function"] = function
    report["label"] = f.label
    report["classical"] = {"verdict": classical.verdict.value, "oracle_calls": classical.oracle_calls}
    return report


def ghz_report(n_qbits: int) -> dict:
    state = ghz_prepare(n_qbits)
    return {
        "n_qbits": n_qbits,
        "final_state": state.to_dict(),
        "outcomes": [{"bitstring": o.bitstring, "probability": o.probability}
                     for o in measure_all(state)],
    }


def budget_report(tau_dec: float, tau_op: float, bits: int) -> dict:
    """Decoherence budget for factoring a `bits`-bit number."""
    needs = shor_requirements(bits)
    budget = DecoherenceBudget(tau_dec=tau_dec, tau_op=tau_op, required_ops=needs.ops)
    return {
        "M": max_operations(budget),
        "required_ops": needs.ops,
        "qbits": needs.qbits,
        "feasible": feasible(budget),
        "interpolated": needs.interpolated,
    }


def nmr_report(n_qbits: int, epsilon: float, kind: str) -> dict:
    """Separability certificate and PPT check for one pseudo-pure state."""
    psi = pure_state(kind, n_qbits)
    state = make_pseudo_pure(n_qbits, epsilon, psi)
    certificate = separability_certificate(state)
    report = {
        "certified": certificate.separable_certified,
        "min_coefficient": certificate.min_coefficient,
        "ppt": None,
        "ppt_min_eigenvalue": None,
        "ppt_criterion": None,
        "threshold_estimate": certificate_threshold(n_qbits, psi),
        "pure": PURE_STATE_CONFIG[PureStateKind(kind)]["label"],
    }
    if n_qbits >= 2:
        ppt = ppt_check(state.matrix(), cut=1)
        report.update(ppt=ppt.ppt, ppt_min_eigenvalue=ppt.min_eigenvalue, ppt_criterion=ppt.criterion)
    return report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qbitsim", description="Desk-scale Q-bit register simulator.")
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="more diagnostics on standard error (repeat for debug)")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="run a circuit file")
    run.add_argument("file", type=Path)
    run.add_argument("--sample", type=int, metavar="SEED", default=None,
                     help="also sample the measure statement with this seed")

    dj = commands.add_parser("dj", help="Deutsch-Jozsa on one of the four oracles")
    dj.add_argument("--function", required=True, choices=[o.value for o in OracleId])

    ghz = commands.add_parser("ghz", help="prepare a GHZ state by the rotation/XOR cascade")
    ghz.add_argument("--n", type=int, default=3)

    budget = commands.add_parser("budget", help="decoherence budget for Shor factoring")
    budget.add_argument("--tau-dec", type=float, default=DEFAULT_TAU_DEC)
    budget.add_argument("--tau-op", type=float, default=DEFAULT_TAU_OP)
    budget.add_argument("--bits", type=int, required=True)

    sep = commands.add_parser("nmr-sep", help="separability of an NMR pseudo-pure state")
    sep.add_argument("--n", type=int, default=2)
    sep.add_argument("--epsilon", type=float, required=True)
    sep.add_argument("--pure", default=PureStateKind.BELL.value, choices=[k.value for k in PureStateKind])
    return parser


def dispatch(args: argparse.Namespace) -> dict:
    """Run the selected subcommand and return its report."""
    if args.command == "run":
        program = parse_circuit(args.file.read_text(encoding="utf-8"))
        return run_program(program, sample_seed=args.sample)
    if args.command == "dj":
        return dj_report(args.function)
    if args.command == "ghz":
        return ghz_report(args.n)
    if args.command == "budget":
        return budget_report(args.tau_dec, args.tau_op, args.bits)
    return nmr_report(args.n, args.epsilon, args.pure)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run, print the JSON report.

    Returns:
        Process exit code: 0 on success, 1 on any simulator or file error.
    """
    args = build_parser().parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(stream=sys.stderr, level=level,
                        format="%(levelname)s %(name)s: %(message)s", force=True)

    try:
        report = dispatch(args)
    except CircuitParseError as exc:
        logger.error("%s: %s", args.file, exc)
        return EXIT_FAILURE
    except (SimulatorError, OSError) as exc:
        logger.error("%s", exc)
        return EXIT_FAILURE

    json.dump(report, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK
