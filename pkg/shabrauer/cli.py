# shabrauer/cli.py

"""
Command-line front end.

    shabrauer cohomology --input problem.json --module M --degree 2
    shabrauer sha --input problem.json --json
    shabrauer brauer --input problem.json
    shabrauer abelianize --preset e --prime 3
    shabrauer validate --input problem.json

Exit codes: 0 success, 2 schema error, 3 precondition failure, 4 budget exceeded.
"""

import argparse
import logging
import sys
from typing import List, Optional

from shabrauer.cohomology.cochains import Cochain
from shabrauer.cohomology.groups import cohomology_group
from shabrauer.config import Config
from shabrauer.data.document_processor import DocumentProcessor
from shabrauer.data.problem_loader import ProblemLoader
from shabrauer.errors import SchemaError, ShaBrauerError
from shabrauer.models import (
    CochainModel,
    DiagnosticModel,
    ErrorModel,
    OracleModel,
    ResultDocument,
    StructureModel,
)
from shabrauer.oracle import OracleBudget, cross_check_cohomology, cross_check_hypercohomology
from shabrauer.sha import PRESETS, abelianize_presentation, brauer_group, sha1_omega_alg
from shabrauer.utils.logging import setup_logger
from shabrauer.utils.reporting import render_text, restriction_rows

logger = logging.getLogger(__name__)


def parse_arguments(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """
    Parses command-line arguments.

    Returns:
        argparse.Namespace: Parsed arguments.
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="Print the result document as JSON.")
    common.add_argument("--max-order", type=int, default=None, help="Largest group order accepted.")
    common.add_argument("--workers", type=int, default=None, help="Threads for per-subgroup restrictions.")
    common.add_argument("--log-file", type=str, default=None, help="Also log to this rotating file.")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG.")

    document = argparse.ArgumentParser(add_help=False)
    document.add_argument("--input", required=True, help="Problem document (JSON).")

    oracle = argparse.ArgumentParser(add_help=False)
    oracle.add_argument("--oracle", action="store_true", help="Cross-check with an independent oracle.")

    parser = argparse.ArgumentParser(
        prog="shabrauer",
        description="Group cohomology, Sha^1_omega,alg of two-term complexes and Brauer group reports.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    cohomology = commands.add_parser("cohomology", parents=[common, document, oracle],
                                     help="H^n(G, M) of a module in the document.")
    cohomology.add_argument("--module", help="Module name; optional when the document has exactly one.")
    cohomology.add_argument("--degree", type=int, default=1, help="Degree n (0, 1 or 2).")

    sha = commands.add_parser("sha", parents=[common, document, oracle],
                              help="Sha^1_omega,alg of the document's complex.")
    sha.add_argument("--exhaustive", action="store_true", help="Restrict to every cyclic subgroup.")

    commands.add_parser("brauer", parents=[common, document],
                        help="Brauer group report for the document's complex and hypotheses.")

    abelianize = commands.add_parser("abelianize", parents=[common],
                                     help="Abelianization of a finite presentation.")
    abelianize.add_argument("--preset", choices=sorted(PRESETS), help="Built-in presentation.")
    abelianize.add_argument("--prime", type=int, default=2, help="Prime for the 'e' preset.")
    abelianize.add_argument("--generators", help="Comma-separated generator names, e.g. x,y,z.")
    abelianize.add_argument("--relator", action="append", default=[], help="Relator word; repeatable.")

    commands.add_parser("validate", parents=[common, document], help="Check every module and the complex.")
    return parser.parse_args(argv)


def _cochain_model(cochain: Cochain) -> CochainModel:
    return CochainModel(arities=list(cochain.arities),
                        tables=[[list(v) for v in table] for table in cochain.tables])


def _load(args: argparse.Namespace, config: Config, validate: bool = True):
    try:
        document, digest = ProblemLoader().load(args.input)
    except OSError as e:
        raise SchemaError(str(e), location=args.input) from e
    return DocumentProcessor(config).process(document, validate=validate), digest


def cmd_cohomology(args: argparse.Namespace, config: Config) -> ResultDocument:
    problem, digest = _load(args, config)
    if args.module is None:
        if len(problem.modules) != 1:
            raise SchemaError(f"--module is required when the document has {len(problem.modules)} modules")
        name = next(iter(problem.modules))
    elif args.module not in problem.modules:
        raise SchemaError(f"unknown module {args.module!r}", location="modules")
    else:
        name = args.module
    H = cohomology_group(problem.group, problem.modules[name], args.degree)
    result = ResultDocument(
        command="cohomology",
        input_digest=digest,
        degree=args.degree,
        structures={f"H{args.degree}({name})": StructureModel.from_structure(H.structure)},
        generators=[_cochain_model(g) for g in H.generators],
    )
    if args.oracle:
        if args.degree in (1, 2):
            report = cross_check_cohomology(problem.group, problem.modules[name], args.degree, H.structure,
                                            OracleBudget.from_config(config))
            result.oracle = OracleModel(oracle=report.oracle, agrees=report.agrees,
                                        structure=StructureModel.from_structure(report.structure))
        else:
            logger.warning(f"no oracle for degree {args.degree}")
    return result


def cmd_sha(args: argparse.Namespace, config: Config) -> ResultDocument:
    problem, digest = _load(args, config)
    if problem.complex is None:
        raise SchemaError("the document has no complex section", location="complex")
    sha = sha1_omega_alg(problem.group, problem.complex, exhaustive=args.exhaustive, config=config)
    result = ResultDocument(
        command="sha",
        input_digest=digest,
        degree=1,
        structures={
            "H1(complex)": StructureModel.from_structure(sha.cohomology.structure),
            "Sha1": StructureModel.from_structure(sha.structure),
        },
        generators=[_cochain_model(g) for g in sha.generators],
        restrictions=restriction_rows(sha),
        sha=StructureModel.from_structure(sha.structure),
    )
    if args.oracle:
        report = cross_check_hypercohomology(problem.group, problem.complex, sha.cohomology.structure,
                                             OracleBudget.from_config(config))
        if report is not None:
            result.oracle = OracleModel(oracle=report.oracle, agrees=report.agrees,
                                        structure=StructureModel.from_structure(report.structure))
    return result


def cmd_brauer(args: argparse.Namespace, config: Config) -> ResultDocument:
    problem, digest = _load(args, config)
    if problem.complex is None:
        raise SchemaError("the document has no complex section", location="complex")
    if problem.hypotheses is None:
        raise SchemaError("the document has no hypotheses section", location="hypotheses")
    C = problem.complex
    report = brauer_group(problem.group, C.A, C.B, C.f, problem.hypotheses, config=config)
    return ResultDocument(
        command="brauer",
        input_digest=digest,
        degree=1,
        structures={
            "H1(complex)": StructureModel.from_structure(report.sha.cohomology.structure),
            "Sha1": StructureModel.from_structure(report.sha.structure),
        },
        restrictions=restriction_rows(report.sha),
        sha=StructureModel.from_structure(report.sha.structure),
        interpretation=report.interpretation.value,
        theorem=report.theorem,
        statement=report.statement,
        caveats=list(report.caveats),
        hypotheses=report.hypotheses.to_dict(),
        identification={
            "sha2_t_hat": StructureModel.from_structure(report.identification.sha2_t_hat).model_dump(),
            "s_hat_torsion_free": report.identification.s_hat_torsion_free,
            "holds": report.identification.holds,
            "upgrades_to_full_brauer": report.upgrades_to_full_brauer,
        },
    )


def cmd_abelianize(args: argparse.Namespace, config: Config) -> ResultDocument:
    if args.preset:
        if args.generators or args.relator:
            raise SchemaError("--preset cannot be combined with --generators or --relator")
        generators, relators = PRESETS[args.preset](args.prime)
    else:
        if not args.generators:
            raise SchemaError("give --preset or --generators (with any number of --relator)")
        generators = [g.strip() for g in args.generators.split(",") if g.strip()]
        relators = args.relator
    structure, exponents = abelianize_presentation(generators, relators)
    return ResultDocument(
        command="abelianize",
        structures={"abelianization": StructureModel.from_structure(structure)},
        exponents=exponents.to_rows(),
    )


def cmd_validate(args: argparse.Namespace, config: Config) -> ResultDocument:
    problem, digest = _load(args, config, validate=False)
    diagnostics = DocumentProcessor.diagnostics(problem.modules, problem.complex)
    valid = all(d.valid for d in diagnostics.values())
    return ResultDocument(
        command="validate",
        input_digest=digest,
        diagnostics=[
            DiagnosticModel(name=name, valid=d.valid, failures=list(d.failures)) for name, d in diagnostics.items()
        ],
        exit_status=0 if valid else 3,
    )


def _error_document(command: str, kind: str, message: str, exit_code: int) -> ResultDocument:
    return ResultDocument(
        command=command,
        error=ErrorModel(type=kind, message=message, exit_code=exit_code),
        exit_status=exit_code,
    )


COMMANDS = {
    "cohomology": cmd_cohomology,
    "sha": cmd_sha,
    "brauer": cmd_brauer,
    "abelianize": cmd_abelianize,
    "validate": cmd_validate,
}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Runs one command and prints its result document.

    Returns:
        int: Process exit code.
    """
    args = parse_arguments(argv)
    level = {0: "WARNING", 1: "INFO"}.get(args.verbose, "DEBUG")
    setup_logger("shabrauer", log_file=args.log_file, level=level)

    try:
        # non-positive --max-order or --workers raise ValueError here
        config = Config().with_overrides(max_group_order=args.max_order, workers=args.workers,
                                         log_file=args.log_file, log_level=level)
        result = COMMANDS[args.command](args, config)
    except ShaBrauerError as e:
        logger.error(f"{args.command} failed: {e.message}")
        result = _error_document(args.command, type(e).__name__, e.message, e.exit_code)
    except ValueError as e:
        logger.error(f"{args.command} failed: {e}")
        result = _error_document(args.command, SchemaError.__name__, str(e), SchemaError.exit_code)

    if args.json:
        print(result.model_dump_json(indent=2, exclude_none=True))
    else:
        print(render_text(result))
    return result.exit_status


if __name__ == "__main__":
    sys.exit(main())
