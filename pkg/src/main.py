"""Command-line entry point: python -m src.main <command> [options]."""
import argparse
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional

from .channels import ChannelSpec, llr, transmit
from .cone import cone_contains
from .decoders import cc_lpd, cc_mld, cs_lpd, cs_opt, zero_codeword_certificate
from .errors import NoSolutionWithinK, SoundnessViolation
from .experiments import (
    GUARANTEE_NORMS, ExperimentConfig, Guards, MatrixCase, random_matrix_corpus, result_columns,
    run_experiment, total_violations
)
from .matrices import BinaryMatrix, SupportSet, load_matrix, matvec, parse_vector
from .nsp import bridge_map, bsc_pw_implies_nsp, check_nsp_k, check_nsp_support, violates
from .pseudoweight import PseudoWeightKind, min_pseudoweight, pseudoweight_report
from .reporting import dumps_csv, dumps_json, format_rational, write_output
from .utils.logger import setup_logger
from .utils.validators import default_config, load_config

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parent.parent / "config" / "config.yaml"
SEED_ENV = "LPDECODE_SEED"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SOUNDNESS = 2

SWEEP_COMMANDS = (
    "translate", "guarantee", "peel-equiv", "equivalence", "sandwich", "halfweight", "maxfrac-check"
)


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors raise instead of exiting, so they share exit code 1 with config errors."""

    def error(self, message):
        raise ValueError(message)


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a rational number: '{text}'")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="lpdecode",
        description="LP decoding for compressed sensing and channel coding: certificates and sweeps",
    )
    parser.add_argument("--config", help="YAML configuration file (default: config/config.yaml)")
    subparsers = parser.add_subparsers(dest="command", help="Command to run")

    def matrix_args(sub, multiple=False, required=True):
        sub.add_argument(
            "--matrix", action="append" if multiple else None, required=required,
            help="Matrix file" + (" (repeatable)" if multiple else "")
        )
        sub.add_argument("--format", choices=["alist", "dense"], help="Matrix format (default: by suffix)")

    def output_args(sub):
        sub.add_argument("--out", help="Output file (default: stdout)")
        sub.add_argument("--out-format", choices=["csv", "json"], help="Output format")

    def sweep_args(sub):
        sub.add_argument("--trials", type=int, help="Trials per matrix (per support for translate, equivalence)")
        sub.add_argument("--seed", type=int, help=f"Base seed (fallback: ${SEED_ENV}, then config)")
        sub.add_argument("--workers", type=int, help="Parallel worker processes")
        sub.add_argument("--timing", action="store_true", help="Add wall-time to result rows")

    sub = subparsers.add_parser("certify-nsp", help="Decide the nullspace property NSP(k, C) or NSP(S, C)")
    matrix_args(sub)
    target = sub.add_mutually_exclusive_group(required=True)
    target.add_argument("--k", type=int, help="All supports of size <= k")
    target.add_argument("--support", help="One support, 1-based indices, e.g. '1,3'")
    sub.add_argument("--c", type=_rational, default=Fraction(1), help="Constant C (default 1)")
    sub.add_argument("--strict", action="store_true", help="Strict variant NSP<")
    output_args(sub)

    sub = subparsers.add_parser(
        "nsp-implication", help="Check min BSC pseudo-weight > 2k against NSP<(k, 1) on one matrix"
    )
    matrix_args(sub)
    sub.add_argument("--k", type=int, required=True, help="Sparsity k")
    output_args(sub)

    sub = subparsers.add_parser("pseudoweight", help="All pseudo-weights of one vector")
    sub.add_argument("--vector", required=True, help="Nonnegative vector, e.g. '2,1,1'")
    matrix_args(sub, required=False)
    output_args(sub)

    sub = subparsers.add_parser("min-pseudoweight", help="Minimum pseudo-weight over the fundamental cone")
    matrix_args(sub)
    sub.add_argument("--kind", choices=[k.value for k in PseudoWeightKind] + ["all"], default="all")
    output_args(sub)

    sub = subparsers.add_parser("decode-cs", help="CS-LPD (and optionally CS-OPT) from a syndrome")
    matrix_args(sub)
    given = sub.add_mutually_exclusive_group(required=True)
    given.add_argument("--syndrome", help="Measurement vector s")
    given.add_argument("--vector", help="Error vector e; s = H·e")
    sub.add_argument("--k", type=int, help="Also run CS-OPT with this sparsity limit")
    output_args(sub)

    sub = subparsers.add_parser("decode-cc", help="CC-LPD and CC-MLD for an LLR vector or a channel draw")
    matrix_args(sub)
    given = sub.add_mutually_exclusive_group(required=True)
    given.add_argument("--llr", help="LLR vector (use --llr=-1,1,1 for a leading minus)")
    given.add_argument("--channel", help="bsc:p or awgnc:sigma; the all-zero word is sent")
    sub.add_argument("--seed", type=int, help=f"Channel seed (fallback: ${SEED_ENV}, then config)")
    output_args(sub)

    sub = subparsers.add_parser("bridge-check", help="Map nullspace vectors into the fundamental cone")
    matrix_args(sub, multiple=True, required=False)
    sub.add_argument("--vector", help="One nullspace vector (first matrix)")
    sub.add_argument("--random-matrices", type=int, help="Sweep over this many random matrices")
    sweep_args(sub)
    output_args(sub)

    helps = {
        "translate": "CC-LPD flip-set corrections carried over to CS-LPD recoveries",
        "guarantee": "Zero-violation runs of the l1/l1, l2/l1 and linf/l1 bounds",
        "peel-equiv": "Peeling decoder vs. rational back-substitution",
        "equivalence": "CS-LPD = CS-OPT on matrices certified NSP<(k, 1)",
        "sandwich": "CC-LPD objective <= CC-MLD objective over channel draws",
        "halfweight": "Balancedness of extreme rays below half their BSC pseudo-weight",
        "maxfrac-check": "LP vs. extreme-ray minimum of the max-fractional weight",
    }
    for name in SWEEP_COMMANDS:
        sub = subparsers.add_parser(name, help=helps[name])
        matrix_args(sub, multiple=True, required=name != "peel-equiv")
        sweep_args(sub)
        output_args(sub)
        if name in ("translate", "equivalence", "guarantee"):
            sub.add_argument("--k", type=int, default=1, help="Sparsity / flip-set size (default 1)")
        if name == "guarantee":
            sub.add_argument("--norm", choices=GUARANTEE_NORMS, default="l1")
            sub.add_argument("--c", type=_rational, help="NSP constant C > 1 (l1/l1)")
            sub.add_argument("--cprime", type=_rational, help="Pseudo-weight constant C' (l2/l1, linf/l1)")
        if name == "sandwich":
            sub.add_argument("--channel", required=True, help="bsc:p or awgnc:sigma")

    return parser


def _load_cases(args) -> List[MatrixCase]:
    paths = args.matrix or []
    if isinstance(paths, str):
        paths = [paths]
    return [MatrixCase(Path(p).stem, load_matrix(p, args.format)) for p in paths]


def _first_matrix(args) -> BinaryMatrix:
    cases = _load_cases(args)
    if not cases:
        raise ValueError("--matrix is required")
    return cases[0].matrix


def _resolve_seed(args, config: Dict[str, Any]) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    if os.getenv(SEED_ENV):
        return int(os.environ[SEED_ENV])
    return int(config['experiments']['seed'])


def _out_path(args, config: Dict[str, Any]) -> Optional[str]:
    if not args.out:
        return None
    path = Path(args.out)
    if not path.is_absolute():
        path = Path(config['output']['directory']) / path
    return str(path)


def _emit_json(payload: Any, args, config: Dict[str, Any]) -> None:
    write_output(dumps_json(payload), _out_path(args, config))


def _parse_support(text: str, n: int) -> SupportSet:
    indices = [int(t) - 1 for t in text.replace(',', ' ').split()]
    return SupportSet.of(indices, n)


# ---------------------------------------------------------------------------
# Single-instance commands
# ---------------------------------------------------------------------------

def cmd_certify_nsp(args, config, logger: logging.Logger) -> int:
    H = _first_matrix(args)
    guards = Guards.from_config(config['guards'])
    if args.support is not None:
        report = check_nsp_support(H, _parse_support(args.support, H.n), args.c, args.strict)
    else:
        report = check_nsp_k(
            H, args.k, args.c, args.strict,
            max_lps=guards.max_nsp_lps, workers=config['experiments']['workers']
        )
    if not report.holds:
        nu = report.certificate
        if any(matvec(H, nu)) or not violates(nu, report.support, report.query.C, args.strict):
            raise SoundnessViolation(f"Invalid certificate for {report.query.label}")
    logger.info(f"{report.query.label}: {report.verdict.value}")
    _emit_json(report, args, config)
    return EXIT_OK


def cmd_nsp_implication(args, config, logger: logging.Logger) -> int:
    H = _first_matrix(args)
    if not 1 <= args.k <= H.n:
        raise ValueError(f"k must be in 1..{H.n}, got {args.k}")
    guards = Guards.from_config(config['guards'])
    report = bsc_pw_implies_nsp(
        H, args.k, guards.max_ray_columns, guards.max_nsp_lps, config['experiments']['workers']
    )
    logger.info(f"premise {report.premise}, NSP<({args.k}, 1) {report.conclusion}")
    _emit_json(report.to_dict(), args, config)
    return EXIT_OK


def cmd_pseudoweight(args, config, logger: logging.Logger) -> int:
    omega = parse_vector(args.vector)
    payload = pseudoweight_report(omega).to_dict()
    if args.matrix:
        payload["cone_member"] = cone_contains(_first_matrix(args), omega).member
    _emit_json(payload, args, config)
    return EXIT_OK


def cmd_min_pseudoweight(args, config, logger: logging.Logger) -> int:
    H = _first_matrix(args)
    guards = Guards.from_config(config['guards'])
    kinds = list(PseudoWeightKind) if args.kind == "all" else [PseudoWeightKind(args.kind)]
    payload = {
        kind.value: min_pseudoweight(H, kind, guards.max_ray_columns, config['experiments']['workers'])
        for kind in kinds
    }
    _emit_json(payload, args, config)
    return EXIT_OK


def cmd_decode_cs(args, config, logger: logging.Logger) -> int:
    H = _first_matrix(args)
    if args.vector is not None:
        s = matvec(H, parse_vector(args.vector))
    else:
        s = parse_vector(args.syndrome)
    payload = {"syndrome": [format_rational(v) for v in s], "cs_lpd": cs_lpd(H, s)}
    if args.k is not None:
        guards = Guards.from_config(config['guards'])
        try:
            payload["cs_opt"] = cs_opt(H, s, args.k, guards.cs_opt_max_columns, guards.cs_opt_max_k)
        except NoSolutionWithinK as e:
            logger.warning(str(e))
            payload["cs_opt"] = None
    _emit_json(payload, args, config)
    return EXIT_OK


def cmd_decode_cc(args, config, logger: logging.Logger) -> int:
    H = _first_matrix(args)
    guards = Guards.from_config(config['guards'])
    payload: Dict[str, Any] = {}
    if args.llr is not None:
        costs = parse_vector(args.llr)
    else:
        spec = ChannelSpec.parse(args.channel)
        out = transmit([0] * H.n, spec, _resolve_seed(args, config))
        costs = llr(out, spec)
        payload["channel"] = out.to_dict()
    payload.update({
        "llr": [format_rational(v) for v in costs],
        "cc_lpd": cc_lpd(H, costs, guards.max_row_weight),
        "cc_mld": cc_mld(H, costs, guards.max_code_dimension),
        "zero_codeword": zero_codeword_certificate(H, costs).decodes_to_zero,
    })
    _emit_json(payload, args, config)
    return EXIT_OK


def cmd_bridge_check(args, config, logger: logging.Logger) -> int:
    if args.vector is not None:
        H = _first_matrix(args)
        result = bridge_map(H, parse_vector(args.vector))
        _emit_json({
            "omega": [format_rational(v) for v in result.omega],
            "member": result.membership.member,
            "support_preserved": result.support_preserved,
        }, args, config)
        return EXIT_OK
    seed = _resolve_seed(args, config)
    cases = _load_cases(args)
    if args.random_matrices:
        cases += random_matrix_corpus(args.random_matrices, seed)
    return _run_sweep("bridge", cases, args, config, logger)


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

def _run_sweep(task: str, cases: List[MatrixCase], args, config, logger: logging.Logger) -> int:
    experiments = config['experiments']
    experiment = ExperimentConfig(
        task=task,
        cases=cases,
        trials=args.trials if args.trials is not None else experiments['trials'],
        seed=_resolve_seed(args, config),
        k=args.k if getattr(args, "k", None) is not None else 1,
        C=getattr(args, "c", None),
        Cprime=getattr(args, "cprime", None),
        norm=getattr(args, "norm", None) or "l1",
        channel=ChannelSpec.parse(args.channel) if getattr(args, "channel", None) else None,
        workers=args.workers if args.workers is not None else experiments['workers'],
        magnitude_max=experiments['magnitude_max'],
        guards=Guards.from_config(config['guards']),
    )
    rows = run_experiment(experiment)
    records = [r.to_dict(include_timing=args.timing) for r in rows]
    out_format = args.out_format or config['output']['format']
    if out_format == "json":
        text = dumps_json(records)
    else:
        text = dumps_csv(records, result_columns(records))
    write_output(text, _out_path(args, config))

    violations = total_violations(rows)
    if violations:
        logger.error(f"{task}: {violations} soundness violations")
        return EXIT_SOUNDNESS
    logger.info(f"{task}: {sum(r.trials for r in rows)} trials, no violations")
    return EXIT_OK


def cmd_sweep(args, config, logger: logging.Logger) -> int:
    return _run_sweep(args.command, _load_cases(args), args, config, logger)


COMMANDS = {
    "certify-nsp": cmd_certify_nsp,
    "nsp-implication": cmd_nsp_implication,
    "pseudoweight": cmd_pseudoweight,
    "min-pseudoweight": cmd_min_pseudoweight,
    "decode-cs": cmd_decode_cs,
    "decode-cc": cmd_decode_cc,
    "bridge-check": cmd_bridge_check,
    **{name: cmd_sweep for name in SWEEP_COMMANDS},
}


def main(argv: Optional[List[str]] = None) -> int:
    """Main application entry point; returns the process exit code."""
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise ValueError("A command is required (see --help)")

        if args.config:
            config = load_config(args.config)
        elif DEFAULT_CONFIG_PATH.exists():
            config = load_config(str(DEFAULT_CONFIG_PATH))
        else:
            config = default_config()

        # Setup logger with config settings
        logging_config = config['logging']
        logger = setup_logger(
            level=logging_config['level'],
            log_file=logging_config['file'],
            console_colors=logging_config['console_colors'],
            command=args.command
        )
        logger.debug(f"Command: {args.command}")

        return COMMANDS[args.command](args, config, logger)

    # Errors before the config is read still get the default console logger.
    except SoundnessViolation as e:
        setup_logger().error(f"Soundness violation: {e}")
        return EXIT_SOUNDNESS

    except FileNotFoundError as e:
        setup_logger().error(f"File not found: {e}")
        return EXIT_USAGE

    except (ValueError, NoSolutionWithinK) as e:
        setup_logger().error(f"Error: {e}")
        return EXIT_USAGE

    except KeyboardInterrupt:
        setup_logger().info("Received interrupt signal, shutting down...")
        return EXIT_USAGE

    except Exception as e:
        setup_logger().error(f"Unexpected error: {e}", exc_info=True)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
