"""
Command-line front end of blowuplab.

Every command validates its inputs, dispatches to the library and writes a
machine-readable result: JSON reports and CSV trajectories. Configuration is
resolved as ``DEFAULT_CONFIG < BLOWUPLAB_SEED < --config file < flags``.

Exit codes: 0 success, 1 failed verification, 2 usage or domain error,
3 numerical failure.
"""

import argparse
import json
import math
import os
import sys

from typing import Any, Dict, Optional, Sequence, Tuple

from blowuplab import __version__, settings
from blowuplab.core.weights import check_point, check_repetition, lagrange_weights
from blowuplab.evaluator import get_evaluator
from blowuplab.manager.suite_manager import SuiteManager
from blowuplab.ode.blowup import blowup_report, integrate
from blowuplab.utils.configs import (
    DefaultConfigFormatter,
    load_config_file,
    update_config,
    update_configs,
)
from blowuplab.utils.errors import (
    ConsistencyViolation,
    DomainError,
    InvalidConfig,
    NumericalFailure,
)
from blowuplab.utils.io_wrapper import get_io_wrapper
from blowuplab.utils.logger import Log, get_logger
from blowuplab.utils.typing import (
    CauchyProblem,
    IntegratorOptions,
    RepetitionSpec,
    SuiteConfig,
)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

SUITES = ("gen", "blowup", "crossroute", "repetition")

logger = get_logger(name="blowuplab.cli")


# ----------------------------- flag parsing -----------------------------


def _float_list(text: str) -> Tuple[float, ...]:
    try:
        values = tuple(float(v) for v in str(text).split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected a comma separated list of reals, got {text!r}"
        )
    if not values:
        raise argparse.ArgumentTypeError("expected at least one value")
    return values


def _int_list(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(v) for v in str(text).split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected a comma separated list of integers, got {text!r}"
        )


def _n_range(value: Any) -> Tuple[int, int]:
    """Parse ``lo..hi``, a single ``n`` or a two-element list."""

    try:
        if isinstance(value, (list, tuple)):
            lo, hi = (int(v) for v in value)
        elif ".." in str(value):
            lo, hi = (int(v) for v in str(value).split(".."))
        else:
            lo = hi = int(value)
    except (TypeError, ValueError):
        raise argparse.ArgumentTypeError(f"expected lo..hi, got {value!r}")
    return lo, hi


def _as_floats(value: Any, name: str) -> Tuple[float, ...]:
    if value is None:
        raise InvalidConfig(f"--{name} is required")
    if isinstance(value, (int, float)):
        return (float(value),)
    if isinstance(value, str):
        try:
            return _float_list(value)
        except argparse.ArgumentTypeError as e:
            raise InvalidConfig(str(e)) from e
    return tuple(float(v) for v in value)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blowuplab",
        description="Weights, blow-up times and verification suites for the "
        "multivariate generalization of 1 + x <= e^x.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True

    def command(name: str, help: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help)
        sub.add_argument("--config", help="JSON or YAML file with command parameters")
        sub.add_argument("--out", help="output file, stdout when omitted")
        return sub

    sub = command("weights", "print the weights a_i and their sum")
    sub.add_argument("--x", type=_float_list, help="comma separated point, e.g. 1,2,3")

    sub = command("check", "classify a point of the inequality")
    sub.add_argument("--x", type=_float_list, help="comma separated point")
    sub.add_argument(
        "--r", type=_int_list, help="multiplicities of the repeated nodes j*x_i"
    )

    sub = command(
        "blowup", "blow-up time, bound and numeric estimate of a Cauchy problem"
    )
    sub.add_argument(
        "--k", type=_float_list, help="carrying capacities k_1 < ... < k_n"
    )
    sub.add_argument("--y0", type=float)

    sub = command("simulate", "integrate a Cauchy problem into a t,y CSV")
    sub.add_argument("--k", type=_float_list)
    sub.add_argument("--y0", type=float)
    sub.add_argument("--direction", choices=("forward", "backward"))
    sub.add_argument("--horizon", type=float)
    sub.add_argument("--rtol", type=float)
    sub.add_argument("--atol", type=float)

    sub = command("verify", "run a verification suite and write its JSON report")
    sub.add_argument("suite", choices=SUITES)
    sub.add_argument("--n", dest="n_range", type=_n_range, help="dimensions, lo..hi")
    sub.add_argument("--samples", "--cases", dest="samples", type=int)
    sub.add_argument("--seed", type=int, help=f"defaults to ${settings.SEED_ENV_VAR}")
    sub.add_argument("--x-max", dest="x_max", type=float)
    sub.add_argument(
        "--equality",
        dest="include_equality_cases",
        action="store_const",
        const=True,
        help="add a zero-coordinate copy of every valid sample",
    )
    sub.add_argument(
        "--extended",
        dest="include_extended_domain",
        action="store_const",
        const=True,
        help="also probe the mixed-sign region (exploratory)",
    )
    sub.add_argument("--max-total-r", dest="max_total_r", type=int)
    sub.add_argument("--workers", type=int)
    return parser


# ----------------------------- configuration -----------------------------


def resolve_config(command: str, args: argparse.Namespace) -> Dict[str, Any]:
    """Merge defaults, the seed variable, the config file and the flags."""

    overrides: Dict[str, Any] = {}
    if "seed" in settings.DEFAULT_CONFIG[command] and os.environ.get(
        settings.SEED_ENV_VAR
    ):
        try:
            overrides["seed"] = int(os.environ[settings.SEED_ENV_VAR])
        except ValueError:
            raise InvalidConfig(
                f"{settings.SEED_ENV_VAR} must be an integer, "
                f"got {os.environ[settings.SEED_ENV_VAR]!r}"
            )
    # a deep copy of the defaults with the seed variable applied
    config = update_configs({command: overrides})[command]

    try:
        if args.config:
            records = load_config_file(args.config)
            # either one section per command or the bare parameters
            section = records.get(command)
            config = update_config(
                config, section if isinstance(section, dict) else records
            )
        flags = {k: v for k, v in vars(args).items() if k in config and v is not None}
        config = update_config(config, flags)
    except KeyError as e:
        raise InvalidConfig(f"invalid {command} config: {e.args[0]}") from e

    effective = DefaultConfigFormatter.parse({"command": command, **config})
    logger.info(f"effective config: {effective}")
    return config


def _json_float(v: Optional[float]) -> Any:
    if v is None or math.isfinite(v):
        return v
    return repr(float(v))


def _dumps(payload: Dict[str, Any]) -> str:
    payload["schema_version"] = settings.SCHEMA_VERSION
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


# ----------------------------- commands -----------------------------


def cmd_weights(config: Dict[str, Any], out: Optional[str]) -> int:
    a = lagrange_weights(_as_floats(config["x"], "x"))
    payload = {"weights": a.tolist(), "sum": math.fsum(a)}
    get_io_wrapper(out).write(_dumps(payload))
    return EXIT_OK


def cmd_check(config: Dict[str, Any], out: Optional[str]) -> int:
    x = _as_floats(config["x"], "x")
    if config.get("r") is not None:
        r = tuple(int(v) for v in config["r"])
        check = check_repetition(RepetitionSpec(x, r))
    else:
        check = check_point(x)
    payload = {
        "class": check.point_class.value,
        "lhs_exponent": _json_float(check.lhs_exponent),
        "rhs_exponent": _json_float(check.rhs_exponent),
        "lhs": _json_float(check.lhs),
        "rhs": _json_float(check.rhs),
        "gap": _json_float(check.gap),
    }
    get_io_wrapper(out).write(_dumps(payload))
    return EXIT_OK


def _problem(config: Dict[str, Any]) -> CauchyProblem:
    if config["y0"] is None:
        raise InvalidConfig("--y0 is required")
    return CauchyProblem(_as_floats(config["k"], "k"), float(config["y0"]))


def cmd_blowup(config: Dict[str, Any], out: Optional[str]) -> int:
    p = _problem(config)
    report = blowup_report(p)
    payload = {"k": list(p.k), "y0": p.y0, **report.to_dict()}
    get_io_wrapper(out).write(_dumps(payload))
    return EXIT_OK


def cmd_simulate(config: Dict[str, Any], out: Optional[str]) -> int:
    p = _problem(config)
    opts = IntegratorOptions(rtol=float(config["rtol"]), atol=float(config["atol"]))
    trajectory = integrate(p, config["direction"], float(config["horizon"]), opts)
    get_io_wrapper(out).write(trajectory)
    if out:
        summary = {
            "out": out,
            "samples": len(trajectory),
            "terminal_status": trajectory.terminal_status.value,
            "terminal_time": trajectory.terminal_time,
            "terminal_value": _json_float(trajectory.terminal_value),
        }
        get_io_wrapper().write(_dumps(summary))
    return EXIT_OK


def cmd_verify(suite: str, config: Dict[str, Any], out: Optional[str]) -> int:
    cfg = SuiteConfig(
        n_range=_n_range(config["n_range"]),
        samples=int(config["samples"]),
        seed=int(config["seed"]),
        x_max=float(config["x_max"]),
        include_equality_cases=bool(config["include_equality_cases"]),
        include_extended_domain=bool(config["include_extended_domain"]),
        max_total_r=int(config["max_total_r"]),
    )
    evaluator = get_evaluator(suite)(cfg)
    with Log.timer(log=settings.PROFILING, logger=logger, tag=f"verify {suite}"):
        report = SuiteManager(config["workers"]).run(evaluator)
    get_io_wrapper(out).write(report)
    if not report.passed:
        logger.warning(f"verify {suite} failed, seed={cfg.seed}")
        return EXIT_FAILED
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        config = resolve_config(args.command, args)
        if args.command == "weights":
            return cmd_weights(config, args.out)
        elif args.command == "check":
            return cmd_check(config, args.out)
        elif args.command == "blowup":
            return cmd_blowup(config, args.out)
        elif args.command == "simulate":
            return cmd_simulate(config, args.out)
        else:
            return cmd_verify(args.suite, config, args.out)
    except ConsistencyViolation as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAILED
    except DomainError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalFailure as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
