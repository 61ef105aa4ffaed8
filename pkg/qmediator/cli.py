"""
Command line interface

    qmediator simulate  --recipe rlr --theta-a-pi 0.25 --theta-b-pi 0.5 --state maximally-mixed
    qmediator sweep     --recipe rlr --grid 0.005pi:0.995pi:0.005pi --out sweep.csv
    qmediator recipes   --format json
    qmediator verify    --seed 0
    qmediator init-demo --state random:7

Exit codes: 0 success, 1 usage/input error, 2 impossible outcome, 3 verification failure.
"""

import argparse
import csv
import io
import logging
import math
import os
import sys
from dataclasses import dataclass
from typing import Optional

from . import enc, linalg
from .entanglement import concurrence, target_state
from .errors import DegenerateStateError, ImpossibleOutcomeError, InvalidInputError
from .explorer import (
    OPTIMAL_RECIPE,
    GridSpec,
    enumerate_recipes,
    find_optimum,
    initialization_demo,
    recipe_by_name,
    sweep,
)
from .hamiltonians import CouplingParams
from .processes import Recipe, run_protocol, run_stepwise
from .states import (
    basis_state,
    density_from_json,
    fidelity_pure,
    maximally_mixed,
    random_density,
)
from .util import parse_angle, parse_seed
from .verification import run_checks

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_IMPOSSIBLE = 2
EXIT_VERIFY = 3

COMMANDS = ("simulate", "sweep", "recipes", "verify", "init-demo")
FORMATS = ("csv", "json")
DEFAULT_RECIPE = "rlr"
RECIPES_CSV_HEADER = (
    "recipe",
    "theta_a",
    "theta_b",
    "concurrence",
    "normalized_yield",
    "simultaneous_max",
    "note",
)

# optimal extraction point and the angle that transfers the mediator's excitation
_SIMULATE_THETAS = (math.pi / 4, math.pi / 2)
_INIT_THETAS = (math.pi / 2, math.pi / 2)


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise InvalidInputError(message)


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: CouplingParams
    recipe: Recipe
    state: str
    out: Optional[str]
    format: str
    grid_spec: Optional[GridSpec]
    seed: int
    tol: float
    include_free: bool
    workers: Optional[int]


def build_parser():
    common = _ArgumentParser(add_help=False)
    common.add_argument(
        "--recipe",
        default=DEFAULT_RECIPE,
        help="enumerated recipe name (rlr, rrr, lrr, llr) or path to a recipe json file",
    )
    theta_a = common.add_mutually_exclusive_group()
    theta_a.add_argument("--theta-a", type=parse_angle, help="g_A tau_A in radians")
    theta_a.add_argument("--theta-a-pi", type=float, help="g_A tau_A in units of pi")
    theta_b = common.add_mutually_exclusive_group()
    theta_b.add_argument("--theta-b", type=parse_angle, help="g_B tau_B in radians")
    theta_b.add_argument("--theta-b-pi", type=float, help="g_B tau_B in units of pi")
    common.add_argument(
        "--state",
        default=None,
        help="maximally-mixed, basis:<labels> (e.g. basis:dd), random:<seed> or a json file",
    )
    common.add_argument(
        "--grid",
        default=None,
        help="START:STOP:STEP for both angles or AXIS_A,AXIS_B; values accept a pi suffix",
    )
    common.add_argument("--out", default=None, help="output path, stdout if omitted")
    common.add_argument("--format", choices=FORMATS, default=None)
    common.add_argument("--seed", type=parse_seed, default=0)
    common.add_argument("--tol", type=float, default=linalg.TOL)
    common.add_argument(
        "--include-free",
        action="store_true",
        help="evolve with the free Hamiltonian instead of in the interaction picture",
    )
    common.add_argument("--omega-t", type=parse_angle, default=0.0)
    common.add_argument("--workers", type=int, default=None)
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = _ArgumentParser(prog="qmediator", description=__doc__.splitlines()[1])
    subparsers = parser.add_subparsers(dest="command")
    for command in COMMANDS:
        subparsers.add_parser(command, parents=[common])
    return parser


def _theta(radians, units_of_pi, default):
    if radians is not None:
        return radians
    if units_of_pi is not None:
        return units_of_pi * math.pi
    return default


def _load_recipe(text):
    """
    A built-in recipe name, otherwise a path to a recipe json file
    """
    try:
        return recipe_by_name(text)
    except InvalidInputError:
        if not os.path.exists(text):
            raise
    return Recipe.from_json(enc.load_json_file(text))


def load_state(text):
    """
    Parse a --state value into a two-qubit DensityMatrix
    """
    if text is None or text == "maximally-mixed":
        return maximally_mixed(2)
    if text.startswith("basis:"):
        labels = text[len("basis:") :]
        labels = labels.split(",") if "," in labels else list(labels)
        if len(labels) != 2:
            raise InvalidInputError(f"basis state needs two labels, got {text!r}")
        return basis_state(labels).density()
    if text.startswith("random:"):
        return random_density(2, seed=parse_seed(text[len("random:") :]))
    if os.path.exists(text):
        data = enc.load_json_file(text)
        if isinstance(data, dict):
            data = data.get("final_state", data.get("matrix"))
        rho = density_from_json(data)
        if rho.num_qubits != 2:
            raise InvalidInputError(f"{text} holds a {rho.num_qubits}-qubit state, expected 2")
        return rho
    raise InvalidInputError(f"unrecognized state {text!r}")


def make_config(args):
    if args.command is None:
        raise InvalidInputError(f"a command is required, one of {', '.join(COMMANDS)}")
    defaults = _INIT_THETAS if args.command == "init-demo" else _SIMULATE_THETAS
    params = CouplingParams(
        theta_a=_theta(args.theta_a, args.theta_a_pi, defaults[0]),
        theta_b=_theta(args.theta_b, args.theta_b_pi, defaults[1]),
        omega_t=args.omega_t,
    )
    if args.format is None:
        fmt = "csv" if args.command == "sweep" else "json"
    else:
        fmt = args.format
    if args.workers is not None and args.workers < 1:
        raise InvalidInputError(f"--workers must be positive, got {args.workers}")
    return RunConfig(
        command=args.command,
        params=params,
        recipe=_load_recipe(args.recipe),
        state=args.state,
        out=args.out,
        format=fmt,
        grid_spec=None if args.grid is None else GridSpec.parse(args.grid),
        seed=args.seed,
        tol=args.tol,
        include_free=args.include_free,
        workers=args.workers,
    )


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        with open(out, "w", encoding="utf8", newline="") as f:
            f.write(text)
    except OSError as e:
        raise InvalidInputError(f"cannot write {out}: {e}") from e


def _params_json(config):
    return {
        "theta_a": config.params.theta_a,
        "theta_b": config.params.theta_b,
        "omega_t": config.params.omega_t,
        "include_free": config.include_free,
    }


def _report(command, **fields):
    report = {"schema_version": SCHEMA_VERSION, "command": command}
    report.update(fields)
    return enc.encode_json(report) + "\n"


def cmd_simulate(config):
    rho = load_state(config.state)
    try:
        final, yield_p = run_protocol(
            rho, config.recipe, config.params, include_free=config.include_free
        )
    except ImpossibleOutcomeError as e:
        logger.warning("recipe %s: %s", config.recipe.name, e)
        _emit(
            _report(
                "simulate",
                recipe=config.recipe,
                params=_params_json(config),
                error="impossible-outcome",
                probability=e.probability,
            ),
            config.out,
        )
        return EXIT_IMPOSSIBLE
    _final, pass_probabilities = run_stepwise(
        rho, config.recipe, config.params, include_free=config.include_free
    )
    result = concurrence(final)
    fidelity = None
    # the closed-form target only describes the optimal recipe
    if config.recipe == OPTIMAL_RECIPE:
        try:
            fidelity = fidelity_pure(final, target_state(config.params))
        except DegenerateStateError:
            pass
    _emit(
        _report(
            "simulate",
            recipe=config.recipe,
            params=_params_json(config),
            initial_population_down_down=rho.population(("down", "down")),
            pass_probabilities=pass_probabilities,
            **{"yield": yield_p},
            concurrence=result.value,
            wootters_lambdas=list(result.wootters_lambdas),
            fidelity_to_target=fidelity,
            final_state=final,
        ),
        config.out,
    )
    return EXIT_OK


def cmd_sweep(config):
    result = sweep(config.recipe, config.grid_spec, workers=config.workers)
    if config.format == "csv":
        text = result.to_csv()
    else:
        text = _report("sweep", **result.to_json())
    _emit(text, config.out)
    return EXIT_OK


def cmd_recipes(config):
    reports = []
    for recipe in enumerate_recipes():
        report = find_optimum(sweep(recipe, config.grid_spec, workers=config.workers))
        logger.info(
            "%s: best (%.6f, %.6f) C=%s P=%.9f simultaneous=%s",
            recipe.name,
            report.best_point[0],
            report.best_point[1],
            report.concurrence_at_best,
            report.normalized_yield_at_best,
            report.simultaneous_max,
        )
        reports.append(report)
    if config.format == "csv":
        f = io.StringIO()
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(RECIPES_CSV_HEADER)
        for r in reports:
            writer.writerow(
                [
                    r.recipe.name,
                    repr(r.best_point[0]),
                    repr(r.best_point[1]),
                    "" if r.concurrence_at_best is None else repr(r.concurrence_at_best),
                    repr(r.normalized_yield_at_best),
                    str(r.simultaneous_max).lower(),
                    r.note,
                ]
            )
        text = f.getvalue()
    else:
        text = _report(
            "recipes",
            recipes=reports,
            optimal=[r.recipe.name for r in reports if r.simultaneous_max],
        )
    _emit(text, config.out)
    return EXIT_OK


def cmd_verify(config):
    results = run_checks(seed=config.seed, tol=config.tol)
    passed = sum(r.passed for r in results)
    lines = [r.line() for r in results]
    lines.append(f"{passed}/{len(results)} checks passed (tol={config.tol:.1e}, seed={config.seed})")
    _emit("\n".join(lines) + "\n", config.out)
    return EXIT_OK if passed == len(results) else EXIT_VERIFY


def cmd_init_demo(config):
    state_text = config.state if config.state is not None else f"random:{config.seed}"
    rho = load_state(state_text)
    final, fidelity = initialization_demo(rho, config.params)
    _emit(
        _report(
            "init-demo",
            params=_params_json(config),
            fidelity_to_up_up=fidelity,
            final_state=final,
        ),
        config.out,
    )
    return EXIT_OK


_HANDLERS = {
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "recipes": cmd_recipes,
    "verify": cmd_verify,
    "init-demo": cmd_init_demo,
}


def _configure_logging(verbosity):
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(
        level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr
    )


def main(argv=None):
    """
    Run the command line, returning the exit code
    """
    try:
        args = build_parser().parse_args(argv)
        _configure_logging(getattr(args, "verbose", 0))
        config = make_config(args)
        return _HANDLERS[config.command](config)
    except InvalidInputError as e:
        sys.stderr.write(f"qmediator: error: {e}\n")
        return EXIT_INPUT
    except ImpossibleOutcomeError as e:
        sys.stderr.write(f"qmediator: {e}\n")
        return EXIT_IMPOSSIBLE


def run():
    sys.exit(main())
