"""
Compare the interaction-order recipes over (theta_a, theta_b) grids

A sweep applies each recipe's pipeline operator to |down down>, so the recorded yield is the
success probability per unit <down down|rho|down down> of the input state.
"""

import csv
import io
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import util
from .entanglement import wootters
from .errors import InvalidInputError
from .hamiltonians import Coupling, CouplingParams, propagator
from .processes import (
    EPSILON_P,
    Direction,
    ProcessSpec,
    Recipe,
    kraus_from_propagators,
    pipeline_from_kraus,
    transfer_channel,
)
from .states import Spin, basis_index, basis_state, fidelity_pure

logger = logging.getLogger(__name__)

CONCURRENCE_FLOOR = 1 - 1e-6
SIMULTANEOUS_TOL = 1e-9
TIE_TOL = 1e-12
CSV_HEADER = ("theta_a", "theta_b", "concurrence", "normalized_yield")

_DOWN_DOWN = basis_index(("down", "down"))

FINAL_PROCESS = ProcessSpec(Direction.RIGHTWARD, Spin.DOWN, Spin.UP)


def _recipe(first, second):
    return Recipe(
        processes=(
            ProcessSpec(first, Spin.UP, Spin.DOWN),
            ProcessSpec(second, Spin.UP, Spin.DOWN),
            FINAL_PROCESS,
        )
    )


OPTIMAL_RECIPE = _recipe(Direction.RIGHTWARD, Direction.LEFTWARD)
# names used for the optimal recipe in earlier reports and scripts
RECIPE_ALIASES = {"fig2": OPTIMAL_RECIPE.name}


def enumerate_recipes():
    """
    The four orderings: first and second passes rightward or leftward, the last pass fixed
    """
    return [
        _recipe(first, second)
        for first in (Direction.RIGHTWARD, Direction.LEFTWARD)
        for second in (Direction.RIGHTWARD, Direction.LEFTWARD)
    ]


def recipe_by_name(name):
    """
    Look up an enumerated recipe by its direction code, e.g. "rlr", or an alias
    """
    recipes = {r.name: r for r in enumerate_recipes()}
    key = str(name).strip().lower()
    try:
        return recipes[RECIPE_ALIASES.get(key, key)]
    except KeyError:
        raise InvalidInputError(
            f"unknown recipe {name!r}, expected one of {sorted(recipes)}"
        ) from None


@dataclass(frozen=True)
class AxisSpec:
    start: float
    stop: float
    step: float

    def __post_init__(self):
        # validates the range
        util.axis_size(self.start, self.stop, self.step)

    def points(self):
        n = util.axis_size(self.start, self.stop, self.step)
        return [self.start + k * self.step for k in range(n)]

    @classmethod
    def parse(cls, text):
        """
        Parse "START:STOP:STEP" (angles may use the "pi" suffix) or a single angle
        """
        parts = str(text).split(":")
        if len(parts) == 1:
            value = util.parse_angle(parts[0])
            return cls(start=value, stop=value, step=1.0)
        if len(parts) != 3:
            raise InvalidInputError(f"grid axis must be START:STOP:STEP, got {text!r}")
        start, stop, step = (util.parse_angle(p) for p in parts)
        return cls(start=start, stop=stop, step=step)


# theta = k pi / 200 for k = 1..199, keeps pi/4 and pi/2 on the grid
DEFAULT_AXIS = AxisSpec(start=math.pi / 200, stop=199 * math.pi / 200, step=math.pi / 200)


@dataclass(frozen=True)
class GridSpec:
    theta_a: AxisSpec = DEFAULT_AXIS
    theta_b: AxisSpec = DEFAULT_AXIS

    @classmethod
    def parse(cls, text):
        """
        "AXIS" for both angles or "AXIS_A,AXIS_B"
        """
        parts = str(text).split(",")
        if len(parts) == 1:
            axis = AxisSpec.parse(parts[0])
            return cls(theta_a=axis, theta_b=axis)
        if len(parts) != 2:
            raise InvalidInputError(f"grid must be AXIS or AXIS_A,AXIS_B, got {text!r}")
        return cls(theta_a=AxisSpec.parse(parts[0]), theta_b=AxisSpec.parse(parts[1]))


@dataclass(frozen=True)
class SweepRecord:
    theta_a: float
    theta_b: float
    # None where the pipeline annihilates |down down>
    concurrence: Optional[float]
    normalized_yield: float


@dataclass(frozen=True)
class SweepResult:
    grid: Tuple[SweepRecord, ...]
    recipe: Recipe

    def write_csv(self, f):
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in self.grid:
            writer.writerow(
                [
                    repr(r.theta_a),
                    repr(r.theta_b),
                    "" if r.concurrence is None else repr(r.concurrence),
                    repr(r.normalized_yield),
                ]
            )

    def to_csv(self):
        f = io.StringIO()
        self.write_csv(f)
        return f.getvalue()

    def to_json(self):
        return {
            "recipe": self.recipe.to_json(),
            "records": [
                {
                    "theta_a": r.theta_a,
                    "theta_b": r.theta_b,
                    "concurrence": r.concurrence,
                    "normalized_yield": r.normalized_yield,
                }
                for r in self.grid
            ],
        }


@dataclass(frozen=True)
class OptimumReport:
    recipe: Recipe
    best_point: Tuple[float, float]
    concurrence_at_best: Optional[float]
    normalized_yield_at_best: float
    simultaneous_max: bool
    note: str = ""

    def to_json(self):
        return {
            "recipe": self.recipe.name,
            "processes": self.recipe.to_json(),
            "best_point": {"theta_a": self.best_point[0], "theta_b": self.best_point[1]},
            "concurrence_at_best": self.concurrence_at_best,
            "normalized_yield_at_best": self.normalized_yield_at_best,
            "simultaneous_max": self.simultaneous_max,
            "note": self.note,
        }


def evaluate_point(recipe, u_xa, u_xb, theta_a, theta_b, epsilon_p=EPSILON_P):
    v = pipeline_from_kraus(
        [kraus_from_propagators(spec, u_xa, u_xb) for spec in recipe.processes]
    )
    out = v[:, _DOWN_DOWN]
    yield_p = float(np.real(np.vdot(out, out)))
    if yield_p <= epsilon_p:
        return SweepRecord(theta_a, theta_b, concurrence=None, normalized_yield=0.0)
    rho = np.outer(out, out.conj()) / yield_p
    return SweepRecord(
        theta_a,
        theta_b,
        concurrence=wootters(rho).value,
        normalized_yield=min(1.0, yield_p),
    )


def sweep(recipe, grid_spec=None, workers=None, epsilon_p=EPSILON_P):
    """
    Concurrence and normalized yield of a recipe at every grid point, theta_a is the outer (row) index

    With workers > 1 rows are evaluated on a thread pool; the output order does not depend on it.
    """
    if grid_spec is None:
        grid_spec = GridSpec()
    thetas_a = grid_spec.theta_a.points()
    thetas_b = grid_spec.theta_b.points()
    logger.info(
        "sweeping recipe %s over %d x %d grid", recipe.name, len(thetas_a), len(thetas_b)
    )

    # each propagator depends on a single angle, compute them once per axis value
    u_xb = [propagator(Coupling.XB, CouplingParams(0.0, t)) for t in thetas_b]

    def row(theta_a):
        u_xa = propagator(Coupling.XA, CouplingParams(theta_a, 0.0))
        return [
            evaluate_point(recipe, u_xa, u, theta_a, theta_b, epsilon_p=epsilon_p)
            for theta_b, u in zip(thetas_b, u_xb)
        ]

    if workers is not None and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            rows = list(executor.map(row, thetas_a))
    else:
        rows = [row(t) for t in thetas_a]
    grid = tuple(r for rs in rows for r in rs)
    assert len(grid) == len(thetas_a) * len(thetas_b)
    return SweepResult(grid=grid, recipe=recipe)


def _best(records, key):
    """
    Record maximizing key, ties within TIE_TOL go to the smallest (theta_a, theta_b)
    """
    best_value = max(key(r) for r in records)
    ties = [r for r in records if key(r) >= best_value - TIE_TOL]
    return min(ties, key=lambda r: (r.theta_a, r.theta_b))


def find_optimum(result, concurrence_floor=CONCURRENCE_FLOOR, tol=SIMULTANEOUS_TOL):
    """
    Highest-yield grid point among those with concurrence >= concurrence_floor

    If no point reaches the floor, the point maximizing concurrence * yield is reported instead
    and simultaneous_max is False.
    """
    if not result.grid:
        raise InvalidInputError("cannot search an empty grid")
    candidates = [
        r
        for r in result.grid
        if r.concurrence is not None and r.concurrence >= concurrence_floor
    ]
    if candidates:
        best = _best(candidates, key=lambda r: r.normalized_yield)
        simultaneous = best.concurrence >= 1 - tol and best.normalized_yield >= 1 - tol
        note = "" if simultaneous else "maximum concurrence and maximum yield not reached together on this grid"
    else:
        logger.warning(
            "recipe %s: no grid point reaches concurrence %.9g", result.recipe.name, concurrence_floor
        )
        best = _best(result.grid, key=lambda r: (r.concurrence or 0.0) * r.normalized_yield)
        simultaneous = False
        note = f"no grid point reaches concurrence {concurrence_floor!r}, reporting the best concurrence * yield"
    return OptimumReport(
        recipe=result.recipe,
        best_point=(best.theta_a, best.theta_b),
        concurrence_at_best=best.concurrence,
        normalized_yield_at_best=best.normalized_yield,
        simultaneous_max=simultaneous,
        note=note,
    )


def initialization_demo(rho, params=None):
    """
    Drive any state to |up up> with two transfer passes of a mediator prepared in |up>

    A transfer angle of pi/2 (the default for both qubits) swaps the mediator's excitation onto
    the qubit.  Returns the final state and its fidelity to |up up>.
    """
    if params is None:
        params = CouplingParams(theta_a=math.pi / 2, theta_b=math.pi / 2)
    state = transfer_channel(rho, Coupling.XA, params, prepared=Spin.UP)
    state = transfer_channel(state, Coupling.XB, params, prepared=Spin.UP)
    return state, fidelity_pure(state, basis_state(("up", "up")))
