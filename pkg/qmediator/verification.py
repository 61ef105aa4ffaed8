"""
Seeded self-checks run by `qmediator verify`

Each check returns the largest residual it observed; it passes when that residual is within tol.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from . import hamiltonians, linalg, testing, util
from .entanglement import analytic_concurrence, concurrence, target_state
from .explorer import OPTIMAL_RECIPE, initialization_demo
from .hamiltonians import Coupling
from .processes import (
    Direction,
    ProcessSpec,
    apply_process,
    full_space_oracle,
    kraus_operator,
    pipeline_operator,
    run_protocol,
    run_stepwise,
    unconditional_channel,
)
from .states import Spin, basis_state, fidelity_pure, random_density

logger = logging.getLogger(__name__)

NUM_DRAWS = 100
NUM_ORACLE_DRAWS = 200
# states whose |down down> population is below this are skipped by the formula checks
MIN_POPULATION = 1e-6

_ALL_SPECS = [
    ProcessSpec(direction, prepared, outcome)
    for direction in Direction
    for prepared in Spin
    for outcome in Spin
]


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    passed: bool

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name} max_residual={self.residual:.3e}"


def _kraus_completeness(rand):
    worst = 0.0
    for _ in range(NUM_DRAWS):
        params = testing.random_params(rand)
        for direction in Direction:
            for prepared in Spin:
                total = sum(
                    k.conj().T @ k
                    for k in (
                        kraus_operator(ProcessSpec(direction, prepared, o), params)
                        for o in Spin
                    )
                )
                worst = max(worst, linalg.max_norm(total - np.eye(4)))
    return worst


def _channel_trace(rand):
    worst = 0.0
    for i in range(NUM_DRAWS):
        params = testing.random_params(rand)
        rho = random_density(2, seed=rand.randint(2 ** 31))
        direction = Direction.RIGHTWARD if i % 2 else Direction.LEFTWARD
        prepared = Spin.UP if i % 4 < 2 else Spin.DOWN
        out = unconditional_channel(rho, direction, prepared, params)
        worst = max(worst, abs(np.trace(out.matrix) - 1.0))
    return worst


def _hamiltonian_commutators(rand):
    worst = 0.0
    n = hamiltonians.excitation_number()
    for _ in range(NUM_DRAWS):
        omega, g_a, g_b = rand.normal(size=3)
        h0 = hamiltonians.h_free(omega)
        h_xa = hamiltonians.h_int_xa(g_a)
        h_xb = hamiltonians.h_int_xb(g_b)
        worst = max(
            worst,
            linalg.max_norm(linalg.commutator(h0, h_xa)),
            linalg.max_norm(linalg.commutator(h0, h_xb)),
            linalg.max_norm(linalg.commutator(n, h0 + h_xa + h_xb)),
        )
    return worst


def _propagator_conservation(rand):
    worst = 0.0
    n = hamiltonians.excitation_number()
    for _ in range(NUM_DRAWS):
        params = testing.random_params(rand, omega_scale=math.pi)
        for coupling in Coupling:
            for include_free in (False, True):
                u = hamiltonians.propagator(coupling, params, include_free=include_free)
                worst = max(worst, linalg.max_norm(u @ n @ u.conj().T - n))
    return worst


def _ledger(rand):
    """
    An up->down pass adds exactly one excitation to A B, so every image lies one sector higher
    """
    worst = 0.0
    excitations = np.array([2, 1, 1, 0])
    for _ in range(NUM_DRAWS):
        params = testing.random_params(rand)
        for direction in Direction:
            k = kraus_operator(ProcessSpec(direction, Spin.UP, Spin.DOWN), params)
            for column in range(4):
                image = k[:, column]
                wrong = excitations != excitations[column] + 1
                worst = max(worst, float(np.max(np.abs(image[wrong]), initial=0.0)))
    return worst


def _kraus_closed_form(rand):
    worst = 0.0
    cases = [
        (ProcessSpec(Direction.RIGHTWARD, Spin.UP, Spin.DOWN), testing.closed_form_r_plus),
        (ProcessSpec(Direction.LEFTWARD, Spin.UP, Spin.DOWN), testing.closed_form_l_plus),
        (ProcessSpec(Direction.RIGHTWARD, Spin.DOWN, Spin.UP), testing.closed_form_r_minus),
    ]
    for _ in range(NUM_ORACLE_DRAWS):
        params = testing.random_params(rand)
        for spec, closed_form in cases:
            worst = max(
                worst, linalg.max_norm(kraus_operator(spec, params) - closed_form(params))
            )
    return worst


def _pipeline_closed_form(rand):
    worst = 0.0
    for _ in range(NUM_ORACLE_DRAWS):
        params = testing.random_params(rand)
        v = pipeline_operator(OPTIMAL_RECIPE, params)
        worst = max(worst, linalg.max_norm(v - testing.closed_form_pipeline(params)))
    return worst


def _oracle_equivalence(rand):
    worst = 0.0
    for i in range(NUM_ORACLE_DRAWS):
        params = testing.random_params(rand, omega_scale=math.pi)
        spec = _ALL_SPECS[i % len(_ALL_SPECS)]
        rho = random_density(2, seed=rand.randint(2 ** 31))
        include_free = bool(i % 2)
        state, p = apply_process(rho, spec, params, include_free=include_free)
        oracle_state, oracle_p = full_space_oracle(
            rho, spec, params, include_free=include_free
        )
        worst = max(
            worst,
            abs(p - oracle_p),
            linalg.max_norm(state.matrix - oracle_state.matrix),
        )
    return worst


def _free_evolution_invariance(rand):
    worst = 0.0
    for i in range(NUM_DRAWS):
        params = testing.random_params(rand, omega_scale=math.pi)
        spec = _ALL_SPECS[i % len(_ALL_SPECS)]
        rho = random_density(2, seed=rand.randint(2 ** 31))
        state, p = apply_process(rho, spec, params)
        free_state, free_p = apply_process(rho, spec, params, include_free=True)
        worst = max(
            worst,
            abs(p - free_p),
            abs(concurrence(state).value - concurrence(free_state).value),
        )
    return worst


def _sequential_probabilities(rand):
    worst = 0.0
    for _ in range(NUM_DRAWS):
        params = testing.random_params(rand)
        rho = random_density(2, seed=rand.randint(2 ** 31))
        final, yield_p = run_protocol(rho, OPTIMAL_RECIPE, params)
        step_final, probabilities = run_stepwise(rho, OPTIMAL_RECIPE, params)
        worst = max(
            worst,
            abs(float(np.prod(probabilities)) - yield_p),
            linalg.max_norm(final.matrix - step_final.matrix),
        )
    return worst


def _formula_draws(rand):
    while True:
        params = testing.random_params(rand)
        rho = random_density(2, seed=rand.randint(2 ** 31))
        if testing.closed_form_yield(params, rho.population(("down", "down"))) > MIN_POPULATION:
            yield params, rho


def _yield_formula(rand):
    worst = 0.0
    draws = _formula_draws(rand)
    for _ in range(NUM_DRAWS):
        params, rho = next(draws)
        _final, yield_p = run_protocol(rho, OPTIMAL_RECIPE, params)
        expected = testing.closed_form_yield(params, rho.population(("down", "down")))
        worst = max(worst, abs(yield_p - expected))
    return worst


def _concurrence_formula(rand):
    worst = 0.0
    draws = _formula_draws(rand)
    for _ in range(NUM_DRAWS):
        params, rho = next(draws)
        final, _yield_p = run_protocol(rho, OPTIMAL_RECIPE, params)
        worst = max(
            worst,
            abs(concurrence(final).value - analytic_concurrence(params)),
            1.0 - fidelity_pure(final, target_state(params)),
        )
    return worst


def _initialization(rand):
    worst = 0.0
    for _ in range(NUM_DRAWS // 2):
        rho = random_density(2, seed=rand.randint(2 ** 31))
        _state, fidelity = initialization_demo(rho)
        worst = max(worst, 1.0 - fidelity)
    return worst


CHECKS = [
    ("kraus_completeness", _kraus_completeness),
    ("channel_trace", _channel_trace),
    ("hamiltonian_commutators", _hamiltonian_commutators),
    ("excitation_conservation", _propagator_conservation),
    ("ledger", _ledger),
    ("kraus_closed_form", _kraus_closed_form),
    ("pipeline_closed_form", _pipeline_closed_form),
    ("oracle_equivalence", _oracle_equivalence),
    ("free_evolution_invariance", _free_evolution_invariance),
    ("sequential_probabilities", _sequential_probabilities),
    ("yield_formula", _yield_formula),
    ("concurrence_formula", _concurrence_formula),
    ("initialization", _initialization),
]


def run_checks(seed=0, tol=linalg.TOL):
    """
    Run every check with its own RandomState derived from seed
    """
    util.check_seed(seed, span=len(CHECKS))
    results = []
    for i, (name, check) in enumerate(CHECKS):
        rand = np.random.RandomState(seed=seed + i)
        residual = float(check(rand))
        result = CheckResult(name=name, residual=residual, passed=residual <= tol)
        logger.info(result.line())
        results.append(result)
    return results
