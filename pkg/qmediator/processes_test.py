import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from . import linalg, testing
from .entanglement import concurrence
from .errors import ImpossibleOutcomeError, InvalidInputError
from .explorer import OPTIMAL_RECIPE, enumerate_recipes
from .hamiltonians import Coupling, CouplingParams
from .processes import (
    Direction,
    ProcessSpec,
    Recipe,
    apply_process,
    condition,
    full_space_oracle,
    kraus_operator,
    pass_unitary,
    pipeline_operator,
    run_protocol,
    run_stepwise,
    transfer_channel,
    unconditional_channel,
)
from .states import (
    PureState,
    Spin,
    basis_state,
    fidelity_pure,
    maximally_mixed,
    random_density,
)

ANGLES = st.floats(min_value=-math.pi, max_value=math.pi)
SEEDS = st.integers(min_value=0, max_value=2 ** 31 - 1)

ALL_SPECS = [
    ProcessSpec(direction, prepared, outcome)
    for direction in Direction
    for prepared in Spin
    for outcome in Spin
]


def test_process_spec_parsing():
    spec = ProcessSpec("r", "u", "d")
    assert spec == ProcessSpec(Direction.RIGHTWARD, Spin.UP, Spin.DOWN)
    assert str(spec) == "R(up->down)"
    assert ProcessSpec.from_json(spec.to_json()) == spec
    with pytest.raises(InvalidInputError):
        ProcessSpec("up", "u", "d")
    with pytest.raises(InvalidInputError):
        ProcessSpec.from_json({"direction": "r", "prepared": "u"})


def test_recipe():
    assert OPTIMAL_RECIPE.name == "rlr"
    assert str(OPTIMAL_RECIPE) == "R(up->down) L(up->down) R(down->up)"
    assert Recipe.from_json(OPTIMAL_RECIPE.to_json()) == OPTIMAL_RECIPE
    with pytest.raises(InvalidInputError):
        Recipe(processes=OPTIMAL_RECIPE.processes[:2])
    with pytest.raises(InvalidInputError):
        Recipe.from_json({"processes": []})


def test_pass_unitary_order():
    params = CouplingParams(0.3, 1.1)
    u_xa = pass_unitary(Direction.RIGHTWARD, CouplingParams(0.3, 0.0))
    u_xb = pass_unitary(Direction.RIGHTWARD, CouplingParams(0.0, 1.1))
    assert np.allclose(pass_unitary(Direction.RIGHTWARD, params), u_xb @ u_xa)
    assert np.allclose(pass_unitary(Direction.LEFTWARD, params), u_xa @ u_xb)
    assert not np.allclose(u_xb @ u_xa, u_xa @ u_xb)


@settings(deadline=None, max_examples=50)
@given(theta_a=ANGLES, theta_b=ANGLES)
def test_kraus_closed_forms(theta_a, theta_b):
    params = CouplingParams(theta_a, theta_b)
    cases = [
        (ProcessSpec("r", "u", "d"), testing.closed_form_r_plus),
        (ProcessSpec("l", "u", "d"), testing.closed_form_l_plus),
        (ProcessSpec("r", "d", "u"), testing.closed_form_r_minus),
    ]
    for spec, closed_form in cases:
        assert linalg.max_norm(kraus_operator(spec, params) - closed_form(params)) < 1e-12


@settings(deadline=None, max_examples=50)
@given(theta_a=ANGLES, theta_b=ANGLES, omega_t=ANGLES, include_free=st.booleans())
def test_kraus_completeness(theta_a, theta_b, omega_t, include_free):
    params = CouplingParams(theta_a, theta_b, omega_t)
    for direction in Direction:
        for prepared in Spin:
            total = sum(
                k.conj().T @ k
                for k in (
                    kraus_operator(ProcessSpec(direction, prepared, outcome), params, include_free)
                    for outcome in Spin
                )
            )
            assert linalg.max_norm(total - np.eye(4)) < 1e-10


def test_excitation_ledger():
    # up spins on A B: |uu>=2, |ud>=|du>=1, |dd>=0
    excitations = np.array([2, 1, 1, 0])
    params = CouplingParams(0.7, -1.9)
    for spec in ALL_SPECS:
        k = kraus_operator(spec, params)
        shift = spec.outcome.index - spec.prepared.index
        for column in range(4):
            wrong = excitations != excitations[column] + shift
            assert np.max(np.abs(k[wrong, column]), initial=0.0) < 1e-12


@settings(deadline=None, max_examples=30)
@given(
    theta_a=ANGLES,
    theta_b=ANGLES,
    omega_t=ANGLES,
    seed=SEEDS,
    spec=st.sampled_from(ALL_SPECS),
    include_free=st.booleans(),
)
def test_matches_full_space(theta_a, theta_b, omega_t, seed, spec, include_free):
    params = CouplingParams(theta_a, theta_b, omega_t)
    rho = random_density(2, seed=seed)
    k = kraus_operator(spec, params, include_free)
    if np.real(np.trace(k @ rho.matrix @ k.conj().T)) < 1e-3:
        return
    oracle_state, oracle_p = full_space_oracle(rho, spec, params, include_free)
    state, p = apply_process(rho, spec, params, include_free)
    assert p == pytest.approx(oracle_p, abs=1e-10)
    assert linalg.max_norm(state.matrix - oracle_state.matrix) < 1e-10


def test_condition_impossible():
    rho = basis_state(("u", "u")).density()
    k = np.zeros((4, 4))
    with pytest.raises(ImpossibleOutcomeError) as excinfo:
        condition(rho, k)
    assert excinfo.value.probability == 0.0
    # a rightward up->down pass cannot add an excitation to |up up>
    with pytest.raises(ImpossibleOutcomeError):
        apply_process(rho, ProcessSpec("r", "u", "d"), CouplingParams(0.4, 0.4))


def test_apply_process_rejects_three_qubits():
    with pytest.raises(InvalidInputError):
        apply_process(maximally_mixed(3), ProcessSpec("r", "u", "d"), CouplingParams(1, 1))


@settings(deadline=None, max_examples=30)
@given(theta_a=ANGLES, theta_b=ANGLES, seed=SEEDS, prepared=st.sampled_from(list(Spin)))
def test_unconditional_channel_preserves_trace(theta_a, theta_b, seed, prepared):
    rho = random_density(2, seed=seed)
    params = CouplingParams(theta_a, theta_b)
    for direction in Direction:
        out = unconditional_channel(rho, direction, prepared, params)
        assert np.trace(out.matrix) == pytest.approx(1.0, abs=1e-10)


def test_transfer_channel_swaps():
    params = CouplingParams(math.pi / 2, math.pi / 2)
    rho = basis_state(("d", "d")).density()
    out = transfer_channel(rho, Coupling.XA, params)
    assert out.population(("u", "d")) == pytest.approx(1.0)
    out = transfer_channel(out, Coupling.XB, params)
    assert out.population(("u", "u")) == pytest.approx(1.0)
    # an excitation already on the qubit stays put when the mediator is also up
    out = transfer_channel(basis_state(("u", "d")).density(), Coupling.XA, params)
    assert out.population(("u", "d")) == pytest.approx(1.0)


@settings(deadline=None, max_examples=50)
@given(theta_a=ANGLES, theta_b=ANGLES)
def test_pipeline_closed_form(theta_a, theta_b):
    params = CouplingParams(theta_a, theta_b)
    v = pipeline_operator(OPTIMAL_RECIPE, params)
    assert linalg.max_norm(v - testing.closed_form_pipeline(params)) < 1e-12


def test_run_protocol_maximally_mixed():
    params = CouplingParams(math.pi / 4, math.pi / 2)
    final, yield_p = run_protocol(maximally_mixed(2), OPTIMAL_RECIPE, params)
    assert abs(yield_p - 0.25) < 1e-12
    assert abs(concurrence(final).value - 1.0) < 1e-9
    bell = PureState.from_amplitudes(testing.bell_state())
    assert 1 - fidelity_pure(final, bell) < 1e-10


def test_run_protocol_random_states_at_optimum():
    params = CouplingParams(math.pi / 4, math.pi / 2)
    for seed in range(100):
        rho = random_density(2, seed=seed)
        final, yield_p = run_protocol(rho, OPTIMAL_RECIPE, params)
        assert abs(concurrence(final).value - 1.0) < 1e-9
        assert abs(yield_p - rho.population(("d", "d"))) < 1e-10


def test_run_protocol_impossible():
    params = CouplingParams(math.pi / 4, math.pi / 2)
    with pytest.raises(ImpossibleOutcomeError):
        run_protocol(basis_state(("u", "u")).density(), OPTIMAL_RECIPE, params)
    with pytest.raises(ImpossibleOutcomeError):
        run_protocol(maximally_mixed(2), OPTIMAL_RECIPE, CouplingParams(0.0, math.pi / 2))


@settings(deadline=None, max_examples=30)
@given(theta_a=ANGLES, theta_b=ANGLES, seed=SEEDS)
def test_stepwise_matches_pipeline(theta_a, theta_b, seed):
    params = CouplingParams(theta_a, theta_b)
    rho = random_density(2, seed=seed)
    expected = testing.closed_form_yield(params, rho.population(("d", "d")))
    if expected < 1e-6:
        return
    final, yield_p = run_protocol(rho, OPTIMAL_RECIPE, params)
    step_final, probabilities = run_stepwise(rho, OPTIMAL_RECIPE, params)
    assert len(probabilities) == 3
    assert yield_p == pytest.approx(expected, abs=1e-10)
    assert float(np.prod(probabilities)) == pytest.approx(yield_p, abs=1e-10)
    assert linalg.max_norm(final.matrix - step_final.matrix) < 1e-8


@settings(deadline=None, max_examples=30)
@given(theta_a=ANGLES, theta_b=ANGLES, omega_t=ANGLES, seed=SEEDS)
def test_free_evolution_invariance(theta_a, theta_b, omega_t, seed):
    params = CouplingParams(theta_a, theta_b, omega_t)
    rho = random_density(2, seed=seed)
    if testing.closed_form_yield(params, rho.population(("d", "d"))) < 1e-6:
        return
    for recipe in enumerate_recipes():
        v = pipeline_operator(recipe, params)
        v_free = pipeline_operator(recipe, params, include_free=True)
        probability = np.real(np.trace(v @ rho.matrix @ v.conj().T))
        probability_free = np.real(np.trace(v_free @ rho.matrix @ v_free.conj().T))
        assert probability_free == pytest.approx(probability, abs=1e-10)
    final, yield_p = run_protocol(rho, OPTIMAL_RECIPE, params)
    free_final, free_yield = run_protocol(rho, OPTIMAL_RECIPE, params, include_free=True)
    assert free_yield == pytest.approx(yield_p, abs=1e-10)
    # the extracted state lies in one excitation sector, so only a global phase differs
    assert linalg.max_norm(final.matrix - free_final.matrix) < 1e-8
    assert concurrence(free_final).value == pytest.approx(concurrence(final).value, abs=1e-8)
