"""
Post-selected mediator passes and the three-pass extraction protocol

A pass prepares the mediator X, lets it interact with A and B in the order given by its direction,
and keeps the run only if X is then measured in the chosen outcome.  The conditional map on A (x) B
is the Kraus operator <outcome|_X U_second U_first |prepared>_X, always taken from the full 8x8
propagators.
"""

import enum
import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from . import linalg
from .errors import ImpossibleOutcomeError, InvalidInputError
from .hamiltonians import Coupling, propagator
from .states import DensityMatrix, Spin

logger = logging.getLogger(__name__)

EPSILON_P = 1e-12
RECIPE_LENGTH = 3

_AB_DIMS = (4, 2, 4, 2)


class Direction(str, enum.Enum):
    # rightward: X meets A, then B
    RIGHTWARD = "rightward"
    LEFTWARD = "leftward"

    @property
    def code(self):
        return "r" if self is Direction.RIGHTWARD else "l"

    @classmethod
    def parse(cls, value):
        if isinstance(value, Direction):
            return value
        text = str(value).strip().lower()
        for direction in cls:
            if text in (direction.value, direction.code):
                return direction
        raise InvalidInputError(f"invalid direction {value!r}")


@dataclass(frozen=True)
class ProcessSpec:
    direction: Direction
    prepared: Spin
    outcome: Spin

    def __post_init__(self):
        object.__setattr__(self, "direction", Direction.parse(self.direction))
        object.__setattr__(self, "prepared", Spin.parse(self.prepared))
        object.__setattr__(self, "outcome", Spin.parse(self.outcome))

    def __str__(self):
        return f"{self.direction.code.upper()}({self.prepared.value}->{self.outcome.value})"

    def to_json(self):
        return {
            "direction": self.direction.value,
            "prepared": self.prepared.value,
            "outcome": self.outcome.value,
        }

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, dict):
            raise InvalidInputError(f"process must be an object, got {data!r}")
        missing = {"direction", "prepared", "outcome"} - set(data)
        if missing:
            raise InvalidInputError(f"process is missing fields {sorted(missing)}")
        return cls(
            direction=data["direction"], prepared=data["prepared"], outcome=data["outcome"]
        )


@dataclass(frozen=True)
class Recipe:
    processes: Tuple[ProcessSpec, ...]

    def __post_init__(self):
        processes = tuple(self.processes)
        if len(processes) != RECIPE_LENGTH:
            raise InvalidInputError(
                f"a recipe has exactly {RECIPE_LENGTH} processes, got {len(processes)}"
            )
        object.__setattr__(self, "processes", processes)

    @property
    def name(self):
        return "".join(p.direction.code for p in self.processes)

    def __str__(self):
        return " ".join(str(p) for p in self.processes)

    def to_json(self):
        return [p.to_json() for p in self.processes]

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, list):
            raise InvalidInputError("recipe must be a list of three process objects")
        return cls(processes=tuple(ProcessSpec.from_json(d) for d in data))


def _ordered(direction, u_xa, u_xb):
    if Direction(direction) is Direction.RIGHTWARD:
        return u_xa, u_xb
    return u_xb, u_xa


def pass_unitary(direction, params, include_free=False):
    """
    8x8 evolution of one mediator pass, the second interaction applied last
    """
    u_xa = propagator(Coupling.XA, params, include_free=include_free)
    u_xb = propagator(Coupling.XB, params, include_free=include_free)
    first, second = _ordered(direction, u_xa, u_xb)
    return second @ first


def kraus_from_propagators(spec, u_xa, u_xb):
    """
    Reduce the 8x8 pass evolution to the 4x4 conditional operator on A (x) B

    Lets sweeps reuse propagators computed once per axis value.
    """
    assert u_xa.shape == u_xb.shape == (8, 8)
    first, second = _ordered(spec.direction, u_xa, u_xb)
    u = (second @ first).reshape(_AB_DIMS)
    return u[:, spec.outcome.index, :, spec.prepared.index].copy()


def kraus_operator(spec, params, include_free=False):
    u_xa = propagator(Coupling.XA, params, include_free=include_free)
    u_xb = propagator(Coupling.XB, params, include_free=include_free)
    return kraus_from_propagators(spec, u_xa, u_xb)


def _require_two_qubits(rho):
    if rho.num_qubits != 2:
        raise InvalidInputError(f"expected a two-qubit state, got {rho.num_qubits} qubits")


def condition(rho, k, epsilon_p=EPSILON_P):
    """
    Apply k and renormalize: rho -> k rho k^dag / p with p = Tr(k rho k^dag)

    Raises ImpossibleOutcomeError if p <= epsilon_p.
    """
    out = k @ rho.matrix @ k.conj().T
    probability = float(np.real(np.trace(out)))
    if probability <= epsilon_p:
        raise ImpossibleOutcomeError(probability)
    out = out / probability
    return DensityMatrix.from_matrix((out + out.conj().T) / 2), probability


def apply_process(rho, spec, params, include_free=False, epsilon_p=EPSILON_P):
    _require_two_qubits(rho)
    k = kraus_operator(spec, params, include_free=include_free)
    state, probability = condition(rho, k, epsilon_p=epsilon_p)
    logger.debug("pass %s succeeded with probability %.6g", spec, probability)
    return state, probability


def full_space_oracle(rho, spec, params, include_free=False, epsilon_p=EPSILON_P):
    """
    Same conditional update as apply_process, computed on the full register

    rho (x) |prepared><prepared| is evolved, X is projected onto the outcome and traced out.
    """
    _require_two_qubits(rho)
    prepared = np.zeros((2, 2), dtype=np.complex128)
    prepared[spec.prepared.index, spec.prepared.index] = 1.0
    projector = np.zeros((2, 2), dtype=np.complex128)
    projector[spec.outcome.index, spec.outcome.index] = 1.0
    projector = linalg.tensor(np.eye(4), projector)

    u = pass_unitary(spec.direction, params, include_free=include_free)
    evolved = linalg.matmul(
        linalg.matmul(u, linalg.tensor(rho.matrix, prepared)), linalg.dagger(u)
    )
    projected = linalg.matmul(linalg.matmul(projector, evolved), projector)
    probability = float(np.real(np.trace(projected)))
    if probability <= epsilon_p:
        raise ImpossibleOutcomeError(probability)
    reduced = linalg.partial_trace(projected, [2, 2, 2], 2) / probability
    return DensityMatrix.from_matrix((reduced + reduced.conj().T) / 2), probability


def unconditional_channel(rho, direction, prepared, params, include_free=False):
    """
    A pass whose mediator outcome is discarded: sum over both outcomes of K rho K^dag
    """
    _require_two_qubits(rho)
    out = np.zeros((4, 4), dtype=np.complex128)
    for outcome in Spin:
        k = kraus_operator(
            ProcessSpec(direction, prepared, outcome), params, include_free=include_free
        )
        out += k @ rho.matrix @ k.conj().T
    return DensityMatrix.from_matrix((out + out.conj().T) / 2)


def transfer_channel(rho, coupling, params, prepared=Spin.UP):
    """
    A mediator prepared in `prepared` interacts with one qubit only and is then discarded
    """
    _require_two_qubits(rho)
    coupling = Coupling(coupling)
    state_x = np.zeros((2, 2), dtype=np.complex128)
    state_x[Spin.parse(prepared).index, Spin.parse(prepared).index] = 1.0
    u = propagator(coupling, params)
    evolved = u @ linalg.tensor(rho.matrix, state_x) @ u.conj().T
    reduced = linalg.partial_trace(evolved, [2, 2, 2], 2)
    return DensityMatrix.from_matrix((reduced + reduced.conj().T) / 2)


def pipeline_from_kraus(kraus_ops):
    """Ordered product, the last operator applied last"""
    v = np.eye(4, dtype=np.complex128)
    for k in kraus_ops:
        v = k @ v
    return v


def pipeline_operator(recipe, params, include_free=False):
    """
    V = K_3 K_2 K_1 for the three passes of a recipe
    """
    u_xa = propagator(Coupling.XA, params, include_free=include_free)
    u_xb = propagator(Coupling.XB, params, include_free=include_free)
    return pipeline_from_kraus(
        [kraus_from_propagators(spec, u_xa, u_xb) for spec in recipe.processes]
    )


def run_protocol(rho, recipe, params, include_free=False, epsilon_p=EPSILON_P):
    """
    Run all three passes: rho -> V rho V^dag / P

    Returns the conditional state and the yield P = Tr(V rho V^dag).
    """
    _require_two_qubits(rho)
    v = pipeline_operator(recipe, params, include_free=include_free)
    final, yield_p = condition(rho, v, epsilon_p=epsilon_p)
    logger.debug("recipe %s yield %.6g", recipe.name, yield_p)
    return final, yield_p


def run_stepwise(rho, recipe, params, include_free=False, epsilon_p=EPSILON_P):
    """
    Run the passes one at a time

    Returns the final state and the probability of each pass given the passes before it;
    their product is the yield of run_protocol.
    """
    _require_two_qubits(rho)
    probabilities = []
    state = rho
    for spec in recipe.processes:
        state, probability = apply_process(
            state, spec, params, include_free=include_free, epsilon_p=epsilon_p
        )
        probabilities.append(probability)
    return state, probabilities
