"""
Two-qubit entanglement: Wootters concurrence and the closed forms of the extracted state
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from . import linalg
from .errors import DegenerateStateError, InvalidInputError
from .states import PureState

DEGENERACY_TOL = 1e-12
CONDITION_TOL = 1e-9
# below this |cos theta_a| the tangent form of the condition is replaced by its polynomial form
_POLE_TOL = 1e-8

_SIGMA_YY = linalg.tensor(linalg.SIGMA_2, linalg.SIGMA_2)


@dataclass(frozen=True)
class ConcurrenceResult:
    value: float
    # square roots of the eigenvalues of rho rho~, descending
    wootters_lambdas: Tuple[float, float, float, float]


def wootters(matrix, tol=linalg.TOL):
    """
    Concurrence of a raw 4x4 density matrix

    sqrt(rho) rho~ sqrt(rho) = M M^dag with M = sqrt(rho) (sigma_2 x sigma_2) sqrt(rho)*, so the
    lambdas are the singular values of M.  Taking them directly avoids square roots of the
    eigenvalue noise of (nearly) pure states.
    """
    m = linalg.as_matrix(matrix)
    if m.shape != (4, 4):
        raise InvalidInputError(f"concurrence needs a 4x4 matrix, got {m.shape}")
    root = linalg.sqrt_psd(m, tol=tol)
    lambdas = np.linalg.svd(root @ _SIGMA_YY @ root.conj(), compute_uv=False)
    value = max(0.0, float(lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]))
    return ConcurrenceResult(
        value=min(1.0, value), wootters_lambdas=tuple(float(x) for x in lambdas)
    )


def concurrence(rho):
    if rho.num_qubits != 2:
        raise InvalidInputError(
            f"concurrence is defined for two qubits, got {rho.num_qubits}"
        )
    return wootters(rho.matrix)


def _trig(params):
    return (
        math.sin(params.theta_a),
        math.cos(params.theta_a),
        math.sin(params.theta_b),
        math.cos(params.theta_b),
    )


def analytic_concurrence(params):
    """
    C = 2 |s_a c_a s_b| / (s_a^2 + c_a^2 s_b^2) for the state extracted by the optimal recipe
    """
    s_a, c_a, s_b, _c_b = _trig(params)
    denominator = s_a ** 2 + c_a ** 2 * s_b ** 2
    if denominator <= DEGENERACY_TOL:
        raise DegenerateStateError(
            f"extracted state vanishes at theta_a={params.theta_a}, theta_b={params.theta_b}"
        )
    return min(1.0, 2 * abs(s_a * c_a * s_b) / denominator)


def analytic_yield(params):
    """
    Success probability per unit <down down|rho|down down>: 4 s_a^2 c_a^2 s_b^2 (1 - c_a^2 c_b^2)
    """
    s_a, c_a, s_b, c_b = _trig(params)
    return 4 * s_a ** 2 * c_a ** 2 * s_b ** 2 * (1 - c_a ** 2 * c_b ** 2)


def target_state(params):
    """
    (c_a s_b |up down> + s_a |down up>) / sqrt(1 - c_a^2 c_b^2)
    """
    s_a, c_a, s_b, c_b = _trig(params)
    norm_sq = 1 - c_a ** 2 * c_b ** 2
    if norm_sq <= DEGENERACY_TOL:
        raise DegenerateStateError(
            f"target state undefined at theta_a={params.theta_a}, theta_b={params.theta_b}"
        )
    amps = np.array([0.0, c_a * s_b, s_a, 0.0], dtype=np.complex128)
    return PureState.from_amplitudes(amps, normalize=True)


def max_condition(params, tol=CONDITION_TOL):
    """
    tan^2 theta_a == sin^2 theta_b, the condition for a maximally entangled extracted state
    """
    s_a, c_a, s_b, _c_b = _trig(params)
    if abs(c_a) < _POLE_TOL:
        return abs(s_a ** 2 - c_a ** 2 * s_b ** 2) < tol
    return abs(math.tan(params.theta_a) ** 2 - s_b ** 2) < tol
