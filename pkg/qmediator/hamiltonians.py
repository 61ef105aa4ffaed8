"""
Hamiltonians of two qubits A, B and a mediator X on the register A (x) B (x) X

All couplings are rotating-wave excitation exchanges between X and one qubit, so the total
excitation number is conserved.  Parameters are the dimensionless angles theta = g * tau.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import InvalidInputError

SITE_A = 0
SITE_B = 1
SITE_X = 2
NUM_SITES = 3


class Coupling(str, enum.Enum):
    XA = "XA"
    XB = "XB"

    @property
    def site(self):
        return SITE_A if self is Coupling.XA else SITE_B


@dataclass(frozen=True)
class CouplingParams:
    """
    theta_a = g_A tau_A, theta_b = g_B tau_B; omega_t = Omega times the duration of each interaction segment
    """

    theta_a: float
    theta_b: float
    omega_t: float = 0.0

    def __post_init__(self):
        for name in ("theta_a", "theta_b", "omega_t"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise InvalidInputError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)

    def theta(self, coupling):
        return self.theta_a if Coupling(coupling) is Coupling.XA else self.theta_b


def embed(op, site):
    """
    Place a single-qubit operator on one site of the three-qubit register
    """
    factors = [linalg.IDENTITY_2] * NUM_SITES
    factors[site] = op
    return linalg.tensor_all(*factors)


def h_free(omega):
    """(omega / 2) (sigma_3^A + sigma_3^B + sigma_3^X)"""
    total = sum(embed(linalg.SIGMA_3, site) for site in range(NUM_SITES))
    return (omega / 2) * total


def _h_exchange(g, site):
    raise_x = embed(linalg.SIGMA_PLUS, SITE_X) @ embed(linalg.SIGMA_MINUS, site)
    return g * (raise_x + raise_x.conj().T)


def h_int_xa(g):
    """g (sigma_+^X sigma_-^A + sigma_-^X sigma_+^A)"""
    return _h_exchange(g, SITE_A)


def h_int_xb(g):
    """g (sigma_+^X sigma_-^B + sigma_-^X sigma_+^B)"""
    return _h_exchange(g, SITE_B)


def h_int(coupling, g):
    return h_int_xa(g) if Coupling(coupling) is Coupling.XA else h_int_xb(g)


def excitation_number():
    """
    Number of up spins on A, B and X, diagonal with entries 0..3
    """
    up = (linalg.IDENTITY_2 + linalg.SIGMA_3) / 2
    return sum(embed(up, site) for site in range(NUM_SITES))


def propagator(which, params, include_free=False):
    """
    exp(-i (H_0 [if include_free] + H_X{A,B}) tau) written through the dimensionless angles

    The default is the interaction picture, where H_0 is dropped.
    """
    coupling = Coupling(which)
    generator = h_int(coupling, params.theta(coupling))
    if include_free:
        generator = generator + h_free(params.omega_t)
    return linalg.matexp_i_hermitian(generator, 1.0)
