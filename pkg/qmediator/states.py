"""
Qubit register states: density matrices, pure states and the constructors used by the protocol
"""

import enum
from dataclasses import dataclass

import numpy as np

from . import enc, linalg, util
from .errors import InvalidInputError

MAX_QUBITS = 3


class Spin(str, enum.Enum):
    UP = "up"
    DOWN = "down"

    @property
    def index(self):
        return 0 if self is Spin.UP else 1

    @classmethod
    def parse(cls, label):
        """
        Accept a Spin, "up"/"down" or the short forms "u"/"d"
        """
        if isinstance(label, Spin):
            return label
        text = str(label).strip().lower()
        if text in ("u", "up"):
            return cls.UP
        if text in ("d", "down"):
            return cls.DOWN
        raise InvalidInputError(f"invalid spin label {label!r}")


def _check_num_qubits(num_qubits):
    if num_qubits not in range(1, MAX_QUBITS + 1):
        raise InvalidInputError(
            f"number of qubits must be between 1 and {MAX_QUBITS}, got {num_qubits}"
        )


def _num_qubits_for_dim(dim):
    num_qubits = int(dim).bit_length() - 1
    if 2 ** num_qubits != dim:
        raise InvalidInputError(f"dimension {dim} is not a power of two")
    _check_num_qubits(num_qubits)
    return num_qubits


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray
    num_qubits: int

    def __post_init__(self):
        _check_num_qubits(self.num_qubits)
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape != (2 ** self.num_qubits,):
            raise InvalidInputError(
                f"{self.num_qubits} qubits need {2 ** self.num_qubits} amplitudes, got {amps.shape}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > linalg.TOL:
            raise InvalidInputError(f"state is not normalized (norm {norm})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes, normalize=False):
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        if normalize:
            norm = np.linalg.norm(amps)
            if norm == 0:
                raise InvalidInputError("cannot normalize the zero vector")
            amps = amps / norm
        return cls(amplitudes=amps, num_qubits=_num_qubits_for_dim(amps.shape[0]))

    def density(self):
        """Projector |psi><psi| as a DensityMatrix"""
        return DensityMatrix.from_matrix(np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """
    Hermitian, unit-trace, positive semidefinite matrix on a register of 1-3 qubits

    Validated on construction, the matrix is read-only afterwards.
    """

    matrix: np.ndarray
    num_qubits: int

    def __post_init__(self):
        _check_num_qubits(self.num_qubits)
        m = linalg.as_matrix(self.matrix).copy()
        dim = 2 ** self.num_qubits
        if m.shape != (dim, dim):
            raise InvalidInputError(
                f"{self.num_qubits} qubits need a {dim}x{dim} matrix, got {m.shape}"
            )
        if not linalg.is_hermitian(m):
            raise InvalidInputError("density matrix is not Hermitian")
        trace = np.trace(m)
        if abs(trace - 1.0) > linalg.TOL:
            raise InvalidInputError(f"density matrix trace is {trace}, expected 1")
        values, _vectors = linalg.eig_hermitian(m)
        if values[-1] < -linalg.TOL:
            raise InvalidInputError(
                f"density matrix has negative eigenvalue {values[-1]:.3e}"
            )
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_matrix(cls, matrix):
        m = linalg.as_matrix(matrix)
        return cls(matrix=m, num_qubits=_num_qubits_for_dim(m.shape[0]))

    @property
    def dim(self):
        return 2 ** self.num_qubits

    def purity(self):
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def population(self, labels):
        """Diagonal entry <labels|rho|labels> for a computational basis state"""
        index = basis_index(labels)
        return float(np.real(self.matrix[index, index]))

    def to_json(self):
        return enc.matrix_to_json(self.matrix)


def density_from_json(data):
    """
    Load a DensityMatrix from nested [re, im] pairs, validating every invariant
    """
    return DensityMatrix.from_matrix(enc.matrix_from_json(data))


def basis_index(labels):
    spins = [Spin.parse(label) for label in labels]
    _check_num_qubits(len(spins))
    index = 0
    for spin in spins:
        index = 2 * index + spin.index
    return index


def basis_state(labels):
    """
    Computational basis state, first label is the slowest index, e.g. ("up", "down") is |up down>
    """
    labels = list(labels)
    index = basis_index(labels)
    amps = np.zeros(2 ** len(labels), dtype=np.complex128)
    amps[index] = 1.0
    return PureState(amplitudes=amps, num_qubits=len(labels))


def maximally_mixed(num_qubits):
    _check_num_qubits(num_qubits)
    dim = 2 ** num_qubits
    return DensityMatrix(
        matrix=np.eye(dim, dtype=np.complex128) / dim, num_qubits=num_qubits
    )


def random_density(num_qubits, seed):
    """
    Full-rank random density matrix G G^dag / Tr(G G^dag) from a seeded complex Gaussian matrix G
    """
    _check_num_qubits(num_qubits)
    dim = 2 ** num_qubits
    rand = np.random.RandomState(seed=util.check_seed(seed))
    g = rand.normal(size=(dim, dim)) + 1j * rand.normal(size=(dim, dim))
    m = g @ g.conj().T
    m = m / np.trace(m)
    # remove the rounding asymmetry of the product before validation
    m = (m + m.conj().T) / 2
    return DensityMatrix(matrix=m, num_qubits=num_qubits)


def fidelity_pure(rho, psi):
    """
    <psi|rho|psi>, clamped to [0, 1]
    """
    if rho.num_qubits != psi.num_qubits:
        raise InvalidInputError(
            f"state sizes differ: {rho.num_qubits} vs {psi.num_qubits} qubits"
        )
    value = np.vdot(psi.amplitudes, rho.matrix @ psi.amplitudes)
    return float(min(1.0, max(0.0, np.real(value))))
