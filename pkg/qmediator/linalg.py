"""
Dense complex matrix algebra for qubit registers of up to three qubits

Matrices are plain complex128 numpy arrays.  Basis convention: |up> is index 0, |down> is index 1,
and multi-qubit registers are ordered A (x) B (x) X with the left factor as the slowest index.
"""

import numpy as np

from .errors import InvalidInputError

TOL = 1e-10
SPECTRAL_DIMS = (2, 4, 8)

IDENTITY_2 = np.eye(2, dtype=np.complex128)
SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=np.complex128)
# sigma_+ = (sigma_1 + i sigma_2) / 2 raises |down> to |up>
SIGMA_PLUS = (SIGMA_1 + 1j * SIGMA_2) / 2
SIGMA_MINUS = (SIGMA_1 - 1j * SIGMA_2) / 2


def as_matrix(a):
    """
    Convert an array-like to a 2d complex128 array
    """
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise InvalidInputError(f"expected a 2d matrix, got shape {m.shape}")
    return m


def _require_square(m):
    if m.shape[0] != m.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {m.shape}")


def max_norm(m):
    """Largest absolute entry"""
    m = np.asarray(m)
    if m.size == 0:
        return 0.0
    return float(np.max(np.abs(m)))


def matmul(a, b):
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise InvalidInputError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def dagger(a):
    """Conjugate transpose"""
    return as_matrix(a).conj().T


def tensor(a, b):
    """
    Kronecker product, a is the slower-varying index
    """
    return np.kron(as_matrix(a), as_matrix(b))


def tensor_all(*factors):
    result = as_matrix(factors[0])
    for f in factors[1:]:
        result = tensor(result, f)
    return result


def commutator(a, b):
    return matmul(a, b) - matmul(b, a)


def is_hermitian(m, tol=TOL):
    m = as_matrix(m)
    return m.shape[0] == m.shape[1] and max_norm(m - m.conj().T) <= tol


def is_unitary(m, tol=TOL):
    m = as_matrix(m)
    return (
        m.shape[0] == m.shape[1]
        and max_norm(m @ m.conj().T - np.eye(m.shape[0])) <= tol
    )


def partial_trace(m, dims, traced_index):
    """
    Trace out subsystem `traced_index` of a matrix on the tensor product space with factor dimensions `dims`

    The remaining factors keep their relative order.
    """
    m = as_matrix(m)
    dims = [int(d) for d in dims]
    if not dims or any(d <= 0 for d in dims):
        raise InvalidInputError(f"invalid subsystem dimensions {dims}")
    total = int(np.prod(dims))
    if m.shape != (total, total):
        raise InvalidInputError(
            f"matrix shape {m.shape} does not match subsystem dimensions {dims}"
        )
    if not 0 <= traced_index < len(dims):
        raise InvalidInputError(
            f"traced index {traced_index} out of range for {len(dims)} subsystems"
        )
    n = len(dims)
    reduced = np.trace(
        m.reshape(dims + dims), axis1=traced_index, axis2=traced_index + n
    )
    remaining = total // dims[traced_index]
    return reduced.reshape(remaining, remaining)


def eig_hermitian(m, tol=TOL):
    """
    Eigendecomposition of a Hermitian matrix

    Returns:
        eigenvalues: real array sorted in descending order
        eigenvectors: unitary matrix whose columns are the matching eigenvectors
    """
    m = as_matrix(m)
    _require_square(m)
    if m.shape[0] not in SPECTRAL_DIMS:
        raise InvalidInputError(
            f"spectral operations support dimensions {SPECTRAL_DIMS}, got {m.shape[0]}"
        )
    if not is_hermitian(m, tol=tol):
        raise InvalidInputError(
            f"matrix is not Hermitian (deviation {max_norm(m - m.conj().T):.3e})"
        )
    # eigh only reads one triangle, symmetrize so both contribute
    values, vectors = np.linalg.eigh((m + m.conj().T) / 2)
    return values[::-1].copy(), vectors[:, ::-1].copy()


def matexp_i_hermitian(h, t, tol=TOL):
    """
    exp(-i h t) for Hermitian h, built from the eigendecomposition of h
    """
    values, vectors = eig_hermitian(h, tol=tol)
    phases = np.exp(-1j * values * t)
    return (vectors * phases) @ vectors.conj().T


def sqrt_psd(m, tol=TOL):
    """
    Square root of a positive semidefinite matrix, negative spectral noise is clamped to zero
    """
    values, vectors = eig_hermitian(m, tol=tol)
    roots = np.sqrt(np.clip(values, 0.0, None))
    return (vectors * roots) @ vectors.conj().T
