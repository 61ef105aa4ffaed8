"""
Reference oracles and closed forms for checking the simulator

Everything here is written independently of the production code path (explicit loops, series
expansions, hand-expanded operators) so that agreement is meaningful.
"""

import math

import numpy as np

from .hamiltonians import CouplingParams

UP = np.array([1, 0], dtype=np.complex128)
DOWN = np.array([0, 1], dtype=np.complex128)


def ketbra(ket, bra):
    return np.outer(ket, bra.conj())


def naive_matmul(a, b):
    """Triple-loop matrix product"""
    rows, inner = a.shape
    _inner, cols = b.shape
    out = np.zeros((rows, cols), dtype=np.complex128)
    for i in range(rows):
        for j in range(cols):
            total = 0j
            for k in range(inner):
                total += a[i, k] * b[k, j]
            out[i, j] = total
    return out


def naive_partial_trace(m, dims, traced_index):
    """Partial trace by explicit summation over multi-indices"""
    kept = [d for i, d in enumerate(dims) if i != traced_index]
    out_dim = int(np.prod(kept))
    out = np.zeros((out_dim, out_dim), dtype=np.complex128)

    def flat(multi):
        index = 0
        for d, x in zip(dims, multi):
            index = index * d + x
        return index

    for row in np.ndindex(*kept):
        for col in np.ndindex(*kept):
            r_out = int(np.ravel_multi_index(row, kept)) if kept else 0
            c_out = int(np.ravel_multi_index(col, kept)) if kept else 0
            for t in range(dims[traced_index]):
                full_row = list(row)
                full_col = list(col)
                full_row.insert(traced_index, t)
                full_col.insert(traced_index, t)
                out[r_out, c_out] += m[flat(full_row), flat(full_col)]
    return out


def taylor_expm_i(h, t, terms=40):
    """
    exp(-i h t) by scaling and squaring a truncated Taylor series
    """
    a = -1j * t * np.asarray(h, dtype=np.complex128)
    norm = np.max(np.sum(np.abs(a), axis=1))
    squarings = max(0, int(math.ceil(math.log2(norm))) + 1) if norm > 0 else 0
    a = a / 2 ** squarings
    result = np.eye(a.shape[0], dtype=np.complex128)
    term = np.eye(a.shape[0], dtype=np.complex128)
    for n in range(1, terms):
        term = term @ a / n
        result = result + term
    for _ in range(squarings):
        result = result @ result
    return result


def random_matrix(rand, dim):
    return rand.normal(size=(dim, dim)) + 1j * rand.normal(size=(dim, dim))


def random_hermitian(rand, dim):
    g = random_matrix(rand, dim)
    return (g + g.conj().T) / 2


def random_params(rand, omega_scale=0.0):
    return CouplingParams(
        theta_a=rand.uniform(-math.pi, math.pi),
        theta_b=rand.uniform(-math.pi, math.pi),
        omega_t=rand.uniform(-omega_scale, omega_scale),
    )


def _trig(params):
    return (
        math.sin(params.theta_a),
        math.cos(params.theta_a),
        math.sin(params.theta_b),
        math.cos(params.theta_b),
    )


def closed_form_r_plus(params):
    """Rightward pass, mediator prepared up and found down"""
    s_a, c_a, s_b, c_b = _trig(params)
    return -1j * (
        s_a * np.kron(ketbra(UP, DOWN), ketbra(DOWN, DOWN) + c_b * ketbra(UP, UP))
        + s_b * np.kron(ketbra(UP, UP) + c_a * ketbra(DOWN, DOWN), ketbra(UP, DOWN))
    )


def closed_form_l_plus(params):
    """Leftward pass, mediator prepared up and found down"""
    s_a, c_a, s_b, c_b = _trig(params)
    return -1j * (
        s_a * np.kron(ketbra(UP, DOWN), ketbra(UP, UP) + c_b * ketbra(DOWN, DOWN))
        + s_b * np.kron(ketbra(DOWN, DOWN) + c_a * ketbra(UP, UP), ketbra(UP, DOWN))
    )


def closed_form_r_minus(params):
    """Rightward pass, mediator prepared down and found up"""
    s_a, c_a, s_b, c_b = _trig(params)
    return -1j * (
        s_a * np.kron(ketbra(DOWN, UP), ketbra(UP, UP) + c_b * ketbra(DOWN, DOWN))
        + s_b * np.kron(ketbra(DOWN, DOWN) + c_a * ketbra(UP, UP), ketbra(DOWN, UP))
    )


def closed_form_pipeline(params):
    """
    2i s_a c_a s_b (c_a s_b |up down> + s_a |down up>) <down down|
    """
    s_a, c_a, s_b, _c_b = _trig(params)
    ket = c_a * s_b * np.kron(UP, DOWN) + s_a * np.kron(DOWN, UP)
    return 2j * s_a * c_a * s_b * ketbra(ket, np.kron(DOWN, DOWN))


def closed_form_yield(params, rho_down_down=1.0):
    s_a, c_a, s_b, c_b = _trig(params)
    return 4 * s_a ** 2 * c_a ** 2 * s_b ** 2 * (1 - c_a ** 2 * c_b ** 2) * rho_down_down


def werner_state(p):
    """p |Phi+><Phi+| + (1 - p) I / 4"""
    phi = (np.kron(UP, UP) + np.kron(DOWN, DOWN)) / math.sqrt(2)
    return p * ketbra(phi, phi) + (1 - p) * np.eye(4) / 4


def bell_state():
    """(|up down> + |down up>) / sqrt(2)"""
    return (np.kron(UP, DOWN) + np.kron(DOWN, UP)) / math.sqrt(2)
