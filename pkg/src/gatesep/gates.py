"""Named gates and Hamiltonians used by the fixtures, tests and CLI."""
from __future__ import annotations

import numpy as np
from scipy.stats import unitary_group

from .criteria import TensorDecomposition, TensorTerm
from .pauli import PAULI

I2, X, Y, Z = PAULI["I"], PAULI["X"], PAULI["Y"], PAULI["Z"]
# ordering of the 7-parameter Hamiltonian coefficients
SIGMA = (I2, X, Y, Z)

CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
CZ = np.diag([1, 1, 1, -1]).astype(complex)
SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)
ISWAP = np.array([[1, 0, 0, 0], [0, 0, 1j, 0], [0, 1j, 0, 0], [0, 0, 0, 1]], dtype=complex)
TOFFOLI = np.eye(8, dtype=complex)
TOFFOLI[6:, 6:] = X

NAMED = {"cnot": CNOT, "cz": CZ, "swap": SWAP, "iswap": ISWAP, "toffoli": TOFFOLI}


def spin_decomposition(axis, t=1.0):
    """Two-qubit total-spin component ``I x s + s x I`` for axis X, Y or Z."""
    s = PAULI[axis.upper()]
    return TensorDecomposition((2, 2), (TensorTerm([I2, s]), TensorTerm([s, I2])), t)


def seven_parameter_decomposition(a, b, t=1.0):
    """``sum_i a_i s_i x I + I x b_i s_i`` with ``s = (I, X, Y, Z)``."""
    terms = [TensorTerm([ai * s, I2]) for ai, s in zip(a, SIGMA)]
    terms += [TensorTerm([I2, bi * s]) for bi, s in zip(b, SIGMA)]
    return TensorDecomposition((2, 2), tuple(terms), t)


def random_unitary(dim, rng):
    return unitary_group.rvs(dim, random_state=rng)


def random_hermitian(dim, rng, scale=1.0):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * (a + a.conj().T) / 2
