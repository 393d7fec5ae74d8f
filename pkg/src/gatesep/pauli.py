"""Pauli-string expansions of n-qubit matrices.

A Hermitian matrix expands over Pauli strings with real coefficients, and
every Pauli string is a Kronecker product of Hermitian single-qubit factors,
so the expansion doubles as a self-adjoint tensor decomposition.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import NonHermitianError, ParseError, ShapeError
from .linalg import as_matrix, kron_all

PRUNE = 1e-14
REAL_TOL = 1e-12

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def qubit_count(dim):
    n = int(dim).bit_length() - 1
    if n < 1 or 2**n != dim:
        raise ShapeError(f"dimension {dim} is not a power of two >= 2")
    return n


def pauli_matrix(letters):
    try:
        return kron_all(PAULI[c] for c in letters)
    except KeyError as exc:
        raise ValueError(f"bad Pauli letter {exc.args[0]!r} in {letters!r}") from None


@dataclass
class PauliSum:
    """Linear combination of n-qubit Pauli strings, keyed by letter string."""

    n: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for letters, c in self.terms.items():
            letters = letters.upper()
            if len(letters) != self.n or set(letters) - set("IXYZ"):
                raise ValueError(f"Pauli string {letters!r} does not fit {self.n} qubits")
            c = complex(c)
            if abs(c) > PRUNE:
                clean[letters] = clean.get(letters, 0) + c
        self.terms = dict(sorted(clean.items()))

    def is_hermitian(self):
        return all(abs(c.imag) <= REAL_TOL for c in self.terms.values())

    def __len__(self):
        return len(self.terms)


def decompose(m, n=None):
    """Expand ``m`` over Pauli strings; coefficient of P is tr(P m) / 2^n."""
    m = as_matrix(m)
    dim = m.shape[0]
    nq = qubit_count(dim)
    if n is not None and n != nq:
        raise ShapeError(f"matrix of dim {dim} is not a {n}-qubit operator")
    # tr(P m) = sum_ij P_ij m_ji, computed on the 2x2-per-qubit tensor view
    t = m.reshape([2] * (2 * nq))
    terms = {}
    for letters in itertools.product("IXYZ", repeat=nq):
        acc = t
        for c in letters:
            # contract the leading (row, col) pair of this qubit with P^T
            acc = np.tensordot(PAULI[c].T, acc, axes=([0, 1], [0, acc.ndim // 2]))
        terms["".join(letters)] = complex(acc) / dim
    return PauliSum(nq, terms)


def synthesize(p):
    dim = 2**p.n
    out = np.zeros((dim, dim), dtype=complex)
    for letters, c in p.terms.items():
        out += c * pauli_matrix(letters)
    return out


def to_tensor_decomposition(p, t=1.0):
    """One tensor term per Pauli string; the coefficient scales the first factor."""
    from .criteria import TensorDecomposition, TensorTerm

    if not p.is_hermitian():
        worst = max(abs(c.imag) for c in p.terms.values())
        raise NonHermitianError(f"Pauli sum has complex coefficients (max |Im| = {worst:.3e})")
    if not p.terms:
        # zero operator: a single all-zero term keeps N_H >= 1
        factors = [np.zeros((2, 2), dtype=complex)] + [PAULI["I"]] * (p.n - 1)
        return TensorDecomposition((2,) * p.n, (TensorTerm(factors),), t)
    terms = []
    for letters, c in p.terms.items():
        factors = [PAULI[x] for x in letters]
        factors[0] = c.real * factors[0]
        terms.append(TensorTerm(factors))
    return TensorDecomposition((2,) * p.n, tuple(terms), t)


def _fmt_real(x):
    s = f"{x:.12g}"
    if not any(ch in s for ch in ".en"):
        s += ".0"
    return s


def format_coefficient(c):
    c = complex(c)
    if abs(c.imag) <= REAL_TOL:
        return _fmt_real(c.real)
    return f"{c.real:.12g}{c.imag:+.12g}j"


def format_pauli_sum(p):
    return "".join(f"{format_coefficient(c)} {letters}\n" for letters, c in p.terms.items())


def parse_pauli_sum(text, source=None):
    """Parse ``<coeff> <letters>`` lines; ``#`` starts a comment."""
    terms = {}
    n = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError("expected '<coeff> <letters>'", lineno, 1, source)
        try:
            c = complex(parts[0])
        except ValueError:
            raise ParseError(f"bad coefficient {parts[0]!r}", lineno, 1, source) from None
        letters = parts[1].upper()
        col = raw.index(parts[1]) + 1
        if set(letters) - set("IXYZ"):
            raise ParseError(f"bad Pauli string {parts[1]!r}", lineno, col, source)
        if n is None:
            n = len(letters)
        elif len(letters) != n:
            raise ParseError(f"string length {len(letters)} != {n}", lineno, col, source)
        terms[letters] = terms.get(letters, 0) + c
    if n is None:
        raise ParseError("empty Pauli sum", None, None, source)
    return PauliSum(n, terms)
