"""Low-order Zassenhaus corrections.

``exp(A + B) = exp(A) exp(B) exp(C2) exp(C3) ...`` with
``C2 = -[A, B] / 2`` and ``C3 = [B, [A, B]] / 3 + [A, [A, B]] / 6``.
Only these two terms are computed; the residual helpers measure what the
truncation leaves behind.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np
import scipy.linalg

from .errors import ShapeError
from .linalg import (
    DEFAULT_TOLERANCES,
    as_matrix,
    dagger,
    expm_i_hermitian,
    fro,
    is_hermitian,
    is_scalar_matrix,
)


def commutator(a, b):
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch {a.shape} vs {b.shape}")
    return a @ b - b @ a


@dataclass(frozen=True, eq=False)
class ZassenhausTerms:
    a: np.ndarray
    b: np.ndarray
    c2: np.ndarray
    c3: np.ndarray
    truncation_order: int = 3


def zassenhaus_terms(a, b):
    a, b = as_matrix(a), as_matrix(b)
    ab = commutator(a, b)
    c2 = -0.5 * ab
    c3 = commutator(b, ab) / 3 + commutator(a, ab) / 6
    return ZassenhausTerms(a, b, c2, c3)


def expm(a):
    """Matrix exponential; spectral route for anti-Hermitian input."""
    a = as_matrix(a)
    h = -1j * a
    if is_hermitian(h):
        return expm_i_hermitian((h + dagger(h)) / 2, 1.0)
    return scipy.linalg.expm(a)


def truncated_product_residual(a, b):
    """``||exp(a+b) - exp(a) exp(b) exp(C2) exp(C3)||_F``."""
    z = zassenhaus_terms(a, b)
    approx = expm(z.a) @ expm(z.b) @ expm(z.c2) @ expm(z.c3)
    return fro(expm(z.a + z.b) - approx)


def multi_term_scalar_tail_check(terms, tol=None):
    """Is ``exp(sum terms) * (prod exp(term))^-1`` a multiple of identity?

    Returns ``(flag, lam)`` with ``lam`` None when the flag is False.
    """
    tol = tol or DEFAULT_TOLERANCES
    terms = [as_matrix(x) for x in terms]
    if not terms:
        raise ShapeError("need at least one term")
    if len({x.shape for x in terms}) != 1:
        raise ShapeError("terms differ in shape")
    ordered = reduce(np.matmul, (expm(x) for x in terms))
    q = expm(sum(terms)) @ np.linalg.inv(ordered)
    lam = is_scalar_matrix(q, tol)
    return (lam is not None), lam
