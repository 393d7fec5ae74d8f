"""Dense complex matrix kernel: Kronecker products, exp/log of normal
matrices and phase-insensitive distances.

Matrices are plain 2-D ``numpy`` complex arrays. Subsystem 1 is always the
leftmost Kronecker factor (the most significant index block).
"""
from __future__ import annotations

import os
import warnings
from dataclasses import dataclass
from functools import reduce

import numpy as np
import scipy.linalg

from .errors import ContractError, NonHermitianError, NonUnitaryError, ShapeError, SizeError

ABS_FLOOR = 1e-12
DEFAULT_MAX_DIM = 2**14
BRANCH_CUT_RADIUS = 1e-8


class BranchCutWarning(UserWarning):
    """An eigenvalue of a unitary sits on the logarithm branch cut at -1."""


@dataclass(frozen=True)
class Tolerances:
    """Relative thresholds (scaled by a Frobenius norm, floored at 1e-12)."""

    tol_hermitian: float = 1e-10
    tol_unitary: float = 1e-9
    tol_scalar: float = 1e-9
    tol_schmidt: float = 1e-8

    def __post_init__(self):
        for name in ("tol_hermitian", "tol_unitary", "tol_scalar", "tol_schmidt"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")


DEFAULT_TOLERANCES = Tolerances()


def bound(tol, scale):
    """Threshold ``tol * scale`` with the absolute floor applied."""
    return max(tol * scale, ABS_FLOOR)


def max_dim():
    env = os.environ.get("GATESEP_MAX_DIM")
    return int(env) if env else DEFAULT_MAX_DIM


def as_matrix(a, name="matrix"):
    """Validate and return ``a`` as a square finite complex array."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ShapeError(f"{name} must be a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ContractError(f"{name} has non-finite entries")
    return m


def fro(a):
    return float(np.linalg.norm(a))


def dagger(a):
    return a.conj().T


def is_hermitian(h, tol=None):
    tol = tol or DEFAULT_TOLERANCES
    return fro(h - dagger(h)) <= bound(tol.tol_hermitian, fro(h))


def is_unitary(u, tol=None):
    tol = tol or DEFAULT_TOLERANCES
    d = u.shape[0]
    return fro(dagger(u) @ u - np.eye(d)) <= bound(tol.tol_unitary, np.sqrt(d))


def require_hermitian(h, tol=None, name="matrix"):
    h = as_matrix(h, name)
    if not is_hermitian(h, tol):
        raise NonHermitianError(f"{name} is not Hermitian (|h - h^dag| = {fro(h - dagger(h)):.3e})")
    return h


def require_unitary(u, tol=None, name="matrix"):
    u = as_matrix(u, name)
    if not is_unitary(u, tol):
        d = u.shape[0]
        err = fro(dagger(u) @ u - np.eye(d))
        raise NonUnitaryError(f"{name} is not unitary (|u^dag u - I| = {err:.3e})")
    return u


def kron(a, b, limit=None):
    """Kronecker product with ``a`` as the most significant factor."""
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    limit = limit or max_dim()
    d = a.shape[0] * b.shape[0]
    if d > limit:
        raise SizeError(f"Kronecker product dimension {d} exceeds maximum {limit}")
    return np.kron(a, b)


def kron_all(mats, limit=None):
    mats = list(mats)
    if not mats:
        raise ShapeError("kron_all needs at least one matrix")
    return reduce(lambda x, y: kron(x, y, limit), mats[1:], as_matrix(mats[0]))


def expm_i_hermitian(h, t=1.0, tol=None):
    """Return ``exp(i t h)`` for Hermitian ``h`` via its eigendecomposition."""
    h = require_hermitian(h, tol, "h")
    w, v = np.linalg.eigh((h + dagger(h)) / 2)
    return (v * np.exp(1j * t * w)) @ dagger(v)


def unitary_eig(u):
    """Eigenphases in (-pi, pi] and a unitary eigenbasis of a normal matrix.

    Complex Schur form is diagonal for normal matrices and its basis stays
    unitary through degeneracies. Eigenvalues within 1e-8 of -1 are given
    phase +pi; the second return value flags that case.
    """
    t, z = scipy.linalg.schur(u, output="complex")
    ev = np.diag(t)
    phases = np.angle(ev)
    on_cut = np.abs(ev + 1) <= BRANCH_CUT_RADIUS
    phases[on_cut] = np.pi
    return phases, z, bool(on_cut.any())


def near_branch_cut(u):
    return bool(np.any(np.abs(np.linalg.eigvals(u) + 1) <= BRANCH_CUT_RADIUS))


def principal_log_unitary(u, tol=None):
    """Hermitian ``H`` with ``exp(iH) = u`` and eigenphases in (-pi, pi].

    Emits :class:`BranchCutWarning` when ``u`` has an eigenvalue at -1; there
    the logarithm is one of several valid choices.
    """
    u = require_unitary(u, tol, "u")
    phases, z, on_cut = unitary_eig(u)
    if on_cut:
        warnings.warn(
            "eigenvalue -1 on the log branch cut; log-based criteria are sufficient-only here",
            BranchCutWarning,
            stacklevel=2,
        )
    h = (z * phases) @ dagger(z)
    return (h + dagger(h)) / 2


def optimal_phase(u, v):
    """Unit scalar ``phi`` minimising ``||u - phi v||_F`` (1 if undefined)."""
    ip = np.vdot(v, u)
    if abs(ip) <= ABS_FLOOR:
        return 1.0 + 0j
    return complex(ip / abs(ip))


def dist_up_to_phase(u, v):
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != v.shape:
        raise ShapeError(f"shape mismatch {u.shape} vs {v.shape}")
    sq = fro(u) ** 2 + fro(v) ** 2 - 2 * abs(np.vdot(u, v))
    return float(np.sqrt(max(sq, 0.0)))


def scalar_deviation(a):
    """``||a - lam I||_F / max(||a||_F, 1)`` with ``lam = tr(a)/d``, and ``lam``."""
    d = a.shape[0]
    lam = np.trace(a) / d
    dev = fro(a - lam * np.eye(d)) / max(fro(a), 1.0)
    return dev, complex(lam)


def is_scalar_matrix(a, tol=None):
    """Return ``lam`` if ``a`` equals ``lam * I`` within tolerance, else None."""
    tol = tol or DEFAULT_TOLERANCES
    a = as_matrix(a)
    dev, lam = scalar_deviation(a)
    if dev > max(tol.tol_scalar, ABS_FLOOR):
        return None
    if abs(lam.imag) <= tol.tol_scalar and is_hermitian(a, tol):
        lam = complex(lam.real, 0.0)
    return lam


def canonical_phase(a):
    """Unit scalar that makes the largest-modulus entry of ``a`` real positive.

    Ties within a relative 1e-9 go to the first entry in row-major order so
    the choice is stable under rounding noise.
    """
    flat = np.ravel(a)
    mags = np.abs(flat)
    top = mags.max()
    if top == 0:
        return 1.0 + 0j
    idx = int(np.argmax(mags >= top * (1 - 1e-9)))
    z = flat[idx]
    return complex(np.conj(z) / abs(z))


def canonicalize(factors):
    """Phase-normalize each factor; return (new factors, displaced phase).

    ``prod(displaced) * kron(new) == kron(old)``.
    """
    out = []
    displaced = 1.0 + 0j
    for f in factors:
        c = canonical_phase(f)
        g = np.asarray(f, dtype=complex) * c
        # drop the rounding residue left on the pivot's imaginary part
        k = int(np.argmax(np.ravel(np.abs(g)) >= np.abs(g).max() * (1 - 1e-9))) if g.size else 0
        if g.size:
            g.flat[k] = abs(g.flat[k])
        out.append(g)
        displaced /= c
    return out, displaced


def polar_unitary(a):
    """Unitary polar factor of ``a`` (nearest unitary in Frobenius norm)."""
    w, s, vh = np.linalg.svd(a)
    return w @ vh
