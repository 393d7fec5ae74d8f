"""Separability decided on the unitary itself.

The operator-Schmidt oracle realigns ``U`` across a cut so that a Kronecker
product ``A x B`` becomes the rank-one matrix ``vec(A) vec(B)^T``; a
Schmidt rank of one across every left-vs-rest cut is exactly the product
form. Unlike the Hamiltonian criteria it does not depend on which logarithm
of ``U`` one happens to hold, so it is the authoritative verdict here.
"""
from __future__ import annotations

import enum
import itertools
import string
import warnings
from dataclasses import dataclass, field
from math import prod

import numpy as np
from scipy.stats import unitary_group

from .criteria import SeparationResult
from .errors import BorderlineError, NotSeparableError, ShapeError
from .linalg import (
    DEFAULT_TOLERANCES,
    as_matrix,
    bound,
    canonicalize,
    dagger,
    fro,
    is_scalar_matrix,
    kron_all,
    optimal_phase,
    polar_unitary,
    principal_log_unitary,
    require_unitary,
)
from .pauli import qubit_count


@dataclass
class SchmidtSpectrum:
    cut: tuple
    singular_values: np.ndarray

    @property
    def ratio(self):
        s = self.singular_values
        if len(s) < 2 or s[0] == 0:
            return 0.0
        return float(s[1] / s[0])

    def rank(self, tol=None):
        tol = tol or DEFAULT_TOLERANCES
        s = self.singular_values
        return int(np.sum(s > tol.tol_schmidt * s[0])) if len(s) else 0

    def is_product(self, tol=None):
        tol = tol or DEFAULT_TOLERANCES
        return self.ratio <= tol.tol_schmidt

    def classify(self, tol=None):
        """'separable', 'borderline' or 'not_separable' for this cut."""
        tol = tol or DEFAULT_TOLERANCES
        r = self.ratio
        if r <= 0.1 * tol.tol_schmidt:
            return "separable"
        if r < 10 * tol.tol_schmidt:
            return "borderline"
        return "not_separable"


class Alg21Mode(enum.Enum):
    PAPER_FAITHFUL = "alg21_paper"
    CORRECTED = "alg21_corrected"


@dataclass
class Alg21Report:
    status: bool
    non_identity_index: int | None
    mode: Alg21Mode
    warnings: list = field(default_factory=list)


def realign(u, left_dim, right_dim):
    """Reshuffle so that ``R[(i,j),(k,l)] = u[(i,k),(j,l)]``."""
    u = as_matrix(u)
    d1, d2 = int(left_dim), int(right_dim)
    if u.shape[0] != d1 * d2:
        raise ShapeError(f"dim {u.shape[0]} != {d1} * {d2}")
    return u.reshape(d1, d2, d1, d2).transpose(0, 2, 1, 3).reshape(d1 * d1, d2 * d2)


def operator_schmidt(u, left_dim, right_dim):
    s = np.linalg.svd(realign(u, left_dim, right_dim), compute_uv=False)
    return SchmidtSpectrum(((int(left_dim),), (int(right_dim),)), s)


def bipartition_spectra(u, dims):
    """Schmidt spectra across every bipartition (subsets containing subsystem 0).

    Diagnostic only; the product decision needs just the left-vs-rest cuts.
    """
    u = as_matrix(u)
    dims = tuple(int(d) for d in dims)
    n = len(dims)
    t = u.reshape(dims + dims)
    out = {}
    for r in range(1, n):
        for left in itertools.combinations(range(n), r):
            if 0 not in left:
                continue
            right = tuple(i for i in range(n) if i not in left)
            perm = list(left) + list(right)
            p = t.transpose(perm + [n + i for i in perm]).reshape(u.shape)
            dl = prod(dims[i] for i in left)
            s = np.linalg.svd(realign(p, dl, u.shape[0] // dl), compute_uv=False)
            out[(left, right)] = SchmidtSpectrum((left, right), s)
    return out


def _leading_pair(u, d1, d2):
    r = realign(u, d1, d2)
    w, s, vh = np.linalg.svd(r)
    root = np.sqrt(s[0])
    a = (root * w[:, 0]).reshape(d1, d1)
    b = (root * vh[0, :]).reshape(d2, d2)
    return a, b, s


def split_bipartite(u, left_dim, right_dim, tol=None):
    """Factor a unitary as ``phase * A x B`` or raise ``NotSeparableError``."""
    tol = tol or DEFAULT_TOLERANCES
    u = require_unitary(u, tol, "u")
    d1, d2 = int(left_dim), int(right_dim)
    a, b, s = _leading_pair(u, d1, d2)
    spec = SchmidtSpectrum(((d1,), (d2,)), s)
    verdict = spec.classify(tol)
    if verdict == "not_separable":
        raise NotSeparableError(f"Schmidt rank > 1 (sigma2/sigma1 = {spec.ratio:.3e})", spec)
    if verdict == "borderline":
        raise BorderlineError(f"sigma2/sigma1 = {spec.ratio:.3e} inside tolerance band", spec)
    # a unitary product forces A^dag A = c I; move sqrt(c) over to B
    c = fro(a) ** 2 / d1
    a, b = a / np.sqrt(c), b * np.sqrt(c)
    for name, f in (("left", a), ("right", b)):
        dev = fro(dagger(f) @ f - np.eye(f.shape[0]))
        if dev > bound(tol.tol_schmidt, np.sqrt(f.shape[0])):
            raise BorderlineError(f"{name} factor is not unitary (deviation {dev:.3e})", spec)
    factors, _ = canonicalize([polar_unitary(a), polar_unitary(b)])
    phase = optimal_phase(u, kron_all(factors))
    residual = fro(phase * kron_all(factors) - u)
    return SeparationResult(factors, phase, residual, "schmidt_oracle")


def separate_full(u, dims, tol=None):
    """Peel subsystems left to right; raises with the blocking cut index."""
    tol = tol or DEFAULT_TOLERANCES
    u = require_unitary(u, tol, "u")
    dims = [int(d) for d in dims]
    if prod(dims) != u.shape[0]:
        raise ShapeError(f"dims {dims} do not multiply to {u.shape[0]}")
    factors = []
    rest = u
    for cut, d in enumerate(dims[:-1]):
        try:
            r = split_bipartite(rest, d, rest.shape[0] // d, tol)
        except NotSeparableError as exc:
            left = tuple(dims[: cut + 1])
            exc.spectrum.cut = (left, tuple(dims[cut + 1 :]))
            exc.cut_index = cut
            raise
        factors.append(r.local_factors[0])
        rest = r.local_factors[1]
    factors.append(rest)
    factors, _ = canonicalize(factors)
    target = kron_all(factors)
    phase = optimal_phase(u, target)
    return SeparationResult(factors, phase, fro(phase * target - u), "schmidt_oracle")


def is_separable(u, dims, tol=None):
    try:
        separate_full(u, dims, tol)
    except NotSeparableError:
        return False
    return True


def _blocks(h):
    m = h.shape[0] // 2
    return h[:m, :m], h[:m, m:], h[m:, :m], h[m:, m:]


def _literal_check(h, n, zero):
    """Literal transcription of the pseudocode, polarity included."""

    def is_zero(x):
        return fro(x) <= zero

    def is_scalar_block(x):
        return is_zero(x - np.trace(x) / x.shape[0] * np.eye(x.shape[0]))

    def check_pos_last_dim_n(x):
        if x.shape[0] < 4:
            return 1
        if all(is_scalar_block(c) for c in _blocks(x)):
            return 0
        return 1

    def pos_checker(x, index):
        if index == 1:
            return check_pos_last_dim_n(x)
        c11, c12, c21, c22 = _blocks(x)
        if not (is_zero(c12) and is_zero(c21)):
            return 0
        if not is_zero(c11 - c22):
            return 0
        if pos_checker(c11, index - 1):
            return 0
        return 1

    for index in range(1, n + 1):
        if pos_checker(h, index):
            return True, index - 1
    return False, None


def _acts_trivially_on(h, n, k, zero):
    a, b = 2**k, 2 ** (n - k - 1)
    t = h.reshape(a, 2, b, a, 2, b)
    off = fro(t[:, 0, :, :, 1, :]) + fro(t[:, 1, :, :, 0, :])
    diff = fro(t[:, 0, :, :, 0, :] - t[:, 1, :, :, 1, :])
    return off <= zero and diff <= zero


def algorithm21_check(u, n_qubits=None, mode=Alg21Mode.CORRECTED, tol=None):
    """Block-structure test on the principal logarithm of an n-qubit gate.

    CORRECTED reports whether the traceless generator acts on at most one
    qubit, and which. PAPER_FAITHFUL is a line-by-line transcription of the
    block-recursion pseudocode, return polarity included, kept for comparison.
    Both are sufficient-only: a separable gate whose logarithm couples
    qubits (e.g. Z x Z, with eigenvalues on the branch cut) reports False.
    """
    tol = tol or DEFAULT_TOLERANCES
    mode = Alg21Mode(mode)
    u = require_unitary(u, tol, "u")
    n = qubit_count(u.shape[0])
    if n_qubits is not None and n_qubits != n:
        raise ShapeError(f"dim {u.shape[0]} is not a {n_qubits}-qubit gate")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        h = principal_log_unitary(u, tol)
    notes = [str(w.message) for w in caught]
    zero = bound(tol.tol_hermitian, fro(h))
    if is_scalar_matrix(h, tol) is not None:
        return Alg21Report(True, None, mode, notes)
    if mode is Alg21Mode.PAPER_FAITHFUL:
        status, index = _literal_check(h, n, zero)
        return Alg21Report(status, index, mode, notes)
    h0 = h - np.trace(h) / h.shape[0] * np.eye(h.shape[0])
    active = [k for k in range(n) if not _acts_trivially_on(h0, n, k, zero)]
    if len(active) <= 1:
        return Alg21Report(True, active[0] if active else None, mode, notes)
    return Alg21Report(False, None, mode, notes)


def _einsum_partial(t, factors, k):
    """``E[i,j] = sum u[r,c] prod_{m != k} conj(V_m[r_m, c_m])`` with r_k=i, c_k=j."""
    n = len(factors)
    letters = iter(string.ascii_letters)
    rows = [next(letters) for _ in range(n)]
    cols = [next(letters) for _ in range(n)]
    operands = [t]
    subs = ["".join(rows + cols)]
    for m, f in enumerate(factors):
        if m != k:
            operands.append(f.conj())
            subs.append(rows[m] + cols[m])
    expr = ",".join(subs) + "->" + rows[k] + cols[k]
    return np.einsum(expr, *operands, optimize=True)


def _rank_one_start(u, dims):
    out = []
    rest = u
    for d in dims[:-1]:
        a, b, _ = _leading_pair(rest, d, rest.shape[0] // d)
        out.append(polar_unitary(a))
        rest = b
    out.append(polar_unitary(rest))
    return out


def _refine(u, t, dims, factors, max_iters, tol):
    obj = fro(u - kron_all(factors))
    history = [obj]
    slack = 1e-12 * max(fro(u), 1.0)
    for _ in range(max_iters):
        if len(dims) > 1:
            for k in range(len(dims)):
                factors[k] = polar_unitary(_einsum_partial(t, factors, k))
        new = fro(u - kron_all(factors))
        if new > obj + slack:
            raise RuntimeError(f"objective increased from {obj:.6e} to {new:.6e}")
        history.append(new)
        done = obj - new <= tol * max(obj, 1e-300) or new <= 1e-14
        obj = new
        if done:
            break
    return factors, history


def nearest_local_unitary(u, dims, max_iters=200, tol=1e-12, restarts=4, seed=0, check_tol=None):
    """Heuristic local-unitary approximation minimising ``||u - kron(V)||_F``.

    The first run starts from the leading Schmidt factors projected onto the
    unitary group; ``restarts`` further runs start from seeded Haar-random
    factors, since degenerate Schmidt spectra (CNOT) leave the first start
    on a saddle. Each run sweeps over subsystems replacing one factor by the
    polar factor of ``u`` contracted against the others; every update is
    optimal given the rest, so the objective never increases within a run.
    The best local optimum is returned, with that run's objective after
    every sweep in ``history``.
    """
    check_tol = check_tol or DEFAULT_TOLERANCES
    u = require_unitary(u, check_tol, "u")
    dims = [int(d) for d in dims]
    if prod(dims) != u.shape[0]:
        raise ShapeError(f"dims {dims} do not multiply to {u.shape[0]}")
    t = u.reshape(dims + dims)
    rng = np.random.default_rng(seed)
    starts = [_rank_one_start(u, dims)]
    starts += [[unitary_group.rvs(d, random_state=rng) if d > 1 else np.eye(1, dtype=complex)
                for d in dims] for _ in range(restarts)]
    best = None
    for start in starts:
        factors, history = _refine(u, t, dims, start, max_iters, tol)
        if best is None or history[-1] < best[1][-1]:
            best = factors, history
        if history[-1] <= 1e-14:
            break
    factors, history = best
    factors, _ = canonicalize(factors)
    target = kron_all(factors)
    phase = optimal_phase(u, target)
    return SeparationResult(
        factors, phase, fro(phase * target - u), "approx", history=history
    )
