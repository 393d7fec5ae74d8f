"""Separability of ``exp(itH)`` read off from a tensor decomposition of ``H``.

``H = sum_k A_k^(1) x ... x A_k^(n)`` with Hermitian factors. A term whose
factors are all proportional to the identity except (at most) one, say
``A_j``, exponentiates to a local gate acting on subsystem ``j`` alone with
exponent ``delta * A_j``, where ``delta`` is the product of the other
factors' scalars. The checks here work on the (H, t) presentation; they say
nothing about other logarithms of the same unitary.

Sign convention: everything computes ``exp(+i t H)``. A gate written as
``exp(-i t H)`` corresponds to passing ``-t``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import prod

import numpy as np

from .errors import CriterionViolation, ReconstructionError, ShapeError
from .linalg import (
    DEFAULT_TOLERANCES,
    bound,
    canonicalize,
    expm_i_hermitian,
    fro,
    is_scalar_matrix,
    kron_all,
    optimal_phase,
    require_hermitian,
    scalar_deviation,
)


class Reason(enum.Enum):
    RANK_ONE_OK = "RANK_ONE_OK"
    MULTI_SCALAR_VIOLATION = "MULTI_SCALAR_VIOLATION"
    NONCOMMUTING_TERMS = "NONCOMMUTING_TERMS"
    COMMUTING_SUM_OK = "COMMUTING_SUM_OK"


@dataclass(frozen=True, eq=False)
class TensorTerm:
    """One elementary tensor ``A^(1) x ... x A^(n)``; factors must be Hermitian."""

    factors: tuple

    def __post_init__(self):
        fs = tuple(
            require_hermitian(f, name=f"factor {j}") for j, f in enumerate(self.factors)
        )
        if not fs:
            raise ShapeError("a tensor term needs at least one factor")
        object.__setattr__(self, "factors", fs)

    @property
    def dims(self):
        return tuple(f.shape[0] for f in self.factors)

    def matrix(self):
        return kron_all(self.factors)


@dataclass(frozen=True, eq=False)
class TensorDecomposition:
    dims: tuple
    terms: tuple
    t: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        terms = tuple(x if isinstance(x, TensorTerm) else TensorTerm(x) for x in self.terms)
        object.__setattr__(self, "terms", terms)
        if not terms:
            raise ShapeError("a decomposition needs at least one term")
        for k, term in enumerate(terms):
            if term.dims != self.dims:
                raise ShapeError(f"term {k} has factor dims {term.dims}, expected {self.dims}")

    @property
    def n_terms(self):
        return len(self.terms)

    @property
    def dim(self):
        return prod(self.dims)

    def hamiltonian(self):
        return sum(term.matrix() for term in self.terms)

    def unitary(self, t=None):
        return expm_i_hermitian(self.hamiltonian(), self.t if t is None else t)


@dataclass
class CriterionReport:
    separable: bool
    reason: Reason
    offending_term_indices: list = field(default_factory=list)
    offending_factor_indices: list = field(default_factory=list)
    offending_pairs: list = field(default_factory=list)
    warnings: list = field(default_factory=list)


@dataclass
class SeparationResult:
    """``global_phase * kron(local_factors)`` approximates the target with
    Frobenius error ``residual``."""

    local_factors: list
    global_phase: complex
    residual: float
    method: str = ""
    warnings: list = field(default_factory=list)
    history: list = field(default_factory=list)

    def reconstruct(self):
        return self.global_phase * kron_all(self.local_factors)


def _classify(term, tol):
    """Per-factor scalar (or None) plus borderline warnings."""
    scalars, notes = [], []
    for j, f in enumerate(term.factors):
        lam = is_scalar_matrix(f, tol)
        dev, _ = scalar_deviation(f)
        if 0.1 * tol.tol_scalar < dev < 10 * tol.tol_scalar:
            notes.append(f"factor {j} is borderline scalar (relative deviation {dev:.2e})")
        scalars.append(None if lam is None else lam.real)
    return scalars, notes


def _non_scalar(scalars):
    return [j for j, s in enumerate(scalars) if s is None]


def delta(term, j, tol=None):
    """Exponent weight of factor ``j``: product of the other factors' scalars
    when factor ``j`` is the non-scalar one, 0 when factor ``j`` is scalar."""
    tol = tol or DEFAULT_TOLERANCES
    scalars, _ = _classify(term, tol)
    bad = _non_scalar(scalars)
    if len(bad) > 1:
        raise CriterionViolation(
            f"factors {bad} are all non-scalar; delta is undefined", factor_indices=bad
        )
    if scalars[j] is not None:
        return 0.0
    return float(prod(s for k, s in enumerate(scalars) if k != j))


def check_rank_one(term, tol=None):
    tol = tol or DEFAULT_TOLERANCES
    scalars, notes = _classify(term, tol)
    bad = _non_scalar(scalars)
    if len(bad) > 1:
        return CriterionReport(False, Reason.MULTI_SCALAR_VIOLATION, [0], bad, warnings=notes)
    return CriterionReport(True, Reason.RANK_ONE_OK, warnings=notes)


def _finish(target, factors, phase, method, limit, notes=()):
    factors, displaced = canonicalize(factors)
    phase = phase * displaced
    residual = fro(phase * kron_all(factors) - target)
    if residual > limit:
        raise ReconstructionError(
            f"{method}: residual {residual:.3e} exceeds {limit:.1e}", residual=residual
        )
    return SeparationResult(factors, complex(phase), residual, method, list(notes))


def synthesize_rank_one(term, t=1.0, tol=None):
    """Local gates ``exp(i t delta_j A_j)`` and the phase for a single term."""
    tol = tol or DEFAULT_TOLERANCES
    report = check_rank_one(term, tol)
    if not report.separable:
        raise CriterionViolation(
            "term has more than one non-scalar factor",
            term_indices=[0],
            factor_indices=report.offending_factor_indices,
        )
    scalars, _ = _classify(term, tol)
    bad = _non_scalar(scalars)
    factors = []
    for j, f in enumerate(term.factors):
        w = 0.0 if scalars[j] is not None else prod(s for k, s in enumerate(scalars) if k != j)
        factors.append(expm_i_hermitian(f, t * w, tol))
    # an all-scalar term is a pure phase
    phase = np.exp(1j * t * prod(scalars)) if not bad else 1.0 + 0j
    target = expm_i_hermitian(term.matrix(), t, tol)
    return _finish(target, factors, phase, "rank_one", 1e-9 * target.shape[0], report.warnings)


def _commutes(a, b, tol):
    return fro(a @ b - b @ a) <= bound(tol.tol_hermitian, fro(a) * fro(b))


def check_commuting_sum(d, tol=None):
    """Sufficient condition: every term rank-one and all terms commuting."""
    tol = tol or DEFAULT_TOLERANCES
    notes, bad_terms, bad_factors = [], [], set()
    for k, term in enumerate(d.terms):
        r = check_rank_one(term, tol)
        notes += [f"term {k}: {w}" for w in r.warnings]
        if not r.separable:
            bad_terms.append(k)
            bad_factors.update(r.offending_factor_indices)
    if bad_terms:
        return CriterionReport(
            False, Reason.MULTI_SCALAR_VIOLATION, bad_terms, sorted(bad_factors), warnings=notes
        )
    mats = [term.matrix() for term in d.terms]
    pairs = [
        (k, l)
        for k in range(len(mats))
        for l in range(k + 1, len(mats))
        if not _commutes(mats[k], mats[l], tol)
    ]
    if pairs:
        involved = sorted({i for p in pairs for i in p})
        return CriterionReport(
            False, Reason.NONCOMMUTING_TERMS, involved, offending_pairs=pairs, warnings=notes
        )
    return CriterionReport(True, Reason.COMMUTING_SUM_OK, warnings=notes)


def synthesize_commuting_sum(d, tol=None):
    """Ordered products of per-term local exponentials, one per subsystem."""
    tol = tol or DEFAULT_TOLERANCES
    report = check_commuting_sum(d, tol)
    if not report.separable:
        raise CriterionViolation(
            f"commuting-sum criterion fails ({report.reason.value})",
            term_indices=report.offending_term_indices,
            factor_indices=report.offending_factor_indices,
        )
    factors = [np.eye(n, dtype=complex) for n in d.dims]
    for term in d.terms:
        for j, f in enumerate(term.factors):
            w = delta(term, j, tol)
            if w != 0.0:
                factors[j] = factors[j] @ expm_i_hermitian(f, d.t * w, tol)
    target = d.unitary()
    phase = optimal_phase(target, kron_all(factors))
    return _finish(target, factors, phase, "commuting_sum", 1e-8 * d.dim, report.warnings)


def separate_by_regrouping(d, tol=None):
    """Collect rank-one terms into one local Hamiltonian per subsystem.

    Operators acting on different subsystems always commute, so this needs
    no commutation between terms and covers sums the commuting-sum check
    rejects.
    """
    tol = tol or DEFAULT_TOLERANCES
    local = [np.zeros((n, n), dtype=complex) for n in d.dims]
    remainder = 0.0
    notes = []
    for k, term in enumerate(d.terms):
        scalars, w = _classify(term, tol)
        notes += [f"term {k}: {x}" for x in w]
        bad = _non_scalar(scalars)
        if len(bad) > 1:
            raise CriterionViolation(
                f"term {k} has non-scalar factors {bad}; regrouping not applicable",
                term_indices=[k],
                factor_indices=bad,
            )
        if bad:
            j = bad[0]
            local[j] += prod(s for i, s in enumerate(scalars) if i != j) * term.factors[j]
        else:
            remainder += prod(scalars)
    factors = [expm_i_hermitian(h, d.t, tol) for h in local]
    target = d.unitary()
    phase = np.exp(1j * d.t * remainder)
    return _finish(target, factors, phase, "regrouping", 1e-9 * d.dim, notes)
