import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gatesep.errors import NonHermitianError, NonUnitaryError, SizeError
from gatesep.gates import I2, X, Y, Z, random_hermitian, random_unitary
from gatesep.linalg import (
    BranchCutWarning,
    Tolerances,
    canonicalize,
    dist_up_to_phase,
    expm_i_hermitian,
    is_scalar_matrix,
    kron,
    kron_all,
    optimal_phase,
    principal_log_unitary,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def series_expm(a, terms=60):
    """Plain Taylor sum, the independent oracle for exp."""
    out = np.eye(a.shape[0], dtype=complex)
    term = np.eye(a.shape[0], dtype=complex)
    for k in range(1, terms):
        term = term @ a / k
        out = out + term
    return out


def test_kron_identity():
    assert np.array_equal(kron(I2, I2), np.eye(4))


def test_kron_z_identity():
    assert np.array_equal(kron(Z, I2), np.diag([1, 1, -1, -1]))


def test_kron_xx_antidiagonal():
    expected = np.array([[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0]])
    assert np.array_equal(kron(X, X), expected)


def gaussian_int(rng, k):
    # integer entries keep every product exact in floating point
    return rng.integers(-9, 10, size=(k, k)) + 1j * rng.integers(-9, 10, size=(k, k))


def test_kron_entry_layout(rng):
    a = gaussian_int(rng, 3)
    b = gaussian_int(rng, 2)
    k = kron(a, b)
    for i, j, p, q in np.ndindex(3, 3, 2, 2):
        assert k[i * 2 + p, j * 2 + q] == a[i, j] * b[p, q]


def test_kron_size_limit(monkeypatch):
    with pytest.raises(SizeError):
        kron(np.eye(8), np.eye(8), limit=32)
    monkeypatch.setenv("GATESEP_MAX_DIM", "16")
    with pytest.raises(SizeError):
        kron_all([I2] * 5)
    assert kron_all([I2] * 4).shape == (16, 16)


def test_expm_zero_hamiltonian():
    assert np.allclose(expm_i_hermitian(np.zeros((3, 3)), 0.7), np.eye(3), atol=0)


def test_expm_sigma_z_quarter_turn():
    assert np.allclose(expm_i_hermitian(Z, math.pi / 2), np.diag([1j, -1j]), atol=1e-15)


def test_expm_sigma_x_against_series():
    t = 0.3
    got = expm_i_hermitian(X, t)
    assert np.max(np.abs(got - series_expm(1j * t * X))) <= 1e-12
    assert np.max(np.abs(got - (math.cos(t) * I2 + 1j * math.sin(t) * X))) <= 1e-12


def test_expm_rejects_non_hermitian():
    with pytest.raises(NonHermitianError):
        expm_i_hermitian(np.array([[0, 1], [0, 0]]), 1.0)


def test_log_identity():
    assert np.allclose(principal_log_unitary(np.eye(4)), 0, atol=1e-15)


def test_log_diagonal_phases():
    assert np.allclose(principal_log_unitary(np.diag([1, 1j])), np.diag([0, math.pi / 2]), atol=1e-15)


def test_log_round_trip_sigma_y():
    h = principal_log_unitary(expm_i_hermitian(Y, 0.4))
    assert np.allclose(h, 0.4 * Y, atol=1e-12)


def test_log_branch_cut_picks_plus_pi_and_warns():
    with pytest.warns(BranchCutWarning):
        h = principal_log_unitary(-np.eye(2))
    assert np.allclose(h, math.pi * np.eye(2), atol=1e-12)


def test_log_no_warning_off_cut():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        principal_log_unitary(expm_i_hermitian(Z, 1.0))


def test_log_rejects_non_unitary():
    with pytest.raises(NonUnitaryError):
        principal_log_unitary(np.diag([1.0, 2.0]))


def test_dist_examples(rng):
    u = random_unitary(4, rng)
    assert dist_up_to_phase(u, u) == pytest.approx(0, abs=1e-7)
    for theta in (0.3, math.pi, -2.0):
        assert dist_up_to_phase(u, np.exp(1j * theta) * u) == pytest.approx(0, abs=1e-7)
    assert dist_up_to_phase(I2, X) == pytest.approx(2.0, abs=1e-15)


def test_optimal_phase_attains_distance(rng):
    u, v = random_unitary(3, rng), random_unitary(3, rng)
    phi = optimal_phase(u, v)
    assert abs(abs(phi) - 1) < 1e-14
    assert np.linalg.norm(u - phi * v) == pytest.approx(dist_up_to_phase(u, v), abs=1e-12)
    # brute force over a fine phase grid never beats it
    grid = np.exp(1j * np.linspace(0, 2 * math.pi, 2001))
    assert min(np.linalg.norm(u - g * v) for g in grid) >= dist_up_to_phase(u, v) - 1e-12


def test_is_scalar_examples():
    assert is_scalar_matrix(3 * I2) == 3
    assert is_scalar_matrix(Z) is None
    assert is_scalar_matrix(2 * I2 + 1e-13 * X) == pytest.approx(2, abs=1e-12)
    assert is_scalar_matrix(2 * I2 + 1e-13 * X).imag == 0


def test_is_scalar_respects_tolerance():
    a = 2 * I2 + 1e-6 * X
    assert is_scalar_matrix(a) is None
    assert is_scalar_matrix(a, Tolerances(tol_scalar=1e-5)) is not None


def test_tolerances_must_be_positive():
    with pytest.raises(ValueError):
        Tolerances(tol_schmidt=0)


def test_canonicalize_preserves_product(rng):
    fs = [random_unitary(2, rng), random_unitary(3, rng)]
    new, displaced = canonicalize(fs)
    assert np.allclose(displaced * kron_all(new), kron_all(fs), atol=1e-13)
    for f in new:
        k = np.argmax(np.abs(f))
        z = f.flat[k]
        assert abs(z.imag) < 1e-14 and z.real > 0


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(1, 4))
def test_exp_log_round_trip(seed, n):
    rng = np.random.default_rng(seed)
    h = random_hermitian(2**n if n < 4 else 5, rng)
    h *= 3 / np.linalg.norm(h, 2)
    back = principal_log_unitary(expm_i_hermitian(h, 1.0))
    assert np.max(np.abs(back - h)) <= 1e-9


@settings(max_examples=40, deadline=None)
@given(seeds, st.sampled_from([2, 3, 8, 17, 64]))
def test_expm_is_unitary(seed, d):
    rng = np.random.default_rng(seed)
    u = expm_i_hermitian(random_hermitian(d, rng, scale=5), rng.normal())
    assert np.linalg.norm(u.conj().T @ u - np.eye(d)) <= 1e-10


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_kron_associative_and_mixed_product(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (gaussian_int(rng, k) for k in rng.integers(2, 5, size=3))
    assert np.array_equal(kron(kron(a, b), c), kron(a, kron(b, c)))
    k1, k2 = rng.integers(2, 5, size=2)
    a, b, c, d = (random_unitary(k, rng) for k in (k1, k2, k1, k2))
    assert np.max(np.abs(kron(a, b) @ kron(c, d) - kron(a @ c, b @ d))) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(seeds, st.sampled_from([2, 3, 4]))
def test_dist_pseudometric(seed, d):
    rng = np.random.default_rng(seed)
    u, v, w = (random_unitary(d, rng) for _ in range(3))
    assert dist_up_to_phase(u, v) == pytest.approx(dist_up_to_phase(v, u), abs=1e-12)
    assert dist_up_to_phase(u, w) <= dist_up_to_phase(u, v) + dist_up_to_phase(v, w) + 1e-10
    assert dist_up_to_phase(u, v) > 1e-6
    assert dist_up_to_phase(u, np.exp(1j * rng.uniform(0, 6.3)) * u) < 1e-6
