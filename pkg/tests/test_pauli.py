import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gatesep.criteria import TensorDecomposition
from gatesep.errors import NonHermitianError, ParseError, ShapeError
from gatesep.gates import CNOT, I2, X, random_hermitian
from gatesep.pauli import (
    PAULI,
    PauliSum,
    decompose,
    format_pauli_sum,
    parse_pauli_sum,
    synthesize,
    to_tensor_decomposition,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def brute_force_coefficients(m):
    """tr(P m) / 2^n over explicitly built Pauli strings."""
    n = int(np.log2(m.shape[0]))
    out = {}
    for letters in itertools.product("IXYZ", repeat=n):
        p = np.array([[1]], dtype=complex)
        for c in letters:
            p = np.kron(p, PAULI[c])
        c = np.trace(p @ m) / 2**n
        if abs(c) > 1e-14:
            out["".join(letters)] = c
    return out


def test_decompose_identity():
    assert decompose(np.eye(4), 2).terms == {"II": 1}


def test_decompose_spin_x_hamiltonian():
    hx = np.kron(I2, X) + np.kron(X, I2)
    assert decompose(hx, 2).terms == {"IX": 1, "XI": 1}


def test_decompose_cnot_matches_brute_force():
    got = decompose(CNOT, 2).terms
    assert got == pytest.approx(brute_force_coefficients(CNOT), abs=1e-15)
    assert got == pytest.approx({"II": 0.5, "IX": 0.5, "ZI": 0.5, "ZX": -0.5}, abs=1e-15)


def test_decompose_rejects_non_power_of_two():
    with pytest.raises(ShapeError):
        decompose(np.eye(3))
    with pytest.raises(ShapeError):
        decompose(np.eye(4), 3)


def test_synthesize_examples():
    assert np.array_equal(synthesize(PauliSum(2, {"II": 1})), np.eye(4))
    assert np.array_equal(synthesize(PauliSum(2, {"ZZ": 1})), np.diag([1, -1, -1, 1]))


def test_synthesize_decompose_random_8x8(rng):
    r = random_hermitian(8, rng)
    assert np.max(np.abs(synthesize(decompose(r)) - r)) <= 1e-12


def test_pruning_drops_tiny_coefficients():
    p = PauliSum(1, {"X": 1e-15, "Z": 1.0})
    assert list(p.terms) == ["Z"]


def test_to_tensor_decomposition_spin_x():
    d = to_tensor_decomposition(PauliSum(2, {"IX": 1, "XI": 1}))
    assert d.n_terms == 2
    (a, b), (c, e) = (t.factors for t in d.terms)
    assert np.array_equal(a, I2) and np.array_equal(b, X)
    assert np.array_equal(c, X) and np.array_equal(e, I2)


def test_to_tensor_decomposition_scales_first_factor():
    d = to_tensor_decomposition(PauliSum(2, {"II": 2.5}))
    (f1, f2), = (t.factors for t in d.terms)
    assert np.array_equal(f1, 2.5 * I2) and np.array_equal(f2, I2)


def test_to_tensor_decomposition_cnot():
    p = decompose(CNOT)
    d = to_tensor_decomposition(p)
    assert isinstance(d, TensorDecomposition) and d.n_terms == 4
    assert np.array_equal(d.hamiltonian(), synthesize(p))
    assert np.allclose(d.hamiltonian(), CNOT, atol=1e-15)


def test_to_tensor_decomposition_rejects_complex():
    with pytest.raises(NonHermitianError):
        to_tensor_decomposition(PauliSum(1, {"X": 1j}))


def test_text_format():
    p = decompose(np.kron(I2, X) + np.kron(X, I2))
    assert format_pauli_sum(p) == "1.0 IX\n1.0 XI\n"
    assert np.array_equal(synthesize(parse_pauli_sum("1.0 ZZ")), np.diag([1, -1, -1, 1]))
    q = parse_pauli_sum("# comment\n0.5 II\n-0.5 zx  # trailing\n0.25+0.5j XY\n")
    assert parse_pauli_sum(format_pauli_sum(q)).terms == q.terms


@pytest.mark.parametrize("text", ["1.0", "abc XX", "1.0 XQ", "1.0 X\n1.0 XX", ""])
def test_text_format_errors(text):
    with pytest.raises(ParseError):
        parse_pauli_sum(text)


@settings(max_examples=25, deadline=None)
@given(seeds, st.integers(1, 5))
def test_parseval(seed, n):
    rng = np.random.default_rng(seed)
    d = 2**n
    m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    p = decompose(m)
    assert abs(sum(abs(c) ** 2 for c in p.terms.values()) * d - np.linalg.norm(m) ** 2) <= 1e-10


@settings(max_examples=25, deadline=None)
@given(seeds, st.integers(1, 4))
def test_hermitian_input_has_real_coefficients(seed, n):
    p = decompose(random_hermitian(2**n, np.random.default_rng(seed)))
    assert max(abs(c.imag) for c in p.terms.values()) <= 1e-12
    assert p.is_hermitian()


@settings(max_examples=25, deadline=None)
@given(seeds, st.integers(1, 4))
def test_decompose_inverts_synthesize(seed, n):
    rng = np.random.default_rng(seed)
    letters = ["".join(w) for w in itertools.product("IXYZ", repeat=n)]
    chosen = rng.choice(len(letters), size=min(5, len(letters)), replace=False)
    p = PauliSum(n, {letters[k]: complex(*rng.normal(size=2)) for k in chosen})
    back = decompose(synthesize(p))
    assert back.terms.keys() == p.terms.keys()
    for key, c in p.terms.items():
        assert abs(back.terms[key] - c) <= 1e-12
