import json

import numpy as np
import pytest
import yaml
from hypothesis import given, settings
from hypothesis import strategies as st

from gatesep.errors import ParseError
from gatesep.gates import CNOT, I2, X, random_unitary, seven_parameter_decomposition
from gatesep.io import (
    Verdict,
    emit_verdict,
    fmt_complex,
    format_matrix,
    format_tensor_terms,
    parse_matrix,
    parse_tensor_terms,
    parse_verdict,
)

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)


def test_parse_matrix_example():
    m = parse_matrix("# comment\ndim 2\n0.5+0.5j 0.5-0.5j  # row\n\n0.5-0.5j 0.5+0.5j\n")
    assert np.array_equal(m, np.array([[0.5 + 0.5j, 0.5 - 0.5j], [0.5 - 0.5j, 0.5 + 0.5j]]))


def test_format_matrix_has_no_negative_zero():
    text = format_matrix(-0.0 * np.eye(2))
    assert "-0" not in text
    assert text.splitlines()[0] == "dim 2"


@pytest.mark.parametrize("text,line,col", [
    ("", None, None),
    ("dimz 2\n1 0\n0 1\n", 1, 1),
    ("dim 2\n1 0\n0\n", 3, 1),
    ("dim 2\n1 0\n0 x1\n", 3, 3),
    ("dim 2\n1 0\n", 1, 1),
    ("dim 2\n1 0\n0 1\n1 1\n", 4, 1),
    ("dim 0\n", 1, 5),
])
def test_matrix_errors_carry_position(text, line, col):
    with pytest.raises(ParseError) as exc:
        parse_matrix(text, source="m.mat")
    assert (exc.value.line, exc.value.column) == (line, col)
    if line is not None:
        assert str(exc.value).startswith(f"m.mat:{line}:{col}:")


def test_matrix_round_trip(rng):
    u = random_unitary(4, rng)
    back = parse_matrix(format_matrix(u, comment="random\nunitary"))
    assert np.max(np.abs(back - u)) <= 1e-11


@settings(max_examples=50, deadline=None)
@given(finite, finite)
def test_twelve_digit_reparse(re, im):
    z = complex(re, im)
    back = complex(fmt_complex(z))
    assert abs(back - z) <= 1e-11 * max(abs(z), 1)


def test_tensor_terms_round_trip(rng):
    d = seven_parameter_decomposition(rng.normal(size=4), rng.normal(size=4), -0.3)
    back = parse_tensor_terms(format_tensor_terms(d))
    assert back.dims == d.dims and back.t == -0.3 and back.n_terms == 8
    assert np.max(np.abs(back.hamiltonian() - d.hamiltonian())) <= 1e-11


def test_tensor_terms_fixture(fixtures_dir):
    d = parse_tensor_terms((fixtures_dir / "spin_x_t0.25.tt").read_text())
    assert d.t == -0.25
    assert np.array_equal(d.hamiltonian(), np.kron(I2, X) + np.kron(X, I2))


TT_HEAD = "dims 2 2\nt 1\nterm\n"
ID = "1 0\n0 1\n"


@pytest.mark.parametrize("text,line", [
    ("dimz 2 2\n", 1),
    ("term\n", 1),
    ("dims 2 2\nfactor 1 dim 2\n" + ID, 2),
    (TT_HEAD + "factor 3 dim 2\n" + ID, 4),
    (TT_HEAD + "factor 1 dim 3\n", 4),
    (TT_HEAD + "factor 1 dim 2\n" + ID, 3),
    (TT_HEAD + "factor 1 dim 2\n" + ID + "factor 1 dim 2\n" + ID, 7),
    (TT_HEAD + "factor 1 dim 2\n0 1\n0 0\nfactor 2 dim 2\n" + ID, 3),
    ("dims 2 2\nt abc\n", 2),
    ("dims 2 2\nbogus\n", 2),
])
def test_tensor_term_errors(text, line):
    with pytest.raises(ParseError) as exc:
        parse_tensor_terms(text)
    assert exc.value.line == line


def test_tensor_terms_missing_pieces():
    with pytest.raises(ParseError):
        parse_tensor_terms("t 1\n")
    with pytest.raises(ParseError):
        parse_tensor_terms("dims 2\n")


def sample_verdicts(rng):
    u = random_unitary(2, rng)
    return [
        Verdict("separable", "rank_one", [u, np.eye(2)], np.exp(0.3j), 1.234567890123456e-15,
                warnings=["note"], reason="RANK_ONE_OK"),
        Verdict("not_separable", "schmidt_oracle", schmidt_spectrum=[2**0.5, 2**0.5, 0.0, 0.0], cut=1),
        Verdict("not_applicable", "commuting_sum", reason="MULTI_SCALAR_VIOLATION",
                offending_terms=[1], offending_factors=[1, 2]),
        Verdict("separable", "alg21_corrected", non_identity_index=2),
        Verdict("separable", "approx", [CNOT[:2, :2]], 1, 0.0, history=[1.0, 0.5, 1 / 3]),
    ]


@pytest.mark.parametrize("as_json", [False, True])
def test_verdict_round_trip(rng, as_json):
    for v in sample_verdicts(rng):
        text = emit_verdict(v, as_json)
        assert parse_verdict(text) == v
        assert parse_verdict(emit_verdict(parse_verdict(text), as_json)) == v


def test_verdict_json_is_single_line(rng):
    text = emit_verdict(sample_verdicts(rng)[0], as_json=True)
    assert text.count("\n") == 1
    d = json.loads(text)
    assert d["schema"] == 1 and d["verdict"] == "separable"
    assert yaml.safe_load(emit_verdict(sample_verdicts(rng)[0]))["schema"] == 1


def test_verdict_numbers_reparse(rng):
    v = sample_verdicts(rng)[0]
    back = parse_verdict(emit_verdict(v))
    assert abs(back.residual - v.residual) <= 1e-11 * v.residual
    assert abs(back.global_phase - v.global_phase) <= 1e-11
    for f, g in zip(back.factors, v.factors):
        assert np.max(np.abs(f - g)) <= 1e-11


def test_verdict_validation():
    with pytest.raises(ValueError):
        Verdict("maybe", "rank_one")
    with pytest.raises(ValueError):
        Verdict("separable", "guess")
    with pytest.raises(ValueError):
        Verdict("separable", "rank_one", factors=[np.eye(2)])
    with pytest.raises(ParseError):
        parse_verdict("schema: 2\nverdict: separable\nmethod: rank_one\n")
    with pytest.raises(ParseError):
        parse_verdict("- just a list")
