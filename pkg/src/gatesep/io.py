"""Text formats: matrix files, tensor-term files and verdict documents.

Matrix file::

    # comment
    dim 2
    0.5+0.5j 0.5-0.5j
    0.5-0.5j 0.5+0.5j

Tensor-term file (``factor`` indices are 1-based)::

    dims 2 2
    t 0.25
    term
    factor 1 dim 2
    1 0
    0 1
    factor 2 dim 2
    0 1
    1 0

Numbers are written with 12 significant digits.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
import yaml

from .criteria import TensorDecomposition, TensorTerm
from .errors import ContractError, ParseError
from .linalg import as_matrix

SCHEMA = 1
VERDICTS = ("separable", "not_separable", "borderline", "not_applicable")
METHODS = (
    "rank_one",
    "commuting_sum",
    "regrouping",
    "schmidt_oracle",
    "alg21_paper",
    "alg21_corrected",
    "approx",
)


def fmt_float(x):
    return f"{float(x):.12g}"


def fmt_complex(z):
    z = complex(z)
    # adding 0.0 turns -0.0 into 0.0
    return f"{z.real + 0.0:.12g}{z.imag + 0.0:+.12g}j"


def round12(x):
    return float(fmt_float(x))


def _lines(text):
    """Yield (lineno, stripped content, raw line) for non-blank lines."""
    for lineno, raw in enumerate(text.splitlines(), 1):
        content = raw.split("#", 1)[0].strip()
        if content:
            yield lineno, content, raw


def _col(raw, token):
    return raw.find(token) + 1 if token in raw else 1


def _parse_entry(token, lineno, raw, source):
    try:
        return complex(token)
    except ValueError:
        raise ParseError(f"bad complex entry {token!r}", lineno, _col(raw, token), source) from None


def _parse_int(token, what, lineno, raw, source):
    try:
        v = int(token)
    except ValueError:
        raise ParseError(f"bad {what} {token!r}", lineno, _col(raw, token), source) from None
    if v < 1:
        raise ParseError(f"{what} must be >= 1", lineno, _col(raw, token), source)
    return v


def _read_rows(it, d, source, header_line):
    rows = []
    for _ in range(d):
        try:
            lineno, content, raw = next(it)
        except StopIteration:
            raise ParseError(f"expected {d} rows, got {len(rows)}", header_line, 1, source) from None
        toks = content.split()
        if len(toks) != d:
            raise ParseError(f"ragged row: {len(toks)} entries, expected {d}", lineno, 1, source)
        rows.append([_parse_entry(tok, lineno, raw, source) for tok in toks])
    m = np.array(rows, dtype=complex)
    if not np.all(np.isfinite(m)):
        raise ParseError("non-finite entry", header_line, 1, source)
    return m


def parse_matrix(text, source=None):
    it = _lines(text)
    try:
        lineno, content, raw = next(it)
    except StopIteration:
        raise ParseError("empty matrix file", None, None, source) from None
    toks = content.split()
    if len(toks) != 2 or toks[0] != "dim":
        raise ParseError("expected header 'dim <d>'", lineno, 1, source)
    d = _parse_int(toks[1], "dim", lineno, raw, source)
    m = _read_rows(it, d, source, lineno)
    extra = next(it, None)
    if extra is not None:
        raise ParseError("trailing content after matrix rows", extra[0], 1, source)
    return m


def format_matrix(m, comment=None):
    m = as_matrix(m)
    out = []
    if comment:
        out += [f"# {line}" for line in comment.splitlines()]
    out.append(f"dim {m.shape[0]}")
    out += [" ".join(fmt_complex(z) for z in row) for row in m]
    return "\n".join(out) + "\n"


def parse_tensor_terms(text, source=None):
    it = _lines(text)
    dims = None
    t = 1.0
    terms = []
    current = None
    pending = None
    for lineno, content, raw in it:
        toks = content.split()
        key = toks[0]
        if key == "dims":
            if dims is not None or terms:
                raise ParseError("'dims' must appear once, before any term", lineno, 1, source)
            if len(toks) < 2:
                raise ParseError("'dims' needs at least one dimension", lineno, 1, source)
            dims = [_parse_int(x, "dimension", lineno, raw, source) for x in toks[1:]]
        elif key == "t":
            if len(toks) != 2:
                raise ParseError("expected 't <real>'", lineno, 1, source)
            try:
                t = float(toks[1])
            except ValueError:
                raise ParseError(f"bad t {toks[1]!r}", lineno, _col(raw, toks[1]), source) from None
        elif key == "term":
            if dims is None:
                raise ParseError("'term' before 'dims' header", lineno, 1, source)
            if current is not None:
                terms.append(_close_term(current, dims, pending, source))
            current, pending = {}, lineno
        elif key == "factor":
            if current is None:
                raise ParseError("'factor' outside a term block", lineno, 1, source)
            if len(toks) != 4 or toks[2] != "dim":
                raise ParseError("expected 'factor <subsystem> dim <d>'", lineno, 1, source)
            j = _parse_int(toks[1], "subsystem", lineno, raw, source)
            d = _parse_int(toks[3], "dim", lineno, raw, source)
            if j > len(dims):
                raise ParseError(f"subsystem {j} > {len(dims)}", lineno, _col(raw, toks[1]), source)
            if d != dims[j - 1]:
                raise ParseError(
                    f"factor dim {d} != header dim {dims[j - 1]}", lineno, _col(raw, toks[3]), source
                )
            if j in current:
                raise ParseError(f"duplicate factor {j}", lineno, 1, source)
            current[j] = (_read_rows(it, d, source, lineno), lineno)
        else:
            raise ParseError(f"unexpected keyword {key!r}", lineno, 1, source)
    if dims is None:
        raise ParseError("missing 'dims' header", None, None, source)
    if current is not None:
        terms.append(_close_term(current, dims, pending, source))
    if not terms:
        raise ParseError("no terms", None, None, source)
    return TensorDecomposition(tuple(dims), tuple(terms), t)


def _close_term(current, dims, lineno, source):
    missing = [j for j in range(1, len(dims) + 1) if j not in current]
    if missing:
        raise ParseError(f"term is missing factors {missing}", lineno, 1, source)
    try:
        return TensorTerm([current[j][0] for j in range(1, len(dims) + 1)])
    except ContractError as exc:
        raise ParseError(str(exc), lineno, 1, source) from None


def format_tensor_terms(d):
    out = ["dims " + " ".join(str(x) for x in d.dims), f"t {fmt_float(d.t)}"]
    for term in d.terms:
        out.append("term")
        for j, f in enumerate(term.factors, 1):
            out.append(f"factor {j} dim {f.shape[0]}")
            out += [" ".join(fmt_complex(z) for z in row) for row in f]
    return "\n".join(out) + "\n"


@dataclass(eq=False)
class Verdict:
    """Machine-readable outcome of one CLI command.

    Indices in ``offending_terms``, ``offending_factors``, ``cut`` and
    ``non_identity_index`` are 1-based, matching the file formats.
    """

    verdict: str
    method: str
    factors: list = field(default_factory=list)
    global_phase: complex | None = None
    residual: float | None = None
    schmidt_spectrum: list | None = None
    warnings: list = field(default_factory=list)
    reason: str | None = None
    offending_terms: list | None = None
    offending_factors: list | None = None
    cut: int | None = None
    non_identity_index: int | None = None
    history: list | None = None
    schema: int = SCHEMA

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.factors and self.residual is None:
            raise ValueError("residual is required whenever factors are present")

    def to_dict(self):
        d = {"schema": self.schema, "verdict": self.verdict, "method": self.method}
        if self.reason is not None:
            d["reason"] = self.reason
        if self.factors:
            d["factors"] = [[[fmt_complex(z) for z in row] for row in np.asarray(f)] for f in self.factors]
        if self.global_phase is not None:
            g = complex(self.global_phase)
            d["global_phase"] = [round12(g.real), round12(g.imag)]
        if self.residual is not None:
            d["residual"] = round12(self.residual)
        if self.schmidt_spectrum is not None:
            d["schmidt_spectrum"] = [round12(s) for s in self.schmidt_spectrum]
        for key in ("offending_terms", "offending_factors", "cut", "non_identity_index"):
            if getattr(self, key) is not None:
                d[key] = getattr(self, key)
        if self.history is not None:
            d["history"] = [round12(h) for h in self.history]
        d["warnings"] = list(self.warnings)
        return d

    @classmethod
    def from_dict(cls, d):
        if d.get("schema") != SCHEMA:
            raise ParseError(f"unsupported verdict schema {d.get('schema')!r}")
        g = d.get("global_phase")
        return cls(
            verdict=d["verdict"],
            method=d["method"],
            factors=[np.array([[complex(z) for z in row] for row in f]) for f in d.get("factors", [])],
            global_phase=None if g is None else complex(g[0], g[1]),
            residual=d.get("residual"),
            schmidt_spectrum=d.get("schmidt_spectrum"),
            warnings=list(d.get("warnings", [])),
            reason=d.get("reason"),
            offending_terms=d.get("offending_terms"),
            offending_factors=d.get("offending_factors"),
            cut=d.get("cut"),
            non_identity_index=d.get("non_identity_index"),
            history=d.get("history"),
        )

    def __eq__(self, other):
        return isinstance(other, Verdict) and self.to_dict() == other.to_dict()


def emit_verdict(v, as_json=False):
    if as_json:
        return json.dumps(v.to_dict(), separators=(",", ":")) + "\n"
    return yaml.safe_dump(v.to_dict(), sort_keys=False, default_flow_style=None, width=120)


def parse_verdict(text):
    """Parse either emitted form (JSON is a YAML subset)."""
    try:
        d = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ParseError(f"bad verdict document: {exc}") from None
    if not isinstance(d, dict):
        raise ParseError("verdict document is not a mapping")
    return Verdict.from_dict(d)
