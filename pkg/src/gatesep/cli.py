"""Command-line driver.

Exit codes: 0 separable / success, 1 negative or inconclusive verdict,
2 input or contract error.

All commands compute ``exp(+i t H)``; a gate written ``exp(-i t H)`` is
entered with ``t`` negated.
"""
from __future__ import annotations

import argparse
import os
import shlex
import sys
import warnings

import numpy as np
import yaml

from . import __version__
from .criteria import (
    Reason,
    check_commuting_sum,
    check_rank_one,
    separate_by_regrouping,
    synthesize_commuting_sum,
    synthesize_rank_one,
)
from .errors import BorderlineError, GateSepError, NotSeparableError, ParseError
from .io import Verdict, emit_verdict, fmt_float, format_matrix, format_tensor_terms, parse_matrix, parse_tensor_terms
from .linalg import Tolerances, near_branch_cut, require_unitary
from .pauli import decompose, format_pauli_sum, parse_pauli_sum, qubit_count, synthesize, to_tensor_decomposition
from .separator import (
    Alg21Mode,
    algorithm21_check,
    bipartition_spectra,
    is_separable,
    nearest_local_unitary,
    operator_schmidt,
    separate_full,
)
from .zassenhaus import multi_term_scalar_tail_check, truncated_product_residual, zassenhaus_terms

EXIT = {"separable": 0, "not_separable": 1, "borderline": 1, "not_applicable": 1}
ORACLE_CROSSCHECK_MAX_DIM = 256
BRANCH_NOTE = (
    "gate has eigenvalue -1: its principal logarithm is one of several, so "
    "Hamiltonian-side criteria on it are sufficient-only; the Schmidt oracle is authoritative"
)


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_matrix(path):
    return parse_matrix(_read(path), source=path)


def _dims(args, dim):
    if args.dims:
        if int(np.prod(args.dims)) != dim:
            raise ParseError(f"--dims {args.dims} do not multiply to {dim}")
        return list(args.dims)
    return [2] * qubit_count(dim)


def check_hamiltonian(d, tol):
    """Run the Hamiltonian criteria on one decomposition; return a Verdict."""
    if d.n_terms == 1:
        report = check_rank_one(d.terms[0], tol)
        if report.separable:
            r = synthesize_rank_one(d.terms[0], d.t, tol)
            return Verdict("separable", "rank_one", r.local_factors, r.global_phase, r.residual,
                           warnings=report.warnings, reason=report.reason.value)
        v = Verdict("not_separable", "rank_one", warnings=report.warnings, reason=report.reason.value,
                    offending_terms=[1], offending_factors=[j + 1 for j in report.offending_factor_indices])
    else:
        report = check_commuting_sum(d, tol)
        if report.separable:
            r = synthesize_commuting_sum(d, tol)
            return Verdict("separable", "commuting_sum", r.local_factors, r.global_phase, r.residual,
                           warnings=report.warnings, reason=report.reason.value)
        if report.reason is Reason.NONCOMMUTING_TERMS:
            r = separate_by_regrouping(d, tol)
            note = f"terms {[i + 1 for i in report.offending_term_indices]} do not commute; regrouped per subsystem"
            return Verdict("separable", "regrouping", r.local_factors, r.global_phase, r.residual,
                           warnings=report.warnings + r.warnings + [note], reason=report.reason.value)
        v = Verdict("not_applicable", "commuting_sum", warnings=report.warnings, reason=report.reason.value,
                    offending_terms=[i + 1 for i in report.offending_term_indices],
                    offending_factors=[j + 1 for j in report.offending_factor_indices])
    if d.dim <= ORACLE_CROSSCHECK_MAX_DIM and is_separable(d.unitary(), d.dims, tol):
        v.warnings.append(
            "the Schmidt oracle finds exp(itH) to be a product at this t; the criterion concerns "
            "the (H, t) presentation, not the unitary"
        )
    return v


def check_unitary(u, dims, mode, tol, all_cuts=False):
    """Oracle or block-structure verdict on a unitary; second value is the spectra."""
    u = require_unitary(u, tol, "input")
    if mode == "oracle":
        notes = [BRANCH_NOTE] if near_branch_cut(u) else []
        spectra = list(bipartition_spectra(u, dims).values()) if all_cuts and len(dims) > 1 else []
        try:
            r = separate_full(u, dims, tol)
        except NotSeparableError as exc:
            kind = "borderline" if isinstance(exc, BorderlineError) else "not_separable"
            spectra = spectra or [exc.spectrum]
            return Verdict(kind, "schmidt_oracle", schmidt_spectrum=list(exc.spectrum.singular_values),
                           warnings=notes + [str(exc)], cut=exc.cut_index + 1), spectra
        first = operator_schmidt(u, dims[0], u.shape[0] // dims[0]) if len(dims) > 1 else None
        spectra = spectra or ([first] if first else [])
        return Verdict("separable", "schmidt_oracle", r.local_factors, r.global_phase, r.residual,
                       schmidt_spectrum=None if first is None else list(first.singular_values),
                       warnings=notes), spectra
    alg_mode = Alg21Mode.PAPER_FAITHFUL if mode == "alg21-paper" else Alg21Mode.CORRECTED
    rep = algorithm21_check(u, mode=alg_mode, tol=tol)
    notes = list(rep.warnings)
    if alg_mode is Alg21Mode.PAPER_FAITHFUL:
        notes.append("literal mode keeps the pseudocode's status polarity; use --mode alg21 for the corrected check")
    idx = None if rep.non_identity_index is None else rep.non_identity_index + 1
    if rep.status:
        return Verdict("separable", alg_mode.value, warnings=notes, non_identity_index=idx), []
    notes.append("the block-structure check is sufficient-only on the principal logarithm; --mode oracle decides the unitary")
    return Verdict("not_applicable", alg_mode.value, warnings=notes), []


def _tolerances(args):
    return Tolerances(args.tol_hermitian, args.tol_unitary, args.tol_scalar, args.tol_schmidt)


def _emit(v, args, out):
    out.write(emit_verdict(v, as_json=args.json))


def cmd_check_h(args, out):
    d = parse_tensor_terms(_read(args.file), source=args.file)
    v = check_hamiltonian(d, _tolerances(args))
    _emit(v, args, out)
    return EXIT[v.verdict]


def cmd_check_u(args, out):
    u = _load_matrix(args.file)
    dims = _dims(args, u.shape[0])
    tol = _tolerances(args)
    v, spectra = check_unitary(u, dims, args.mode, tol, all_cuts=args.all_cuts)
    if args.plot and spectra:
        from .plotting import plot_schmidt_spectra

        plot_schmidt_spectra(spectra, args.plot, title=os.path.basename(args.file))
    _emit(v, args, out)
    return EXIT[v.verdict]


def cmd_approx(args, out):
    u = _load_matrix(args.file)
    dims = _dims(args, u.shape[0])
    tol = _tolerances(args)
    r = nearest_local_unitary(u, dims, args.max_iters, args.tol, restarts=args.restarts,
                              seed=args.seed, check_tol=tol)
    exact = r.residual <= 1e-9 * u.shape[0]
    v = Verdict("separable" if exact else "not_applicable", "approx", r.local_factors, r.global_phase,
                r.residual, history=r.history,
                warnings=[] if exact else ["local optimum of ||U - kron(V)||_F; not certified global"])
    if args.plot:
        from .plotting import plot_history

        plot_history(r.history, args.plot, title=os.path.basename(args.file))
    _emit(v, args, out)
    return 0


def cmd_pauli(args, out):
    text = _read(args.file)
    first = next((ln.split("#", 1)[0].split() for ln in text.splitlines() if ln.split("#", 1)[0].strip()), [])
    if first and first[0] == "dim":
        p = decompose(parse_matrix(text, source=args.file))
    else:
        p = parse_pauli_sum(text, source=args.file)
    if args.to == "pauli":
        out.write(format_pauli_sum(p))
    elif args.to == "matrix":
        out.write(format_matrix(synthesize(p)))
    else:
        out.write(format_tensor_terms(to_tensor_decomposition(p, args.t)))
    return 0


def cmd_zassenhaus(args, out):
    mats = [_load_matrix(f) for f in args.files]
    if args.times_i:
        mats = [1j * m for m in mats]
    if args.action == "residual":
        if len(mats) != 2:
            raise ParseError("'residual' takes exactly two matrix files")
        z = zassenhaus_terms(*mats)
        doc = {
            "residual": float(fmt_float(truncated_product_residual(*mats))),
            "c2_norm": float(fmt_float(np.linalg.norm(z.c2))),
            "c3_norm": float(fmt_float(np.linalg.norm(z.c3))),
        }
        code = 0
    else:
        ok, lam = multi_term_scalar_tail_check(mats, _tolerances(args))
        doc = {"scalar_tail": ok,
               "lambda": None if lam is None else [float(fmt_float(lam.real)), float(fmt_float(lam.imag))]}
        code = 0 if ok else 1
    if args.json:
        import json

        out.write(json.dumps(doc, separators=(",", ":")) + "\n")
    else:
        out.write(yaml.safe_dump(doc, sort_keys=False))
    return code


def cmd_batch(args, out):
    base = os.path.dirname(os.path.abspath(args.manifest))
    parser = build_parser()
    worst = 0
    first = True
    for lineno, raw in enumerate(_read(args.manifest).splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        sub = parser.parse_args(_global_flags(args) + shlex.split(line))
        if sub.command == "batch":
            raise ParseError("nested batch manifests are not supported", lineno, 1, args.manifest)
        for attr in ("file", "plot"):
            if getattr(sub, attr, None):
                setattr(sub, attr, os.path.join(base, getattr(sub, attr)))
        if getattr(sub, "files", None):
            sub.files = [os.path.join(base, f) for f in sub.files]
        sub.json = sub.json or args.json
        if not sub.json:
            out.write(("" if first else "---\n") + f"# {line}\n")
        first = False
        worst = max(worst, _dispatch(sub, out))
    return worst


def _global_flags(args):
    return [
        f"--tol-hermitian={args.tol_hermitian}",
        f"--tol-unitary={args.tol_unitary}",
        f"--tol-scalar={args.tol_scalar}",
        f"--tol-schmidt={args.tol_schmidt}",
    ]


def build_parser():
    p = argparse.ArgumentParser(
        prog="gatesep", description="Tensor-product separability of quantum gates.", allow_abbrev=False
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    defaults = Tolerances()
    for name in ("hermitian", "unitary", "scalar", "schmidt"):
        p.add_argument(f"--tol-{name}", type=float, default=getattr(defaults, f"tol_{name}"),
                       metavar="X", help=f"override tol_{name}")
    sp = p.add_subparsers(dest="command", required=True)

    def common(q):
        q.add_argument("--json", action="store_true", help="single-line JSON instead of YAML")

    q = sp.add_parser("check-h", help="criteria on a tensor-term Hamiltonian file")
    q.add_argument("file")
    common(q)
    q.set_defaults(func=cmd_check_h)

    q = sp.add_parser("check-u", help="decide separability of a unitary matrix file")
    q.add_argument("file")
    q.add_argument("--dims", type=int, nargs="+", help="subsystem dimensions (default: qubits)")
    q.add_argument("--mode", choices=("oracle", "alg21", "alg21-paper"), default="oracle")
    q.add_argument("--all-cuts", action="store_true", help="report spectra across every bipartition")
    q.add_argument("--plot", metavar="PNG", help="write a Schmidt-spectrum figure")
    common(q)
    q.set_defaults(func=cmd_check_u)

    q = sp.add_parser("approx", help="nearest product of local unitaries")
    q.add_argument("file")
    q.add_argument("--dims", type=int, nargs="+")
    q.add_argument("--max-iters", type=int, default=200)
    q.add_argument("--tol", type=float, default=1e-12, help="relative-improvement stop")
    q.add_argument("--restarts", type=int, default=4)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--plot", metavar="PNG", help="write the objective history figure")
    common(q)
    q.set_defaults(func=cmd_approx)

    q = sp.add_parser("pauli", help="convert between matrix, Pauli-sum and tensor-term forms")
    q.add_argument("file")
    q.add_argument("--to", choices=("pauli", "matrix", "terms"), default="pauli")
    q.add_argument("--t", type=float, default=1.0, help="t written into --to terms output")
    q.set_defaults(func=cmd_pauli, json=False)

    q = sp.add_parser("zassenhaus", help="truncated Zassenhaus residual / scalar-tail check")
    q.add_argument("action", choices=("residual", "tail"))
    q.add_argument("files", nargs="+")
    q.add_argument("--times-i", action="store_true", help="multiply every input by i")
    common(q)
    q.set_defaults(func=cmd_zassenhaus)

    q = sp.add_parser("batch", help="run one subcommand per manifest line")
    q.add_argument("manifest")
    common(q)
    q.set_defaults(func=cmd_batch)
    return p


def _dispatch(args, out):
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return args.func(args, out)
    except (GateSepError, ValueError, OSError) as exc:
        print(f"gatesep {args.command}: error: {exc}", file=sys.stderr)
        return 2


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    return _dispatch(args, out)


if __name__ == "__main__":
    sys.exit(main())
