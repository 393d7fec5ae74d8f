"""Regenerate the fixtures/ corpus (seeds are fixed; output is deterministic)."""
import sys
from pathlib import Path

import numpy as np

from gatesep.criteria import TensorDecomposition, TensorTerm
from gatesep.gates import NAMED, I2, X, Z, random_unitary, seven_parameter_decomposition, spin_decomposition
from gatesep.io import format_matrix, format_tensor_terms
from gatesep.linalg import expm_i_hermitian


def write(root, name, text, comment=None):
    if comment:
        text = "".join(f"# {line}\n" for line in comment.splitlines()) + text
    (root / name).write_text(text)


def main(root):
    root = Path(root)
    root.mkdir(exist_ok=True)
    for axis in "XYZ":
        for t in (0.25, 0.7, 1.3):
            d = spin_decomposition(axis, -t)
            write(root, f"spin_{axis.lower()}_t{t}.tt", format_tensor_terms(d),
                  f"U = exp(-i {t} H_{axis}), H_{axis} = I x s{axis} + s{axis} x I (file t is negated)")
    write(root, "xx_single.tt", format_tensor_terms(TensorDecomposition((2, 2), (TensorTerm([X, X]),), 0.4)),
          "single term sX x sX: both factors non-scalar")
    write(root, "xx_plus_identity.tt",
          format_tensor_terms(TensorDecomposition((2, 2), (TensorTerm([X, X]), TensorTerm([I2, I2])), 0.4)),
          "sX x sX + I x I: first term violates the rank-one condition")
    for seed in (0, 1):
        rng = np.random.default_rng(seed)
        a, b = rng.normal(size=4), rng.normal(size=4)
        write(root, f"seven_param_seed{seed}.tt", format_tensor_terms(seven_parameter_decomposition(a, b, 0.3)),
              f"7-parameter Hamiltonian, a and b ~ N(0,1) with seed {seed}")
    write(root, "bad_header.tt", "dimz 2 2\nt 1\n", "malformed header")
    for name, u in NAMED.items():
        write(root, f"{name}.mat", format_matrix(u))
    write(root, "zz.mat", format_matrix(np.kron(Z, Z)), "Z x Z: separable, principal log is not rank-one")
    write(root, "iz_exp.mat", format_matrix(expm_i_hermitian(np.kron(I2, Z))), "exp(i I x Z)")
    for seed in (1, 2):
        rng = np.random.default_rng(seed)
        u = np.kron(random_unitary(2, rng), random_unitary(2, rng))
        write(root, f"product_seed{seed}.mat", format_matrix(u), f"Haar U1 x U2, seed {seed}")
    rng = np.random.default_rng(3)
    u = np.kron(np.kron(random_unitary(2, rng), random_unitary(2, rng)), random_unitary(2, rng))
    write(root, "product3_seed3.mat", format_matrix(u), "Haar U1 x U2 x U3, seed 3")
    rng = np.random.default_rng(4)
    u = np.kron(random_unitary(2, rng), random_unitary(2, rng)) @ expm_i_hermitian(np.kron(Z, Z), 1e-3)
    write(root, "perturbed_product.mat", format_matrix(u), "(A x B) exp(i 1e-3 Z x Z), seed 4")
    hx = np.kron(I2, X) + np.kron(X, I2)
    write(root, "hx.mat", format_matrix(hx), "H_X = I x sX + sX x I")
    write(root, "zz.pauli", "1.0 ZZ\n")
    write(root, "manifest.txt", "\n".join([
        "# one subcommand per line; paths relative to this file",
        "check-h spin_x_t0.25.tt",
        "check-h xx_single.tt",
        "check-u cnot.mat --dims 2 2",
        "check-u product_seed1.mat --dims 2 2",
        "check-u zz.mat --mode alg21",
        "approx perturbed_product.mat --dims 2 2",
    ]) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parents[1] / "fixtures")
