"""Sweep the penalty and watch the iteration kernel's spectrum move.

The ny x ny kernel K(beta) drives everything.  Its norm is
(gamma-1)/(gamma+1) with gamma = max(beta/m, ell/beta), and its
eigenvalues live in one of three enclosure shapes: two real clusters for
extreme penalties, a single real interval, and a complex disk plus
interval once beta enters [m, ell].  The report verifies the enclosure for
every computed eigenvalue.
"""

import numpy as np

from admmgmres import classify_and_verify, dtilde_extremes
from admmgmres.randgen import GenSpec, random_problem

problem = random_problem(GenSpec(nx=24, ny=24, nz=12, s=0.35, seed=12))
m, ell, kappa = dtilde_extremes(problem)
print(f"m = {m:.4f}, ell = {ell:.4f}, kappa = {kappa:.2f}")
print(f"balanced window [m, ell] = [{m:.3f}, {ell:.3f}]\n")

header = f"{'beta':>8}  {'gamma':>9}  {'|K|':>7}  {'regime':<17} {'complex':>7}  {'ok':>3}"
print(header)
for beta in (0.01, 0.1, 0.33, 0.5, 0.67, 1.0, 5.0, 50.0):
    rep = classify_and_verify(problem, beta)
    n_complex = int(np.sum(np.abs(rep.eigenvalues.imag) > 1e-8))
    print(f"{beta:8.2f}  {rep.gamma:9.2f}  {rep.k_norm:7.4f}  {rep.regime:<17} "
          f"{n_complex:7d}  {str(rep.enclosure_ok):>3}")

print("\nConditioning factors at the balanced penalty:")
rep = classify_and_verify(problem, (m * ell) ** 0.5)
kx = "n/a" if rep.kappa_X is None else f"{rep.kappa_X:.3f}"
print(f"  c1 = {rep.c1:.3f}, kappa_P = {rep.kappa_P:.3f}, "
      f"kappa_X = {kx}, kappa_M = {rep.kappa_M:.3f}")
print("\nJSON form (first 200 chars):")
print(rep.to_json()[:200] + " ...")
