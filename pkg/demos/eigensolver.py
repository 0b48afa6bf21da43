"""Eigenvalues of a random matrix by the explicit SR iteration, checked
against LAPACK.
"""
import numpy as np

from symplectic_sr import EigenConfig, solve_spectrum

rng = np.random.default_rng(3)
A = rng.standard_normal((10, 10))
sp = solve_spectrum(A, EigenConfig(seed=3))
ref = np.linalg.eigvals(A)

print(f"converged: {sp.converged} after {sp.iterations} iterations, {sp.restarts} restarts")
for lam in sorted(sp.eigenvalues, key=lambda z: (z.real, z.imag)):
    gap = np.abs(ref - lam).min()
    print(f"  {lam.real:+.10f} {lam.imag:+.10f}i   |lambda - lapack| = {gap:.1e}")
print(f"||S^J A S - M||_2 = {sp.similarity_residual:.2e}")
