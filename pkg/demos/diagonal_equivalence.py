"""Two J-Hessenberg reductions of the same matrix with the same first column
agree up to a diagonal symplectic similarity D = diag(C, C^-1) + off-diagonal F.
"""
import numpy as np

from symplectic_sr import a12, diag_equivalence, jhm2sh, mjhess

A = a12()
r1, r2 = mjhess(A), jhm2sh(A)
eq = diag_equivalence(r1.s, r1.h, r2.s, r2.h)
np.set_printoptions(precision=4, suppress=True)
print("C =", eq.c)
print("F =", eq.f)
print(f"||D^-1 H1 D - H2||_2 = {eq.similarity_defect:.2e}")
