"""Factor a random 8x8 matrix as A = S R with both elimination schemes.

srdeco uses only the Van Loan reflectors plus one Gauss-like transform per
stage; srmsh folds the column into a single sh2 transform. The two factors
differ by a symplectic matrix whose four n x n blocks are all diagonal.
"""
import numpy as np

from symplectic_sr import check_structure, symplecticity_defect, srdeco, srmsh

rng = np.random.default_rng(1)
A = rng.standard_normal((8, 8))

for fac in (srdeco(A), srmsh(A)):
    print(f"{fac.algorithm}: ||A - SR|| = {fac.residual:.2e}, "
          f"||I - S^J S|| = {symplecticity_defect(fac.s):.2e}, "
          f"R J-triangular: {check_structure(fac.r).is_j_triangular}")

d1, d2 = srdeco(A), srmsh(A)
D = np.linalg.solve(d1.s, d2.s)
blocks_diag = np.tile(np.eye(4, dtype=bool), (2, 2))
print("S1^-1 S2 outside the block diagonals:", f"{np.abs(D[~blocks_diag]).max():.2e}")
