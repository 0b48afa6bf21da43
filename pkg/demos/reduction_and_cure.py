"""Reduce the 6x6 fixture to J-Hessenberg form.

Plain JHESS stops at the first step: the pivot in row n+1 is zero while the
entry below the diagonal is not. MJHESS applies an orthogonal symplectic
cure there and finishes.
"""
import numpy as np

from symplectic_sr import BreakdownError, a6, jhess, mjhess

A = a6()
try:
    jhess(A)
except BreakdownError as exc:
    print(f"jhess: breakdown at step {exc.step}")

for kind in ("h2", "g2"):
    res = mjhess(A, cure_kind=kind)
    print(f"mjhess/{kind}: {len(res.cures)} cure(s), residual {res.residual:.2e}, "
          f"J-orthogonality {res.j_orthogonality_defect:.2e}")

np.set_printoptions(precision=3, suppress=True)
print(mjhess(A, cure_kind="g2").h)
