"""Dense primitives for the symplectic space (R^{2n}, x^T J y).

Indices in this package follow the 1-based convention used for the
transforms and reduction steps (``k``, ``j``); arrays are of course indexed
from zero, so ``A[k - 1]`` is row ``k``.
"""
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DimensionError",
    "StructureReport",
    "as_square_2n",
    "half_order",
    "apply_j",
    "j_matrix",
    "symplectic_adjoint",
    "skew_inner",
    "permutation_p",
    "permutation_order",
    "j_triangular_zero_mask",
    "j_hessenberg_zero_mask",
    "pattern_defect",
    "symplecticity_defect",
    "check_structure",
    "even_leading_minor",
]


class DimensionError(ValueError):
    """Raised when an array does not have the even/square shape required."""


def half_order(m):
    m = int(m)
    if m % 2:
        raise DimensionError(f"dimension {m} is odd")
    return m // 2


def as_square_2n(A, name="A"):
    """Validate and return ``A`` as a float ndarray of shape (2n, 2n)."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {A.shape}")
    if A.shape[0] == 0 or A.shape[0] % 2:
        raise DimensionError(f"{name} must have even positive order, got {A.shape[0]}")
    if not np.all(np.isfinite(A)):
        raise ValueError(f"{name} has non-finite entries")
    return A


def apply_j(x):
    """Return ``J @ x`` without forming J.

    Works along the first axis, so ``x`` may be a vector or a (2n, m) block.
    (J x)[i] = x[n + i] and (J x)[n + i] = -x[i].
    """
    x = np.asarray(x, dtype=float)
    n = half_order(x.shape[0])
    out = np.empty_like(x)
    out[:n] = x[n:]
    out[n:] = -x[:n]
    return out


def j_matrix(n):
    """Dense J_{2n} = [[0, I], [-I, 0]]."""
    J = np.zeros((2 * n, 2 * n))
    J[:n, n:] = np.eye(n)
    J[n:, :n] = -np.eye(n)
    return J


def symplectic_adjoint(M):
    """Symplectic adjoint ``M^J = J_{2k}^T M^T J_{2n}`` of a 2n x 2k matrix.

    A 1-d input is treated as a vector and ``x^J = x^T J`` is returned as a
    1-d array.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim == 1:
        # x^T J = (J^T x)^T = -(J x)^T
        return -apply_j(M)
    half_order(M.shape[0])
    half_order(M.shape[1])
    # J_{2k}^T M^T J_{2n} = -(J_{2k} (J_{2n}^T M)^T) ... computed with block swaps
    MtJ = -apply_j(M).T  # M^T J_{2n}
    return -apply_j(MtJ)  # J_{2k}^T (M^T J) = -J_{2k} (M^T J)


def skew_inner(x, y):
    """Skew-symmetric form (x, y)_J = x^T J y."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DimensionError(f"incompatible vectors {x.shape} and {y.shape}")
    return float(x @ apply_j(y))


def permutation_order(n):
    """0-based column order (1, n+1, 2, n+2, ..., n, 2n) of the permutation P."""
    order = np.empty(2 * n, dtype=int)
    order[0::2] = np.arange(n)
    order[1::2] = np.arange(n, 2 * n)
    return order


def permutation_p(n):
    """Permutation matrix P = [e_1, e_{n+1}, e_2, e_{n+2}, ..., e_n, e_{2n}]."""
    return np.eye(2 * n)[:, permutation_order(n)]


def j_triangular_zero_mask(n):
    """Boolean mask of entries forced to zero in an upper J-triangular matrix."""
    lower = np.tril(np.ones((n, n), dtype=bool), -1)
    mask = np.zeros((2 * n, 2 * n), dtype=bool)
    mask[:n, :n] = lower
    mask[:n, n:] = lower
    mask[n:, :n] = np.tril(np.ones((n, n), dtype=bool), 0)
    mask[n:, n:] = lower
    return mask


def j_hessenberg_zero_mask(n):
    """Boolean mask of entries forced to zero in an upper J-Hessenberg matrix."""
    lower = np.tril(np.ones((n, n), dtype=bool), -1)
    mask = np.zeros((2 * n, 2 * n), dtype=bool)
    mask[:n, :n] = lower
    mask[:n, n:] = np.tril(np.ones((n, n), dtype=bool), -2)
    mask[n:, :n] = lower
    mask[n:, n:] = lower
    return mask


def pattern_defect(M, mask):
    """Largest magnitude among the entries of ``M`` selected by ``mask``."""
    vals = np.abs(np.asarray(M)[mask])
    return float(vals.max()) if vals.size else 0.0


def symplecticity_defect(S, ord=2):
    """``||S^J S - I||`` in the 2-norm (``ord=2``) or max-abs norm (``ord='max'``)."""
    S = np.asarray(S, dtype=float)
    E = symplectic_adjoint(S) @ S - np.eye(S.shape[1])
    if ord == "max":
        return float(np.abs(E).max())
    return float(np.linalg.norm(E, 2))


@dataclass(frozen=True)
class StructureReport:
    is_symplectic: bool
    symplectic_defect: float
    is_j_triangular: bool
    j_triangular_defect: float
    is_upper_j_hessenberg: bool
    j_hessenberg_defect: float
    is_unreduced: bool
    tolerance: float


def check_structure(M, tolerance=1e-12):
    """Report which structural patterns ``M`` satisfies, up to ``tolerance``.

    Defects are max-abs norms: the largest entry that the pattern requires
    to vanish, and ``max|S^J S - I|`` for symplecticity.
    """
    M = as_square_2n(M, "M")
    if tolerance < 0:
        raise ValueError("tolerance must be nonnegative")
    n = M.shape[0] // 2
    sym = symplecticity_defect(M, ord="max")
    tri = pattern_defect(M, j_triangular_zero_mask(n))
    hes = pattern_defect(M, j_hessenberg_zero_mask(n))
    is_hes = hes <= tolerance
    unreduced = False
    if is_hes:
        h21_diag = np.abs(np.diag(M[n:, :n]))
        sub = np.abs(np.diag(M[:n, n:], -1))
        unreduced = bool(np.prod(h21_diag) > tolerance and np.all(sub > tolerance))
    return StructureReport(
        is_symplectic=sym <= tolerance,
        symplectic_defect=sym,
        is_j_triangular=tri <= tolerance,
        j_triangular_defect=tri,
        is_upper_j_hessenberg=is_hes,
        j_hessenberg_defect=hes,
        is_unreduced=unreduced,
        tolerance=float(tolerance),
    )


def even_leading_minor(A, j):
    """Determinant of the leading 2j x 2j block of P^T A^T J A P.

    This is the brute-force side of the minor/diagonal-product identity for
    SR factorizations; the determinant is LAPACK's partially pivoted LU.
    """
    A = as_square_2n(A)
    n = A.shape[0] // 2
    if not 1 <= j <= n:
        raise ValueError(f"j must lie in 1..{n}, got {j}")
    AP = A[:, permutation_order(n)[: 2 * j]]
    G = AP.T @ apply_j(AP)
    return float(np.linalg.det(G))
