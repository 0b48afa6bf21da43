"""SR factorization A = S R with S symplectic and R upper J-triangular.

Two eliminations are implemented. :func:`srdeco` uses Van Loan Givens and
Householder transforms plus G(k, nu); :func:`srmsh` shares the orthogonal
part and replaces G by a symplectic Householder transform. Both stop on the
same inputs, which :func:`diagnose_existence` turns into an existence test.
"""
from dataclasses import dataclass, field
import warnings

import numpy as np

from .core import (
    as_square_2n,
    even_leading_minor,
    j_triangular_zero_mask,
    symplecticity_defect,
)
from .transforms import BreakdownError, gal, sh2, vlg, vlh

__all__ = [
    "NearBreakdownWarning",
    "SRFactors",
    "StageRecord",
    "ExistenceDiagnosis",
    "srdeco",
    "srmsh",
    "sr_factor",
    "verify_minor_identity",
    "diagnose_existence",
]

EPS_ABS = 1e-300
EPS_REL = 1e-14
TAU = 1e8


class NearBreakdownWarning(RuntimeWarning):
    pass


@dataclass
class SRFactors:
    s: np.ndarray
    r: np.ndarray
    residual: float
    symplecticity_defect: float
    near_breakdowns: list = field(default_factory=list)
    algorithm: str = "srdeco"


@dataclass(frozen=True)
class StageRecord:
    j: int
    r_jj: float
    r_njnj: float
    r_j1nj: float


@dataclass
class ExistenceDiagnosis:
    stages: list
    exists: bool
    failing_stage: int = None
    minor_checks: list = field(default_factory=list)
    nonsingular: bool = False
    corollary_consistent: bool = True

    @property
    def verdict(self):
        return "exists" if self.exists else f"fails-at-stage-{self.failing_stage}"


def _is_zero(x, scale, eps_abs, eps_rel):
    return abs(x) <= eps_abs + eps_rel * scale


def _run(A, algorithm, eps_abs, eps_rel, tau, mu=None, stage_hook=None, stop_at=None):
    """Core elimination loop, returning (S, R, near_breakdowns).

    ``stage_hook(j, R)`` is called with the working matrix after the column
    n+j orthogonal sweep of stage j (before the G / T step). When
    ``stop_at`` is set, the loop returns right after that hook at stage
    ``stop_at``.
    """
    R = as_square_2n(A).copy()
    n = R.shape[0] // 2
    S = np.eye(2 * n)
    near = []

    def update(t):
        nonlocal R, S
        R = t.left(R)
        S = t.right(S, inverse=True)

    for j in range(1, n + 1):
        for k in range(n, j - 1, -1):
            update(vlg(k, R[:, j - 1]))
        update(vlh(j, R[:, j - 1]))
        if j <= n - 1:
            col = n + j - 1
            for k in range(n, j, -1):
                update(vlg(k, R[:, col]))
            update(vlh(j + 1, R[:, col]))
        if stage_hook is not None:
            stage_hook(j, R)
        if stop_at == j:
            return S, R, near
        if j == n:
            break
        col = n + j - 1
        target, pivot = R[j, col], R[n + j - 1, col]
        scale = np.linalg.norm(R[:, col])
        if _is_zero(target, scale, eps_abs, eps_rel):
            R[j, col] = 0.0
            continue
        if _is_zero(pivot, scale, eps_abs, eps_rel):
            raise BreakdownError(
                f"{algorithm}: breakdown at stage {j}: r[{n + j},{n + j}] = 0 "
                f"while r[{j + 1},{n + j}] = {target:.6g}",
                step=j, pivot=pivot, target=target,
            )
        ratio = abs(target / pivot)
        if ratio >= tau:
            near.append((j, ratio))
            warnings.warn(f"{algorithm}: near-breakdown at stage {j} (ratio {ratio:.3g})",
                          NearBreakdownWarning, stacklevel=3)
        if algorithm == "srdeco":
            update(gal(j, R[:, col]))
        else:
            idx = np.r_[j - 1 : n, n + j - 1 : 2 * n]
            t = sh2(R[idx, col], mu=None if mu is None else mu(R[idx, col]))
            update(t.embed(n, idx))
        R[j, col] = 0.0
    return S, R, near


def sr_factor(A, algorithm="srdeco", tol=None, eps_abs=EPS_ABS, eps_rel=EPS_REL,
              tau=TAU, mu=None):
    """SR factorization by ``'srdeco'`` or ``'srmsh'``.

    ``mu`` optionally maps the local vector handed to the symplectic
    Householder step to its free parameter (srmsh only). Raises
    :class:`BreakdownError` when the factorization does not exist. If
    ``tol`` is given, a residual or symplecticity defect above ``tol`` times
    ||A||_2 raises ``ArithmeticError``.
    """
    if algorithm not in ("srdeco", "srmsh"):
        raise ValueError(f"unknown algorithm {algorithm!r}")
    A = as_square_2n(A)
    S, R, near = _run(A, algorithm, eps_abs, eps_rel, tau, mu=mu)
    # entries annihilated by construction carry only rounding noise
    R[j_triangular_zero_mask(A.shape[0] // 2)] = 0.0
    res = float(np.linalg.norm(A - S @ R, 2))
    out = SRFactors(S, R, res, symplecticity_defect(S), near, algorithm)
    if tol is not None:
        scale = max(np.linalg.norm(A, 2), 1.0)
        if res > tol * scale or out.symplecticity_defect > tol * scale:
            raise ArithmeticError(
                f"{algorithm}: residual {res:.3g} / defect {out.symplecticity_defect:.3g} "
                f"exceed tolerance {tol:g}")
    return out


def srdeco(A, tol=None, **kw):
    """SR factorization with Van Loan Givens/Householder and G(k, nu)."""
    return sr_factor(A, "srdeco", tol=tol, **kw)


def srmsh(A, tol=None, mu=None, **kw):
    """SR factorization with the G step replaced by a symplectic Householder."""
    return sr_factor(A, "srmsh", tol=tol, mu=mu, **kw)


def _stage_product(R, j):
    n = R.shape[0] // 2
    d = [R[i, i] * R[n + i, n + i] for i in range(j)]
    return float(np.prod(d) ** 2)


def verify_minor_identity(A, j):
    """Return (brute-force minor, squared diagonal product) at stage ``j``.

    The working matrix is taken after the orthogonal sweeps of stage j; the
    product runs over r_{i,i} r_{n+i,n+i} for i <= j.
    """
    A = as_square_2n(A)
    n = A.shape[0] // 2
    if not 1 <= j <= n:
        raise ValueError(f"j must lie in 1..{n}")
    _, R, _ = _run(A, "srdeco", EPS_ABS, EPS_REL, np.inf, stop_at=j)
    return even_leading_minor(A, j), _stage_product(R, j)


def diagnose_existence(A, eps_abs=EPS_ABS, eps_rel=EPS_REL):
    """Existence test for an SR factorization; never raises on breakdown."""
    A = as_square_2n(A)
    n = A.shape[0] // 2
    stages, minors = [], []

    def hook(j, R):
        col = n + j - 1
        target = R[j, col] if j < n else 0.0
        stages.append(StageRecord(j, float(R[j - 1, j - 1]), float(R[col, col]), float(target)))
        minors.append((j, even_leading_minor(A, j), _stage_product(R, j)))

    failing = None
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NearBreakdownWarning)
            _run(A, "srdeco", eps_abs, eps_rel, np.inf, stage_hook=hook)
    except BreakdownError as exc:
        failing = exc.step
    # numerical rank test for the nonsingular corollary
    sv = np.linalg.svd(A, compute_uv=False)
    nonsingular = bool(sv[-1] > 2 * A.shape[0] * np.finfo(float).eps * sv[0])
    consistent = True
    if nonsingular:
        scale = np.abs(A).max()
        all_nonzero = all(not _is_zero(s.r_njnj, scale, eps_abs, eps_rel) for s in stages)
        consistent = all_nonzero == (failing is None)
    return ExistenceDiagnosis(stages, failing is None, failing, minors, nonsingular, consistent)
