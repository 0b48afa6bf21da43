"""Reduction of a 2n x 2n matrix to upper J-Hessenberg form by symplectic similarity.

Two eliminations are available, ``'jhess'`` (Van Loan transforms plus the
non-orthogonal G(k, nu)) and ``'jhmsh'`` (a symplectic Householder step per
column). Either can stop on a breakdown: the pivot h_{n+j,j} vanishes while
h_{j+1,j} does not. With curing enabled, an orthogonal symplectic block
similarity is applied at the offending step and the step is executed again;
the same treatment is used when |h_{j+1,j} / h_{n+j,j}| reaches ``tau``
(near-breakdown). The cured variants are exposed as :func:`mjhess` and
:func:`jhm2sh`.
"""
from dataclasses import dataclass, field, replace
import warnings

import numpy as np

from .core import (
    as_square_2n,
    j_hessenberg_zero_mask,
    symplecticity_defect,
)
from .transforms import (
    BlockOrthogonal,
    BreakdownError,
    build_curing_reflector,
    gal,
    sh2,
    vlg,
    vlh,
)

__all__ = [
    "CureBudgetExhausted",
    "ReductionConfig",
    "ReductionEvent",
    "JHessResult",
    "Reduction",
    "reduce",
    "jhess",
    "jhmsh",
    "jhmsh2",
    "mjhess",
    "jhm2sh",
    "jhm2sh2",
    "cure_and_continue",
    "diag_equivalence",
    "DiagEquivalence",
    "similarity_residual",
    "established_zero_mask",
]

VARIANTS = ("jhess", "jhmsh")


class CureBudgetExhausted(RuntimeError):
    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


@dataclass(frozen=True)
class ReductionConfig:
    """Parameters of a reduction.

    ``cure_kind`` is ``'h2'``, ``'g2'`` or ``'block'`` (with ``block_size``).
    ``max_cures`` bounds the number of cures applied at any one step.
    """

    tau: float = 1e8
    eps_abs: float = 1e-300
    eps_rel: float = 1e-14
    cure: bool = False
    cure_kind: str = "h2"
    block_size: int = 2
    variant: str = "jhess"
    max_cures: int = 2

    def __post_init__(self):
        if not self.tau > 1:
            raise ValueError("tau must exceed 1")
        if self.max_cures < 1:
            raise ValueError("max_cures must be at least 1")
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.cure_kind not in ("h2", "g2", "block"):
            raise ValueError(f"unknown cure kind {self.cure_kind!r}")


@dataclass(frozen=True)
class ReductionEvent:
    kind: str  # breakdown | near_breakdown | cure_applied | fixup_applied
    step: int
    h_sub: float  # h_{j+1,j} (or the norm of the entries to eliminate)
    h_pivot: float  # h_{n+j,j}
    ratio: float
    cure_kind: str = None


@dataclass
class JHessResult:
    s: np.ndarray
    h: np.ndarray
    events: list
    residual: float
    j_orthogonality_defect: float
    variant: str
    first_column_normalized: bool

    @property
    def cures(self):
        return [e for e in self.events if e.kind == "cure_applied"]


def established_zero_mask(n, j):
    """Pattern zeros that must hold once step ``j`` has completed.

    These are the J-Hessenberg zeros of columns 1..j and n+1..n+j.
    """
    mask = j_hessenberg_zero_mask(n)
    keep = np.zeros(2 * n, dtype=bool)
    keep[:j] = True
    keep[n : n + j] = True
    return mask & keep[None, :]


class Reduction:
    """Stateful driver of one reduction; exposes the step structure.

    ``monitor(reduction, label)`` is called after every completed step and
    after every completed cure (primary plus fixup) for instrumentation.
    """

    def __init__(self, A, config=ReductionConfig(), S=None, monitor=None):
        self.A = as_square_2n(A)
        self.H = self.A.copy()
        self.n = self.A.shape[0] // 2
        self.S = np.eye(2 * self.n) if S is None else np.array(S, dtype=float)
        self.config = config
        self.events = []
        self.monitor = monitor
        self.completed = 0
        self.cured_before_first = False

    # -- transform plumbing ------------------------------------------------
    def _apply(self, t):
        self.H = t.similarity(self.H)
        self.S = t.right(self.S, inverse=True)

    def _is_zero(self, x, scale):
        return abs(x) <= self.config.eps_abs + self.config.eps_rel * scale

    def _notify(self, label):
        if self.monitor is not None:
            self.monitor(self, label)

    def _compress_column(self, j):
        """Van Loan sweeps leaving column j nonzero only in rows 1..j+1, n+1..n+j."""
        n, col = self.n, j - 1
        for k in range(n, j, -1):
            self._apply(vlg(k, self.H[:, col]))
        self._apply(vlh(j + 1, self.H[:, col]))

    def _sweep_column_nj(self, j):
        n, col = self.n, self.n + j - 1
        for k in range(n, j, -1):
            self._apply(vlg(k, self.H[:, col]))
        if j <= n - 2:
            self._apply(vlh(j + 1, self.H[:, col]))

    # -- breakdown tests ---------------------------------------------------
    def _classify(self, j, sub):
        """Return (kind, pivot, ratio) with kind in {None, 'breakdown', 'near_breakdown'}."""
        n = self.n
        col = self.H[:, j - 1]
        pivot = col[n + j - 1]
        scale = np.linalg.norm(col)
        if self._is_zero(sub, scale):
            return None, pivot, 0.0
        ratio = abs(sub) / abs(pivot) if pivot != 0 else np.inf
        if self._is_zero(pivot, scale):
            return "breakdown", pivot, ratio
        if ratio >= self.config.tau:
            return "near_breakdown", pivot, ratio
        return None, pivot, ratio

    # -- cure ----------------------------------------------------------------
    def cure(self, j):
        """Apply the orthogonal symplectic cure at step ``j`` (column j compressed)."""
        cfg = self.config
        refl = build_curing_reflector(self.H, j, cfg.cure_kind, cfg.block_size)
        h_sub, h_piv = self.H[j, j - 1], self.H[self.n + j - 1, j - 1]
        self._apply(BlockOrthogonal(j, refl.primary))
        self.events.append(ReductionEvent("cure_applied", j, float(h_sub), float(h_piv),
                                          float(abs(h_sub) / abs(h_piv)) if h_piv else np.inf,
                                          cfg.cure_kind))
        if refl.fixup is not None:
            self._apply(BlockOrthogonal(j, refl.fixup))
            self.H[j : j - 1 + refl.size, self.n + j - 2] = 0.0
            self.events.append(ReductionEvent("fixup_applied", j, float(h_sub), float(h_piv),
                                              0.0, cfg.cure_kind))
        else:
            self.cured_before_first = True
        self._notify(f"cure {j}")

    # -- steps ---------------------------------------------------------------
    def _handle(self, j, kind, sub, pivot, ratio, attempts):
        """Record an event; cure or stop. Returns True when step j must restart."""
        self.events.append(ReductionEvent(kind, j, float(sub), float(pivot), float(ratio)))
        if not self.config.cure:
            if kind == "breakdown":
                raise BreakdownError(
                    f"{self.config.variant}: breakdown at step {j}: h[{self.n + j},{j}] = 0 "
                    f"while the entries to eliminate have size {abs(sub):.6g}",
                    step=j, pivot=pivot, target=sub,
                )
            warnings.warn(f"near-breakdown at step {j} (ratio {ratio:.3g})", RuntimeWarning,
                          stacklevel=3)
            return False
        if attempts >= self.config.max_cures:
            if kind == "near_breakdown":
                # budget spent on an ill-conditioned but possible step: proceed
                return False
            raise CureBudgetExhausted(
                f"cure budget ({self.config.max_cures}) exhausted at step {j}", step=j)
        return True

    def step_jhess(self, j):
        n = self.n
        attempts = 0
        while True:
            self._compress_column(j)
            sub = self.H[j, j - 1]
            kind, pivot, ratio = self._classify(j, sub)
            if kind is None or not self._handle(j, kind, sub, pivot, ratio, attempts):
                break
            attempts += 1
            self.cure(j)
        if not self._is_zero(sub, np.linalg.norm(self.H[:, j - 1])):
            self._apply(gal(j, self.H[:, j - 1]))
        self._sweep_column_nj(j)
        self._finish(j)

    def step_jhmsh(self, j):
        n = self.n
        idx = np.r_[j - 1 : n, n + j - 1 : 2 * n]
        attempts = 0
        while True:
            a = self.H[idx, j - 1]
            m = n - j + 1
            rest = np.sqrt(a[1:m] @ a[1:m] + a[m + 1 :] @ a[m + 1 :])
            kind, pivot, ratio = self._classify(j, rest)
            if kind is None or not self._handle(j, kind, rest, pivot, ratio, attempts):
                break
            attempts += 1
            self._compress_column(j)
            self.cure(j)
        if not self._is_zero(rest, np.linalg.norm(self.H[:, j - 1])):
            self._apply(sh2(self.H[idx, j - 1]).embed(n, idx))
        self._sweep_column_nj(j)
        self._finish(j)

    def _finish(self, j):
        n = self.n
        # entries annihilated in this step carry only rounding noise
        self.H[j + 1 : n, n + j - 1] = 0.0
        self.H[n + j :, n + j - 1] = 0.0
        self.H[j:n, j - 1] = 0.0
        self.H[n + j :, j - 1] = 0.0
        self.completed = j
        self._notify(f"step {j}")

    def run(self, start=1):
        step = self.step_jhess if self.config.variant == "jhess" else self.step_jhmsh
        for j in range(start, self.n):
            step(j)
        return self.result()

    def result(self):
        S, H = self.S, self.H
        return JHessResult(
            s=S,
            h=H,
            events=list(self.events),
            residual=similarity_residual(self.A, S, H),
            j_orthogonality_defect=symplecticity_defect(S),
            variant=self.config.variant,
            first_column_normalized=bool(np.all(S[1:, 0] == 0.0)),
        )


def similarity_residual(A, S, H):
    """||A - S H S^{-1}||_2 with S^{-1} applied through a linear solve."""
    SH = S @ H
    recon = np.linalg.solve(S.T, SH.T).T
    return float(np.linalg.norm(A - recon, 2))


def reduce(A, config=ReductionConfig(), monitor=None):
    """Reduce ``A`` to upper J-Hessenberg form according to ``config``."""
    return Reduction(A, config, monitor=monitor).run()


def jhess(A, config=None, **kw):
    """Uncured reduction with G(k, nu) steps; raises on breakdown."""
    cfg = replace(config or ReductionConfig(), variant="jhess", cure=False, **kw)
    return reduce(A, cfg)


def jhmsh(A, config=None, **kw):
    """Uncured reduction with symplectic Householder steps; raises on breakdown."""
    cfg = replace(config or ReductionConfig(), variant="jhmsh", cure=False, **kw)
    return reduce(A, cfg)


def mjhess(A, config=None, monitor=None, **kw):
    """JHESS with breakdown and near-breakdown curing."""
    cfg = replace(config or ReductionConfig(), variant="jhess", cure=True, **kw)
    return reduce(A, cfg, monitor=monitor)


def jhm2sh(A, config=None, monitor=None, **kw):
    """JHMSH with breakdown and near-breakdown curing."""
    cfg = replace(config or ReductionConfig(), variant="jhmsh", cure=True, **kw)
    return reduce(A, cfg, monitor=monitor)


# the second JHMSH ordering is not specified; both names share one elimination
jhmsh2 = jhmsh
jhm2sh2 = jhm2sh


def cure_and_continue(reduction, j):
    """Cure step ``j`` of an in-progress reduction and execute the step again.

    ``reduction`` must have completed steps 1..j-1.
    """
    if reduction.completed != j - 1:
        raise ValueError(f"reduction is at step {reduction.completed + 1}, not {j}")
    reduction._compress_column(j)
    reduction.cure(j)
    step = reduction.step_jhess if reduction.config.variant == "jhess" else reduction.step_jhmsh
    step(j)
    return reduction


@dataclass
class DiagEquivalence:
    d: np.ndarray
    c: np.ndarray
    f: np.ndarray
    pattern_defect: float
    inverse_defect: float
    similarity_defect: float


def diag_equivalence(s1, h1, s2, h2):
    """Relate two reductions of one matrix by D = S1^{-1} S2.

    Returns the diagonals C and F of the expected block form
    D = [[C, F], [0, C^{-1}]], the largest entry of D outside that form,
    the deviation of the lower-right diagonal from 1/C, and
    ||D^{-1} H1 D - H2||_2.
    """
    s1, h1, s2, h2 = (as_square_2n(x) for x in (s1, h1, s2, h2))
    n = s1.shape[0] // 2
    if np.linalg.cond(s1) > 1 / np.finfo(float).eps:
        raise np.linalg.LinAlgError("S1 is numerically singular")
    D = np.linalg.lstsq(s1, s2, rcond=None)[0]
    c = np.diag(D[:n, :n]).copy()
    f = np.diag(D[:n, n:]).copy()
    off = D.copy()
    idx = np.arange(n)
    off[idx, idx] = 0.0
    off[idx, n + idx] = 0.0
    off[n + idx, n + idx] = 0.0
    inv_def = float(np.abs(np.diag(D[n:, n:]) * c - 1.0).max())
    sim = float(np.linalg.norm(np.linalg.solve(D, h1 @ D) - h2, 2))
    return DiagEquivalence(D, c, f, float(np.abs(off).max()), inv_def, sim)
