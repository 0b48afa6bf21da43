"""Explicit SR iteration for the eigenvalues of a real 2n x 2n matrix.

The matrix is first brought to upper J-Hessenberg form ``M = S^{-1} A S``
(cured reduction). Each SR step factors a shift polynomial
``p(M) = S_k R_k`` with :func:`~symplectic_sr.srfact.srmsh` and replaces M
by ``S_k^J M S_k``, which keeps the J-Hessenberg form. The entries
h_{i+1,n+i} are watched for deflation; once every active window has half
order one, the eigenvalues come from 2 x 2 closed forms.

When the inner factorization breaks down (or nearly does) at stage i, the
current window receives the orthogonal symplectic similarity
diag(I, H_l, I) with a random l x l Householder core and its J-Hessenberg
form is restored from column i on.
"""
from dataclasses import dataclass, field, replace
import warnings

import numpy as np

from .core import (
    as_square_2n,
    j_hessenberg_zero_mask,
    pattern_defect,
    permutation_order,
    symplectic_adjoint,
)
from .jhessenberg import CureBudgetExhausted, Reduction, ReductionConfig
from .srfact import NearBreakdownWarning, srdeco, srmsh
from .transforms import BlockOrthogonal, BreakdownError, householder_core, vlh

__all__ = [
    "EigenConfig",
    "RestartBudgetExhausted",
    "SRIterationState",
    "Spectrum",
    "eig2x2",
    "balance_pairs",
    "block_eigenvalues",
    "choose_shift",
    "francis_shift",
    "initial_state",
    "permuted_blocks",
    "restart_similarity",
    "solve_spectrum",
    "sr_step",
]


class RestartBudgetExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class EigenConfig:
    """Knobs of :func:`solve_spectrum`.

    reduction
        ``'mjhess'`` or ``'jhm2sh'``; the initial cured reduction.
    deflation_tol
        relative threshold for |h_{i+1,n+i}|.
    pattern_tol
        largest J-Hessenberg defect (relative to ||M||) accepted after a step;
        smaller noise is zeroed and recorded.
    max_iter_per_n, max_restarts
        iteration budget ``max_iter_per_n * n`` and restart budget.
    kappa_max
        steps whose symplectic factor has ||S||_1 ||S^J||_1 above this are
        refused; the next step then uses a randomized exceptional shift.
    restart_column
        column of the restart block. Restarting at a column i >= 2 only
        rescales the even minors of p(M), so the default is 1.
    """

    reduction: str = "mjhess"
    tau: float = 1e8
    cure_kind: str = "h2"
    deflation_tol: float = 1e-12
    pattern_tol: float = 1e-12
    factorization: str = "srmsh"
    max_iter_per_n: int = 30
    max_restarts: int = 5
    block_size: int = 2
    seed: int = 0
    kappa_max: float = 1e6
    restart_column: int = 1

    def __post_init__(self):
        if self.reduction not in ("mjhess", "jhm2sh"):
            raise ValueError(f"unknown reduction {self.reduction!r}")
        if self.block_size < 2:
            raise ValueError("block_size must be at least 2")

    def reduction_config(self):
        variant = "jhess" if self.reduction == "mjhess" else "jhmsh"
        return ReductionConfig(tau=self.tau, cure=True, cure_kind=self.cure_kind,
                               variant=variant)


@dataclass
class SRIterationState:
    """Current iterate ``m`` with ``m = s^{-1} A s``.

    ``restart`` is set by :func:`sr_step` to ``(stage, reason)`` when the
    step was refused; ``cleanup`` is the largest pattern entry zeroed so far.
    """

    m: np.ndarray
    s: np.ndarray
    k: int = 0
    blocks: list = field(default_factory=list)
    events: list = field(default_factory=list)
    restart: tuple = None
    cleanup: float = 0.0

    @property
    def n(self):
        return self.m.shape[0] // 2


@dataclass
class Spectrum:
    eigenvalues: np.ndarray
    residuals: np.ndarray
    converged: bool
    iterations: int
    restarts: int
    state: SRIterationState = field(repr=False)
    similarity_residual: float = 0.0

    def __len__(self):
        return len(self.eigenvalues)


def _window(n, lo, hi):
    return np.r_[lo:hi, n + lo : n + hi]


def eig2x2(B):
    """Eigenvalues of a real 2 x 2 matrix, avoiding cancellation."""
    (a, b), (c, d) = np.asarray(B, dtype=float)
    m = 0.5 * (a + d)
    det = a * d - b * c
    disc = 0.25 * (a - d) ** 2 + b * c
    if disc < 0:
        r = np.sqrt(-disc)
        return np.array([complex(m, r), complex(m, -r)])
    r = np.sqrt(disc)
    l1 = m + np.copysign(r, m)
    l2 = det / l1 if l1 != 0 else m - np.copysign(r, m)
    return np.array([complex(l1), complex(l2)])


def francis_shift(W):
    """Coefficients of x^2 - t x + d built on the trailing pair (m, 2m) of ``W``."""
    m = W.shape[0] // 2
    B = W[np.ix_([m - 1, 2 * m - 1], [m - 1, 2 * m - 1])]
    return (1.0, -float(np.trace(B)), float(np.linalg.det(B)))


def permuted_blocks(W, tol=1e-12):
    """Diagonal blocks of the Hessenberg matrix P^T W P after splitting.

    Every subdiagonal entry below ``tol`` times its two diagonal neighbours
    counts as a split, whatever its parity. Returns ``(H, blocks)`` with
    ``H = P^T W P`` and half-open index ranges into it.
    """
    m = W.shape[0] // 2
    perm = permutation_order(m)
    H = W[np.ix_(perm, perm)]
    d = np.abs(np.diag(H))
    sub = np.abs(np.diag(H, -1))
    ref = d[:-1] + d[1:]
    ref[ref == 0.0] = np.abs(H).max()
    cuts = [0] + [k + 1 for k in np.flatnonzero(sub <= tol * ref)] + [2 * m]
    return H, list(zip(cuts[:-1], cuts[1:]))


def choose_shift(W, tol=1e-12):
    """Shift polynomial for the window ``W`` (coefficients, highest first).

    The Francis pair of the trailing 2 x 2 block of the lowest block of
    P^T W P that has not yet split into pieces of order one or two. This is
    the trailing pair (m, 2m) as long as nothing has converged there. Returns
    None when the window has split completely.
    """
    H, blocks = permuted_blocks(W, tol)
    live = [(a, b) for a, b in blocks if b - a > 2]
    if not live:
        return None
    b = live[-1][1]
    B = H[b - 2 : b, b - 2 : b]
    return (1.0, -float(np.trace(B)), float(np.linalg.det(B)))


def block_eigenvalues(W, tol=1e-12):
    """Eigenvalues of a window whose permuted form has split into 1x1 and 2x2 blocks."""
    H, blocks = permuted_blocks(W, tol)
    out = []
    for a, b in blocks:
        if b - a == 1:
            out.append(complex(H[a, a]))
        elif b - a == 2:
            out.extend(eig2x2(H[a:b, a:b]))
        else:
            raise ValueError("window has not split into blocks of order <= 2")
    return out


def _poly(W, coeffs):
    P = coeffs[0] * np.eye(W.shape[0])
    for c in coeffs[1:]:
        P = P @ W
        P[np.diag_indices_from(P)] += c
    return P


def _embed_similarity(state, w, S_loc):
    """m <- S^J m S and s <- s S for S = S_loc placed on the indices ``w``."""
    M, S = state.m.copy(), state.s.copy()
    M[w, :] = symplectic_adjoint(S_loc) @ M[w, :]
    M[:, w] = M[:, w] @ S_loc
    S[:, w] = S[:, w] @ S_loc
    return M, S


def initial_state(A, config=EigenConfig()):
    """Cured J-Hessenberg reduction of ``A`` as the starting iterate."""
    A = as_square_2n(A)
    red = Reduction(A, config.reduction_config()).run()
    events = [("reduction", e.kind, e.step) for e in red.events]
    return SRIterationState(red.h.copy(), red.s.copy(), events=events)


def sr_step(state, shift_polynomial, window=None, tau=1e8, pattern_tol=1e-12,
            factorization="srmsh", restore_config=None, kappa_max=np.inf):
    """One explicit SR step on ``window = (lo, hi)`` (0-based, top half).

    ``shift_polynomial`` holds the coefficients of p, highest degree first
    (degree 1 or 2). A breakdown or near-breakdown of the inner SR
    factorization leaves the iterate untouched and sets ``restart``.

    In floating point the new iterate is J-Hessenberg only approximately.
    A defect up to ``pattern_tol * ||M_k||`` is zeroed; a larger one is removed
    by a cured J-Hessenberg reduction of the window (a similarity, so the
    spectrum is kept), unless ``restore_config`` is False, in which case a
    restart is requested instead. A factor S_k with
    ||S_k||_1 ||S_k^J||_1 > ``kappa_max`` is refused as ``"ill_conditioned"``.
    """
    n = state.n
    lo, hi = window if window is not None else (0, n)
    coeffs = np.asarray(shift_polynomial, dtype=float)
    if coeffs.ndim != 1 or not 2 <= coeffs.size <= 3:
        raise ValueError("shift polynomial must have degree 1 or 2")
    factor = {"srmsh": srmsh, "srdeco": srdeco}[factorization]
    w = _window(n, lo, hi)
    W = state.m[np.ix_(w, w)]
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NearBreakdownWarning)
            fac = factor(_poly(W, coeffs), tau=tau)
    except BreakdownError as exc:
        return replace(state, restart=(exc.step, "breakdown"))
    if fac.near_breakdowns:
        return replace(state, restart=(fac.near_breakdowns[0][0], "near_breakdown"))
    kappa = np.linalg.norm(fac.s, 1) * np.linalg.norm(symplectic_adjoint(fac.s), 1)
    if kappa > kappa_max:
        return replace(state, restart=(1, "ill_conditioned"))
    M, S = _embed_similarity(state, w, fac.s)
    mask = j_hessenberg_zero_mask(n)
    defect = pattern_defect(M, mask)
    # measured against the iterate before the step: one step can inflate ||M||
    scale = max(np.linalg.norm(state.m, 2), np.finfo(float).tiny)
    events = state.events
    if defect > pattern_tol * scale:
        if restore_config is False:
            return replace(state, restart=(1, "pattern_loss"))
        cfg = restore_config or ReductionConfig(tau=tau, cure=True)
        try:
            red = Reduction(M[np.ix_(w, w)], cfg).run()
        except (BreakdownError, CureBudgetExhausted):
            return replace(state, restart=(1, "pattern_loss"))
        M, S = _embed_similarity(replace(state, m=M, s=S), w, red.s)
        events = events + [("restore", state.k, float(defect / scale))]
        defect = pattern_defect(M, mask)
    M[mask] = 0.0
    return replace(state, m=M, s=S, k=state.k + 1, restart=None, events=events,
                   cleanup=max(state.cleanup, defect))


def balance_pairs(state, window=None, sweeps=10):
    """Symplectic diagonal balancing of the iterate over ``window``.

    The SR step is only determined up to D = diag(C, C^{-1}), and without a
    correction the iterate drifts towards huge columns matched by tiny rows.
    For each pair (j, n+j) a power of two c is chosen so that scaling row and
    column j by c and row and column n+j by 1/c reduces the Frobenius norm of
    the lines involved. Powers of two keep the scaling exact.
    """
    n = state.n
    lo, hi = window if window is not None else (0, n)
    M, d = state.m.copy(), np.ones(2 * n)
    for _ in range(sweeps):
        changed = False
        for j in range(lo, hi):
            q = n + j
            grow = (M[:, j] @ M[:, j] + M[q, :] @ M[q, :] - M[j, j] ** 2 - M[q, q] ** 2)
            shrink = (M[j, :] @ M[j, :] + M[:, q] @ M[:, q] - M[j, j] ** 2 - M[q, q] ** 2)
            if grow == 0.0 or shrink == 0.0:
                continue
            # M <- D^{-1} M D with D_jj = c, D_qq = 1/c scales col j and row q by c
            e = int(np.round(np.log2(shrink / grow) / 4))
            if e == 0:
                continue
            c = 2.0 ** e
            M[:, j] *= c
            M[j, :] /= c
            M[:, q] /= c
            M[q, :] *= c
            d[j] *= c
            d[q] /= c
            changed = True
        if not changed:
            break
    return replace(state, m=M, s=state.s * d[None, :])


def restart_similarity(state, i, l=2, rng=None, window=None, config=None, restore=True):
    """Orthogonal symplectic restart at column ``i`` (1-based within the window).

    The window is multiplied on both sides by diag(I_{i-1}, H_l, I) in each
    half, H_l a random Householder matrix, which only disturbs the entries
    (i+1..i+l-1, n+i-1) among the established zeros. With ``restore`` the
    J-Hessenberg form is then rebuilt: a Van Loan reflector clears that
    column and the cured reduction resumes at step i.
    """
    n = state.n
    lo, hi = window if window is not None else (0, n)
    m = hi - lo
    if m < 2:
        return replace(state, restart=None)
    l = min(l, m)
    i = min(max(i, 1), m - l + 1)
    rng = np.random.default_rng(rng)
    block = BlockOrthogonal(i, householder_core(rng.standard_normal(l)))
    if block.is_identity:
        return replace(state, restart=None)
    w = _window(n, lo, hi)
    red = Reduction(state.m[np.ix_(w, w)], config or ReductionConfig(cure=True))
    red._apply(block)
    if restore:
        if i >= 2:
            red._apply(vlh(i, red.H[:, m + i - 2]))
            red.H[i:m, m + i - 2] = 0.0
        red.run(start=i)
    M, S = _embed_similarity(state, w, red.S)
    if restore:
        M[j_hessenberg_zero_mask(n)] = 0.0
    events = state.events + [("restart", state.restart[1] if state.restart else "manual", lo + i)]
    return replace(state, m=M, s=S, restart=None, events=events)


def _deflation_point(M, lo, hi, tol):
    """Largest 0-based i in [lo, hi-1) with negligible h_{i+1,n+i}, or None."""
    n = M.shape[0] // 2
    for i in range(hi - 2, lo - 1, -1):
        sub = abs(M[i + 1, n + i])
        # H12 diagonal neighbours plus the diagonal neighbours in P^T M P
        ref = (abs(M[i, n + i]) + abs(M[i + 1, n + i + 1])
               + abs(M[n + i, n + i]) + abs(M[i + 1, i + 1]))
        if ref == 0.0:
            ref = np.abs(M[np.ix_(_window(n, lo, hi), _window(n, lo, hi))]).max()
        if sub <= tol * ref:
            return i
    return None


def _residuals(A, lams):
    out = []
    for lam in lams:
        out.append(np.linalg.svd(A - lam * np.eye(A.shape[0]), compute_uv=False)[-1])
    return np.array(out)


def solve_spectrum(A, config=EigenConfig()):
    """All 2n eigenvalues of ``A`` by the explicit SR algorithm.

    Returns a :class:`Spectrum`; eigenvalue residuals are sigma_min(A - lambda I).
    If the iteration budget runs out the unconverged windows are finished
    with a dense eigenvalue routine and ``converged`` is False. Raises
    :class:`RestartBudgetExhausted` after ``max_restarts`` restarts.
    """
    A = as_square_2n(A)
    n = A.shape[0] // 2
    rng = np.random.default_rng(config.seed)
    state = balance_pairs(initial_state(A, config))
    red_cfg = config.reduction_config()
    max_iter = config.max_iter_per_n * n
    stack = [(0, n)]
    lams, converged, restarts, stall, detour = [], True, 0, 0, False
    while stack:
        lo, hi = stack.pop()
        w = _window(n, lo, hi)
        W = state.m[np.ix_(w, w)]
        i = _deflation_point(state.m, lo, hi, config.deflation_tol) if hi - lo > 1 else None
        if i is not None:
            state.m[i + 1, n + i] = 0.0
            stack += [(lo, i + 1), (i + 1, hi)]
            stall = 0
            continue
        shift = choose_shift(W, config.deflation_tol)
        if shift is None:
            lams.extend(block_eigenvalues(W, config.deflation_tol))
            state.blocks.append((lo, hi))
            continue
        if state.k >= max_iter:
            converged = False
            lams.extend(np.linalg.eigvals(W).astype(complex))
            state.blocks.append((lo, hi))
            continue
        stall += 1
        if stall % 11 == 0 or detour:
            # exceptional shift against cycling or an ill-conditioned step
            m = hi - lo
            s = abs(W[m - 1, 2 * m - 2]) + abs(W[2 * m - 1, m - 1]) + abs(W[m - 1, m - 1])
            s *= 1.0 + rng.uniform()
            shift = (1.0, -1.5 * s, s * s)
        detour = False
        state = sr_step(state, shift, (lo, hi), tau=config.tau, pattern_tol=config.pattern_tol,
                        factorization=config.factorization, restore_config=red_cfg,
                        kappa_max=config.kappa_max)
        state = balance_pairs(state, (lo, hi))
        if state.restart is not None and state.restart[1] == "ill_conditioned":
            state.events.append(("detour", state.k, lo))
            state.restart = None
            state.k += 1
            detour = True
        if state.restart is not None:
            restarts += 1
            if restarts > config.max_restarts:
                raise RestartBudgetExhausted(
                    f"restart budget ({config.max_restarts}) exhausted at iteration {state.k}")
            try:
                state = restart_similarity(state, config.restart_column,
                                           config.block_size, rng, (lo, hi), red_cfg)
            except (BreakdownError, CureBudgetExhausted) as exc:
                raise RestartBudgetExhausted(f"restart could not restore the form: {exc}") from exc
            state.k += 1
        stack.append((lo, hi))
    lams = np.array(lams, dtype=complex)
    SA = symplectic_adjoint(state.s) @ A @ state.s
    return Spectrum(lams, _residuals(A, lams), converged, state.k, restarts, state,
                    float(np.linalg.norm(SA - state.m, 2)))
