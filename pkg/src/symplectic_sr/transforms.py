"""Elementary symplectic transformations and their structured application.

Four families are provided:

* :class:`VanLoanGivens` -- a plane rotation acting on coordinates k and n+k,
* :class:`VanLoanHouseholder` -- diag(I, P, I, P) with P a Householder
  reflector on coordinates k..n (and the mirror block n+k..2n),
* :class:`GTransform` -- the non-orthogonal symplectic G(k, nu),
* :class:`SymplecticHouseholder` -- the rank-one update T = I + c v v^J.

The first two are orthogonal and symplectic. Every transform knows how to
apply itself (or its inverse) from the left or the right touching only the
rows/columns it acts on, and how to assemble itself densely for testing.
:class:`CuringReflector` holds the block-diagonal orthogonal similarity used
to cure breakdowns.
"""
from dataclasses import dataclass, field

import numpy as np

from .core import apply_j, half_order

__all__ = [
    "BreakdownError",
    "VanLoanGivens",
    "VanLoanHouseholder",
    "GTransform",
    "SymplecticHouseholder",
    "CuringReflector",
    "BlockOrthogonal",
    "vlg",
    "vlh",
    "gal",
    "sh2",
    "default_mu",
    "householder_core",
    "givens_core",
    "build_curing_reflector",
    "apply_left",
    "apply_right",
    "apply_similarity",
]


class BreakdownError(ArithmeticError):
    """A symplectic elimination step is impossible (zero pivot, nonzero target)."""

    def __init__(self, message, step=None, pivot=None, target=None):
        super().__init__(message)
        self.step = step
        self.pivot = pivot
        self.target = target


def _sign(x):
    return 1.0 if x >= 0 else -1.0


class _Transform:
    """Shared helpers; subclasses implement the four structured kernels."""

    def left(self, M, inverse=False):
        raise NotImplementedError

    def right(self, M, inverse=False):
        raise NotImplementedError

    def matrix(self, n):
        """Dense 2n x 2n assembly (testing oracle)."""
        return self.left(np.eye(2 * n))

    def inverse_matrix(self, n):
        return self.left(np.eye(2 * n), inverse=True)

    def similarity(self, M):
        """``T M T^{-1}``."""
        return self.right(self.left(M), inverse=True)

    @property
    def is_identity(self):
        return False


@dataclass(frozen=True)
class VanLoanGivens(_Transform):
    """J(k, c, s): rotation in the (k, n+k) plane; ``k`` is 1-based."""

    k: int
    c: float
    s: float

    @property
    def is_identity(self):
        return self.c == 1.0 and self.s == 0.0

    def _idx(self, m):
        n = half_order(m)
        if not 1 <= self.k <= n:
            raise ValueError(f"k={self.k} out of range for n={n}")
        return self.k - 1, n + self.k - 1

    def left(self, M, inverse=False):
        M = np.array(M, dtype=float, copy=True)
        p, q = self._idx(M.shape[0])
        c, s = self.c, (-self.s if inverse else self.s)
        rp, rq = M[p].copy(), M[q].copy()
        M[p] = c * rp + s * rq
        M[q] = -s * rp + c * rq
        return M

    def right(self, M, inverse=False):
        M = np.array(M, dtype=float, copy=True)
        p, q = self._idx(M.shape[1])
        c, s = self.c, (-self.s if inverse else self.s)
        cp, cq = M[:, p].copy(), M[:, q].copy()
        M[:, p] = c * cp - s * cq
        M[:, q] = s * cp + c * cq
        return M


@dataclass(frozen=True)
class VanLoanHouseholder(_Transform):
    """H(k, w) = diag(I_{k-1}, P, I_{k-1}, P), P = I - beta w w^T; ``k`` is 1-based."""

    k: int
    beta: float
    w: np.ndarray = field(repr=False)

    @property
    def is_identity(self):
        return self.beta == 0.0

    def _blocks(self, m):
        n = half_order(m)
        if len(self.w) != n - self.k + 1:
            raise ValueError("reflector length does not match n - k + 1")
        return slice(self.k - 1, n), slice(n + self.k - 1, 2 * n)

    def left(self, M, inverse=False):
        M = np.array(M, dtype=float, copy=True)
        if self.is_identity:
            return M
        for blk in self._blocks(M.shape[0]):
            M[blk] -= self.beta * np.outer(self.w, self.w @ M[blk])
        return M

    def right(self, M, inverse=False):
        M = np.array(M, dtype=float, copy=True)
        if self.is_identity:
            return M
        for blk in self._blocks(M.shape[1]):
            M[:, blk] -= self.beta * np.outer(M[:, blk] @ self.w, self.w)
        return M


@dataclass(frozen=True)
class GTransform(_Transform):
    """G(k, nu) = [[D, F], [0, D^{-1}]] acting on coordinates k-1, k, n+k-1, n+k.

    D scales coordinates k-1 and k by d = (1 + nu^2)^{-1/4}; F couples them
    with weight f = nu d. ``k`` is 1-based and lies in 2..n.
    """

    k: int
    nu: float

    @property
    def is_identity(self):
        return self.nu == 0.0

    @property
    def d(self):
        return (1.0 + self.nu * self.nu) ** -0.25

    @property
    def f(self):
        return self.nu * self.d

    def _idx(self, m):
        n = half_order(m)
        if not 2 <= self.k <= n:
            raise ValueError(f"k={self.k} out of range 2..{n}")
        return self.k - 2, self.k - 1, n + self.k - 2, n + self.k - 1

    def condition_number(self):
        """2-norm condition number; equals that of the nontrivial 4x4 core."""
        # core splits into two 2x2 blocks [[d, f], [0, 1/d]]
        d, f = self.d, self.f
        s = d * d + f * f + 1.0 / (d * d)
        return float((s + np.sqrt(s * s - 4.0)) / 2.0)

    def left(self, M, inverse=False):
        M = np.array(M, dtype=float, copy=True)
        a, b, na, nb = self._idx(M.shape[0])
        d, f = self.d, self.f
        ra, rb, rna, rnb = M[a].copy(), M[b].copy(), M[na].copy(), M[nb].copy()
        if not inverse:
            M[a] = d * ra + f * rnb
            M[b] = d * rb + f * rna
            M[na] = rna / d
            M[nb] = rnb / d
        else:
            # G^{-1} = G^J = [[D^{-1}, -F], [0, D]]
            M[a] = ra / d - f * rnb
            M[b] = rb / d - f * rna
            M[na] = d * rna
            M[nb] = d * rnb
        return M

    def right(self, M, inverse=False):
        M = np.array(M, dtype=float, copy=True)
        a, b, na, nb = self._idx(M.shape[1])
        d, f = self.d, self.f
        ca, cb, cna, cnb = M[:, a].copy(), M[:, b].copy(), M[:, na].copy(), M[:, nb].copy()
        if not inverse:
            M[:, a] = d * ca
            M[:, b] = d * cb
            M[:, na] = f * cb + cna / d
            M[:, nb] = f * ca + cnb / d
        else:
            M[:, a] = ca / d
            M[:, b] = cb / d
            M[:, na] = -f * cb + d * cna
            M[:, nb] = -f * ca + d * cnb
        return M


@dataclass(frozen=True)
class SymplecticHouseholder(_Transform):
    """T = I + c v v^J with v of full length 2n; T^{-1} = T^J = I - c v v^J."""

    c: float
    v: np.ndarray = field(repr=False)

    @property
    def is_identity(self):
        return self.c == 0.0 or not np.any(self.v)

    def _vj(self):
        # v^J = v^T J = -(J v)^T
        return -apply_j(self.v)

    def left(self, M, inverse=False):
        M = np.array(M, dtype=float, copy=True)
        if self.is_identity:
            return M
        c = -self.c if inverse else self.c
        M += c * np.outer(self.v, self._vj() @ M)
        return M

    def right(self, M, inverse=False):
        M = np.array(M, dtype=float, copy=True)
        if self.is_identity:
            return M
        c = -self.c if inverse else self.c
        M += c * np.outer(M @ self.v, self._vj())
        return M

    def embed(self, n, indices):
        """Lift a transform built on a coordinate subset to dimension 2n."""
        v = np.zeros(2 * n)
        v[np.asarray(indices)] = self.v
        return SymplecticHouseholder(self.c, v)


def vlg(k, a):
    """Van Loan Givens J(k, c, s) zeroing component n+k of ``a`` (1-based k)."""
    a = np.asarray(a, dtype=float)
    n = half_order(a.shape[0])
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range 1..{n}")
    x, y = a[k - 1], a[n + k - 1]
    r = np.hypot(x, y)
    if r == 0.0:
        return VanLoanGivens(k, 1.0, 0.0)
    return VanLoanGivens(k, x / r, y / r)


def vlh(k, a):
    """Van Loan Householder H(k, w) zeroing components k+1..n of ``a``.

    Sign convention w_1 = a_k + sign(a_k) r with sign(0) = +1. An all-zero
    active part yields the identity (beta = 0).
    """
    a = np.asarray(a, dtype=float)
    n = half_order(a.shape[0])
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range 1..{n}")
    x = a[k - 1 : n].copy()
    r1 = float(x[1:] @ x[1:])
    r = np.sqrt(x[0] ** 2 + r1)
    if r == 0.0:
        return VanLoanHouseholder(k, 0.0, np.zeros_like(x))
    w = x
    w[0] = x[0] + _sign(x[0]) * r
    return VanLoanHouseholder(k, 2.0 / (w[0] ** 2 + r1), w)


def gal(k, a, zero_tol=0.0):
    """G(k+1, nu) zeroing component k+1 of ``a`` using pivot a_{n+k}.

    Returns the transform indexed by the coordinate it eliminates, so
    ``gal(k, a).k == k + 1``. Raises :class:`BreakdownError` when the pivot
    a_{n+k} vanishes but a_{k+1} does not.
    """
    a = np.asarray(a, dtype=float)
    n = half_order(a.shape[0])
    if not 1 <= k <= n - 1:
        raise ValueError(f"k={k} out of range 1..{n - 1}")
    target, pivot = a[k], a[n + k - 1]
    if abs(target) <= zero_tol:
        return GTransform(k + 1, 0.0)
    if abs(pivot) <= zero_tol:
        raise BreakdownError(
            f"pivot a[{n + k}] vanishes while a[{k + 1}] = {target:g}",
            pivot=pivot, target=target,
        )
    return GTransform(k + 1, -target / pivot)


def _rest_norm(a, n):
    return float(np.sqrt(a[1:n] @ a[1:n] + a[n + 1 :] @ a[n + 1 :]))


def default_mu(a):
    """Best-conditioned free parameter for :func:`sh2`: mu = a_1 + ||rest||.

    rest collects every component except 1 and n+1. The condition number of
    T grows with (t^2 + ||rest||^2) / t for t = |mu - a_1|, which is minimal at
    t = ||rest||; of the two optimal roots the one above a_1 is taken.
    """
    a = np.asarray(a, dtype=float)
    n = half_order(a.shape[0])
    return float(a[0] + _rest_norm(a, n))


def sh2(a, mu=None, zero_tol=0.0):
    """Symplectic Householder T with T e_1 = e_1 and T a = mu e_1 + nu e_{n+1}.

    ``nu`` is forced to a_{n+1}. When ``mu`` is None the optimal
    :func:`default_mu` is used (and mu - a_1 is formed without cancellation);
    a vector already of the target form then maps by the identity.
    """
    a = np.asarray(a, dtype=float)
    n = half_order(a.shape[0])
    if n == 1:
        return SymplecticHouseholder(0.0, np.zeros(2))
    if mu is None:
        delta = _rest_norm(a, n)
        if delta == 0.0:
            return SymplecticHouseholder(0.0, np.zeros(2 * n))
    else:
        delta = mu - a[0]
        if delta == 0.0:
            raise ValueError("mu must differ from a[1]")
    nu = a[n]
    if abs(nu) <= zero_tol:
        raise BreakdownError("division by zero: a[n+1] vanishes", pivot=nu)
    v = -a.copy()
    v[0] = delta
    v[n] = 0.0  # nu e_{n+1} - a_{n+1} e_{n+1}
    # T = I - (y - a)(y - a)^J / a^J y with y = mu e_1 + nu e_{n+1}, a^J y = -nu delta
    return SymplecticHouseholder(float(1.0 / (nu * delta)), v)


def householder_core(x):
    """Orthogonal symmetric k x k reflector H with H x = (-sign(x_1)||x||, 0, ...)."""
    x = np.asarray(x, dtype=float)
    r = np.linalg.norm(x)
    if r == 0.0 or not np.any(x[1:]):
        return np.eye(len(x))
    w = x.copy()
    w[0] += _sign(x[0]) * r
    return np.eye(len(x)) - 2.0 * np.outer(w, w) / (w @ w)


def givens_core(x):
    """2x2 rotation [[c, s], [-s, c]] with G x = (r, 0)."""
    x0, x1 = float(x[0]), float(x[1])
    r = np.hypot(x0, x1)
    if r == 0.0 or x1 == 0.0:
        return np.eye(2)
    c, s = x0 / r, x1 / r
    return np.array([[c, s], [-s, c]])


@dataclass(frozen=True)
class CuringReflector:
    """Orthogonal symplectic block similarity diag(P, P) used to cure step j.

    ``primary`` acts on coordinates j..j+k-1 (and their mirrors) and is built
    to zero h_{j+1..j+k-1, j}; ``fixup`` (absent for j = 1) restores the
    zeros of column n+j-1 disturbed by the primary similarity.
    """

    j: int
    kind: str
    primary: np.ndarray = field(repr=False)
    fixup: np.ndarray = field(default=None, repr=False)

    @property
    def size(self):
        return self.primary.shape[0]

    def block_transform(self, core):
        return BlockOrthogonal(self.j, core)


@dataclass(frozen=True)
class BlockOrthogonal(_Transform):
    """diag(I_{j-1}, Q, I, I_{j-1}, Q, I) with Q a k x k orthogonal core."""

    j: int
    core: np.ndarray = field(repr=False)

    @property
    def is_identity(self):
        return np.array_equal(self.core, np.eye(self.core.shape[0]))

    def _blocks(self, m):
        n = half_order(m)
        k = self.core.shape[0]
        if self.j + k - 1 > n:
            raise ValueError("block exceeds matrix order")
        return slice(self.j - 1, self.j - 1 + k), slice(n + self.j - 1, n + self.j - 1 + k)

    def left(self, M, inverse=False):
        M = np.array(M, dtype=float, copy=True)
        Q = self.core.T if inverse else self.core
        for blk in self._blocks(M.shape[0]):
            M[blk] = Q @ M[blk]
        return M

    def right(self, M, inverse=False):
        M = np.array(M, dtype=float, copy=True)
        Q = self.core.T if inverse else self.core
        for blk in self._blocks(M.shape[1]):
            M[:, blk] = M[:, blk] @ Q
        return M


_CURE_KINDS = ("h2", "g2", "block")


def _core_for(kind, x):
    if kind == "g2":
        return givens_core(x)
    return householder_core(x)


def build_curing_reflector(H, j, kind="h2", block_size=2):
    """Curing reflector for step ``j`` of a J-Hessenberg reduction of ``H``.

    The primary core maps (h_{j,j}, ..., h_{j+k-1,j}) to a multiple of e_1.
    The fixup core is computed on the matrix *after* the primary similarity
    and maps (h_{j,n+j-1}, ..., h_{j+k-1,n+j-1}) to a multiple of e_1.
    ``kind`` is ``'h2'`` (2x2 Householder), ``'g2'`` (2x2 Givens) or
    ``'block'`` (k x k Householder, k = ``block_size`` clipped to n-j+1).
    """
    H = np.asarray(H, dtype=float)
    n = half_order(H.shape[0])
    if kind not in _CURE_KINDS:
        raise ValueError(f"unknown cure kind {kind!r}")
    if not 1 <= j <= n - 1:
        raise ValueError(f"j must lie in 1..{n - 1}")
    k = 2 if kind != "block" else max(2, min(int(block_size), n - j + 1))
    rows = slice(j - 1, j - 1 + k)
    primary = _core_for(kind, H[rows, j - 1])
    fixup = None
    if j >= 2:
        Hp = BlockOrthogonal(j, primary).similarity(H)
        fixup = _core_for(kind, Hp[rows, n + j - 2])
    return CuringReflector(j, kind, primary, fixup)


def apply_left(t, M, inverse=False):
    return t.left(M, inverse=inverse)


def apply_right(t, M, inverse=False):
    return t.right(M, inverse=inverse)


def apply_similarity(t, M):
    """``t M t^{-1}`` using the structured kernels."""
    return t.similarity(M)
