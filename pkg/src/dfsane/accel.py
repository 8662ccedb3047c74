"""Sequential-secant acceleration: sliding difference window and the
minimum-norm least-squares extrapolation step.

The accelerated point is x_trial - S nu where nu is the minimum-norm
least-squares solution of Y nu = F(x_trial), with S and Y collecting the
recent iterate and residual differences column by column.  nu is computed
through a rank-revealing complete orthogonalization of Y rather than an
explicit pseudoinverse.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import EPS_MACH, Array

DEFAULT_TOL_RANK = math.sqrt(EPS_MACH)


class SecantWindow:
    """Sliding buffer of up to ``capacity`` (s, y) difference pairs.

    Pairs are kept oldest first; pushing at capacity evicts the oldest pair.
    """

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("window capacity must be at least 1")
        self.capacity = capacity
        self._s: deque[Array] = deque(maxlen=capacity)
        self._y: deque[Array] = deque(maxlen=capacity)

    def push_pair(self, s: Array, y: Array) -> "SecantWindow":
        s = np.asarray(s, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if s.shape != y.shape or s.ndim != 1:
            raise ValueError("s and y must be vectors of equal length")
        if self._s and s.shape != self._s[0].shape:
            raise ValueError("pair length does not match window contents")
        self._s.append(s)
        self._y.append(y)
        return self

    @property
    def count(self) -> int:
        return len(self._s)

    def s_columns(self) -> list[Array]:
        return list(self._s)

    def y_columns(self) -> list[Array]:
        return list(self._y)

    def matrices_with(self, s_extra: Array, y_extra: Array) -> tuple[Array, Array]:
        """Stack window contents plus one extra pair into n x (count+1) matrices."""
        S = np.column_stack([*self._s, s_extra])
        Y = np.column_stack([*self._y, y_extra])
        return S, Y


@dataclass(frozen=True, eq=False)
class Orthogonalization:
    """Column-pivoted orthogonal factorization of an n x m matrix.

    ``q`` holds ``rank`` orthonormal columns spanning the numerical column
    space; ``coef`` is the rank x m coefficient matrix with
    Y[:, perm] ~= q @ coef.  A column joins the basis only while its
    orthogonalized residual norm exceeds ``tol_rank`` times the largest
    column norm of the input.
    """

    q: Array
    coef: Array
    perm: Array
    rank: int
    tol_rank: float

    def min_norm_solution(self, b: Array) -> Array:
        """Minimum-norm least-squares solution of Y nu = b.

        The coefficient matrix has full row rank, so the minimum-norm
        solution of coef z = q' b lies in its row space; it is recovered via
        a QR factorization of coef' and one triangular solve.
        """
        nu = np.zeros(self.perm.shape[0])
        if self.rank == 0:
            return nu
        c = self.q.T @ b
        q2, t = np.linalg.qr(self.coef.T)
        w = np.linalg.solve(t.T, c)
        nu[self.perm] = q2 @ w
        return nu


def orthogonalize_columns(Y: Array, tol_rank: float | None = None) -> Orthogonalization:
    """Rank-revealing orthogonalization by pivoted modified Gram-Schmidt.

    At each step the remaining column with the largest residual norm is
    orthogonalized against the basis (with one reorthogonalization pass to
    keep the basis orthonormal to round-off) and the factorization stops as
    soon as the best remaining residual norm falls below the rank threshold.
    """
    Y = np.asarray(Y, dtype=np.float64)
    if Y.ndim != 2:
        raise ValueError("Y must be a 2-D matrix")
    n, m = Y.shape
    if tol_rank is None:
        tol_rank = DEFAULT_TOL_RANK

    work = Y.copy()
    perm = np.arange(m)
    limit = min(n, m)
    Q = np.zeros((n, limit))
    R = np.zeros((limit, m))

    col_norms = np.sqrt((work * work).sum(axis=0))
    ymax = float(col_norms.max()) if m else 0.0
    threshold = tol_rank * ymax if math.isfinite(ymax) else math.inf

    rank = 0
    for step in range(limit):
        residual_norms = np.sqrt((work[:, step:] * work[:, step:]).sum(axis=0))
        jloc = int(np.argmax(residual_norms))
        if not residual_norms[jloc] > threshold:
            break
        j = step + jloc
        if j != step:
            work[:, [step, j]] = work[:, [j, step]]
            R[:, [step, j]] = R[:, [j, step]]
            perm[[step, j]] = perm[[j, step]]

        v = work[:, step].copy()
        if rank > 0:
            correction = Q[:, :rank].T @ v
            v -= Q[:, :rank] @ correction
            R[:rank, step] += correction
        nrm = float(np.linalg.norm(v))
        if not nrm > threshold:
            break
        q = v / nrm
        Q[:, rank] = q
        R[rank, step] = nrm
        if step + 1 < m:
            proj = q @ work[:, step + 1:]
            R[rank, step + 1:] = proj
            work[:, step + 1:] -= np.outer(q, proj)
        rank += 1

    return Orthogonalization(q=Q[:, :rank], coef=R[:rank, :], perm=perm,
                             rank=rank, tol_rank=tol_rank)


def min_norm_ls(Y: Array, b: Array, tol_rank: float | None = None) -> Array:
    """Minimum-norm least-squares solution of Y nu = b (rank-deficient safe)."""
    return orthogonalize_columns(Y, tol_rank).min_norm_solution(np.asarray(b, dtype=np.float64))


def accel_point(window: SecantWindow, s_k: Array, y_k: Array,
                x_trial: Array, F_trial: Array,
                tol_rank: float | None = None,
                on_info: Callable[[int, int, float], None] | None = None) -> Array:
    """Extrapolated point x_trial - S nu from the window plus the trial pair.

    Performs no residual evaluation.  ``on_info`` (if given) receives the
    column count, the numerical rank, and ||nu||_2.
    """
    S, Y = window.matrices_with(s_k, y_k)
    orth = orthogonalize_columns(Y, tol_rank)
    nu = orth.min_norm_solution(np.asarray(F_trial, dtype=np.float64))
    if on_info is not None:
        on_info(S.shape[1], orth.rank, float(np.linalg.norm(nu)))
    return x_trial - S @ nu
