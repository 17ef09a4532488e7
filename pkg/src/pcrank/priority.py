"""Eigenvalue (EVM) and geometric mean (GMM) priority derivation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .errors import ConvergenceError, DomainError
from .matrix import PCMatrix, PriorityVector

__all__ = ["EvmOptions", "EvmResult", "evm", "gmm", "power_iteration"]


@dataclass(frozen=True)
class EvmOptions:
    tol: float = 1e-12
    max_iter: int = 10_000

    def __post_init__(self) -> None:
        if not self.tol > 0:
            raise DomainError(f"tol must be positive, got {self.tol!r}")
        if self.max_iter < 1:
            raise DomainError(f"max_iter must be >= 1, got {self.max_iter!r}")


@dataclass(frozen=True)
class EvmResult:
    """Principal eigenpair of a PC matrix.

    Attributes:
        weights: Perron eigenvector scaled to sum 1.
        lambda_max: principal eigenvalue estimate ``sum(C w)`` at the
            returned iterate.
        iterations: matrix-vector products performed.
        residual: ``max |C w - lambda_max w|`` at the returned iterate.
    """

    weights: PriorityVector
    lambda_max: float
    iterations: int
    residual: float


def power_iteration(
    stack: NDArray[np.float64], tol: float = 1e-12, max_iter: int = 10_000
) -> tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.int64], NDArray[np.float64]]:
    """Power iteration over a ``(m, n, n)`` stack of positive matrices.

    Each matrix starts from the uniform vector and is L1-renormalized every
    step; it stops independently once its eigen-residual drops to ``tol``.
    Matrices that never converge keep their last iterate and report
    ``iterations == max_iter``.

    Returns:
        ``(w, lam, iterations, residual)`` with shapes ``(m, n)``, ``(m,)``,
        ``(m,)``, ``(m,)``.
    """
    a = np.asarray(stack, dtype=np.float64)
    m, n, _ = a.shape
    w = np.full((m, n), 1.0 / n)
    lam = np.zeros(m)
    res = np.full(m, np.inf)
    its = np.zeros(m, dtype=np.int64)
    active = np.arange(m)
    for k in range(1, max_iter + 1):
        wa = w[active]
        cw = (a[active] * wa[:, None, :]).sum(axis=2)
        la = cw.sum(axis=1)
        r = np.abs(cw - la[:, None] * wa).max(axis=1)
        lam[active] = la
        res[active] = r
        its[active] = k
        done = r <= tol
        moving = active[~done]
        w[moving] = cw[~done] / la[~done, None]
        active = moving
        if active.size == 0:
            break
    return w, lam, its, res


def evm(C: PCMatrix, opts: EvmOptions | None = None) -> EvmResult:
    """Principal right eigenvector by power iteration.

    Raises:
        ConvergenceError: residual still above ``opts.tol`` after
            ``opts.max_iter`` iterations.
    """
    opts = opts or EvmOptions()
    w, lam, its, res = power_iteration(C.entries[None], opts.tol, opts.max_iter)
    if not res[0] <= opts.tol:
        raise ConvergenceError(float(res[0]), int(its[0]))
    return EvmResult(PriorityVector(w[0]), float(lam[0]), int(its[0]), float(res[0]))


def gmm(C: PCMatrix) -> PriorityVector:
    """Normalized geometric means of the rows, computed in log space."""
    g = np.log(C.entries).mean(axis=1)
    g -= g.max()
    return PriorityVector(np.exp(g))
