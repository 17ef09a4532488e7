"""Compatibility indices and distances between PC matrices and ranking vectors."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import ShapeError
from .matrix import PCMatrix, PriorityVector, induced_matrix

__all__ = [
    "BetaGrid",
    "CompatibilityReport",
    "beta_grid",
    "chebyshev",
    "comp_lower_matrices",
    "comp_matrices",
    "comp_max_matrices",
    "comp_upper_matrices",
    "comp_vectors",
    "compatibility",
    "kendall_distance",
    "manhattan",
]


@dataclass(frozen=True)
class CompatibilityReport:
    comp: float
    comp_lower: float
    comp_upper: float
    comp_max: float

    def ordered(self, tol: float = 1e-12) -> bool:
        """``comp_lower <= comp <= comp_upper <= comp_max`` up to a relative ``tol``."""
        seq = (self.comp_lower, self.comp, self.comp_upper, self.comp_max)
        return all(a <= b + tol * max(1.0, abs(b)) for a, b in zip(seq, seq[1:]))


@dataclass(frozen=True)
class BetaGrid:
    """Cross-ratios ``beta_ij = (w1_i / w1_j) * (w2_j / w2_i)``."""

    values: NDArray[np.float64]

    @property
    def n(self) -> int:
        return self.values.shape[0]


def _pair_products(C1: PCMatrix, C2: PCMatrix) -> NDArray[np.float64]:
    if C1.n != C2.n:
        raise ShapeError(f"matrix orders differ: {C1.n} vs {C2.n}")
    return C1.entries * C2.entries.T


def _report(h: NDArray[np.float64]) -> CompatibilityReport:
    # h[i, j] * h[j, i] == 1 up to rounding; only the strict upper pairs matter
    n = h.shape[0]
    iu = np.triu_indices(n, 1)
    up, lo = h[iu], h.T[iu]
    pairs = n * (n - 1) / 2
    return CompatibilityReport(
        comp=float(h.sum() / n**2),
        comp_lower=float(np.minimum(up, lo).sum() / pairs),
        comp_upper=float(np.maximum(up, lo).sum() / pairs),
        comp_max=float(h.max()),
    )


def compatibility(C1: PCMatrix, C2: PCMatrix) -> CompatibilityReport:
    """All four matrix compatibility indices in one pass."""
    return _report(_pair_products(C1, C2))


def comp_matrices(C1: PCMatrix, C2: PCMatrix) -> float:
    """Saaty's compatibility ``(1/n^2) sum_ij c1_ij c2_ji``."""
    h = _pair_products(C1, C2)
    return float(h.sum() / C1.n**2)


def comp_upper_matrices(C1: PCMatrix, C2: PCMatrix) -> float:
    return compatibility(C1, C2).comp_upper


def comp_lower_matrices(C1: PCMatrix, C2: PCMatrix) -> float:
    return compatibility(C1, C2).comp_lower


def comp_max_matrices(C1: PCMatrix, C2: PCMatrix) -> float:
    return float(_pair_products(C1, C2).max())


VectorLike = Union[PriorityVector, ArrayLike]


def _check_lengths(w1: VectorLike, w2: VectorLike) -> None:
    if len(w1) != len(w2):
        raise ShapeError(f"vector lengths differ: {len(w1)} vs {len(w2)}")


def _raw(w: VectorLike) -> NDArray[np.float64]:
    # distances take vectors as given; only PriorityVector carries normalization
    return w.weights if isinstance(w, PriorityVector) else np.asarray(w, dtype=np.float64)


def beta_grid(w1: PriorityVector, w2: PriorityVector) -> BetaGrid:
    _check_lengths(w1, w2)
    q = w1.weights / w2.weights
    b = q[:, None] / q[None, :]
    np.fill_diagonal(b, 1.0)
    b.flags.writeable = False
    return BetaGrid(b)


def comp_vectors(
    w1: PriorityVector, w2: PriorityVector, *, cross_check: bool = False
) -> CompatibilityReport:
    """Compatibility indices of two ranking vectors via the cross-ratio grid.

    With ``cross_check=True`` the indices are also computed on the induced
    matrices and the two routes must agree to 1e-12 (relative).
    """
    _check_lengths(w1, w2)
    if len(w1) < 2:
        raise ShapeError("compatibility needs at least two alternatives")
    report = _report(beta_grid(w1, w2).values)
    if cross_check:
        other = compatibility(induced_matrix(w1), induced_matrix(w2))
        for name in ("comp", "comp_lower", "comp_upper", "comp_max"):
            a, b = getattr(report, name), getattr(other, name)
            if abs(a - b) > 1e-12 * max(1.0, abs(a)):
                raise AssertionError(f"{name}: beta route {a!r} != matrix route {b!r}")
    return report


def manhattan(w1: VectorLike, w2: VectorLike) -> float:
    """``sum |w1_i - w2_i|``. Plain arrays are used as given, without normalization."""
    _check_lengths(w1, w2)
    return float(np.abs(_raw(w1) - _raw(w2)).sum())


def chebyshev(w1: VectorLike, w2: VectorLike) -> float:
    """``max |w1_i - w2_i|``."""
    _check_lengths(w1, w2)
    return float(np.abs(_raw(w1) - _raw(w2)).max())


def _ranks(w: NDArray[np.float64]) -> NDArray[np.intp]:
    # descending by weight, exact ties broken by alternative index
    order = np.lexsort((np.arange(w.size), -w))
    ranks = np.empty(w.size, dtype=np.intp)
    ranks[order] = np.arange(w.size)
    return ranks


def kendall_distance(w1: VectorLike, w2: VectorLike) -> int:
    """Number of alternative pairs ranked in opposite order by the two vectors.

    Alternatives are ordered by descending weight; exactly equal weights are
    ordered by index, so ties never count as half-discordant.
    """
    _check_lengths(w1, w2)
    r1, r2 = _ranks(_raw(w1)), _ranks(_raw(w2))
    d1 = np.sign(r1[:, None] - r1[None, :])
    d2 = np.sign(r2[:, None] - r2[None, :])
    return int(np.triu(d1 * d2 < 0, 1).sum())
