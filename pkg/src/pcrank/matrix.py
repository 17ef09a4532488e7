"""Pairwise comparison matrices, priority vectors and the matrix text format.

A :class:`PCMatrix` stores only its strict upper triangle; the diagonal is 1
and every lower entry is the reciprocal of its mirror, so reciprocity holds
by construction rather than up to floating-point drift.

Text format (UTF-8)::

    # optional comment lines
    1    1/2  2    5
    2    1    4    4
    1/2  1/4  1    5
    1/5  1/4  1/5  1

Either the full ``n x n`` matrix or the strict upper triangle (``n-1`` rows
of lengths ``n-1, ..., 1``) may be given. Entries are decimal literals or
integer fractions ``p/q``.
"""

from __future__ import annotations

import math
import re
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from typing import TextIO, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import DomainError, MatrixSyntaxError, ReciprocityError, ShapeError

__all__ = [
    "PCMatrix",
    "PriorityVector",
    "Tolerance",
    "build_matrix",
    "parse_matrix",
    "read_matrix",
    "serialize_matrix",
    "is_consistent",
    "max_triad_error",
    "induced_matrix",
]

PARSE_RECIPROCITY_RTOL = 1e-6


@dataclass(frozen=True)
class Tolerance:
    """Relative tolerance used for ratio comparisons."""

    rel: float = 1e-9

    def __post_init__(self) -> None:
        if not (0.0 < self.rel < 1.0):
            raise DomainError(f"tolerance must lie in (0, 1), got {self.rel!r}")


TolLike = Union[Tolerance, float]


def _as_tolerance(tol: TolLike) -> Tolerance:
    return tol if isinstance(tol, Tolerance) else Tolerance(float(tol))


def _readonly(a: NDArray[np.float64]) -> NDArray[np.float64]:
    a.flags.writeable = False
    return a


class PCMatrix:
    """Positive reciprocal pairwise comparison matrix of order ``n >= 2``.

    Args:
        upper: the ``n(n-1)/2`` strict upper-triangle entries in row-major
            order, i.e. ``c_12, c_13, ..., c_1n, c_23, ..., c_(n-1)n``.
        n: matrix order.
    """

    __slots__ = ("_entries", "_upper")

    def __init__(self, upper: ArrayLike, n: int) -> None:
        if int(n) != n or n < 2:
            raise ShapeError(f"matrix order must be an integer >= 2, got {n!r}")
        n = int(n)
        u = np.array(upper, dtype=np.float64).ravel()
        expected = n * (n - 1) // 2
        if u.size != expected:
            raise ShapeError(
                f"order {n} needs {expected} upper-triangle entries, got {u.size}"
            )
        bad = ~(np.isfinite(u) & (u > 0))
        if bad.any():
            k = int(np.flatnonzero(bad)[0])
            raise DomainError(
                f"entries must be positive and finite, got {u[k]!r} at position {k}"
            )
        a = np.ones((n, n))
        iu = np.triu_indices(n, 1)
        a[iu] = u
        a[iu[1], iu[0]] = 1.0 / u
        self._entries = _readonly(a)
        self._upper = _readonly(u)

    @classmethod
    def from_array(
        cls, full: ArrayLike, rtol: float = PARSE_RECIPROCITY_RTOL
    ) -> PCMatrix:
        """Validate a full square matrix and rebuild it from its upper triangle.

        Raises:
            ShapeError: the input is not square or has order < 2.
            DomainError: an entry is not positive and finite.
            ReciprocityError: a diagonal entry differs from 1, or
                ``|c_ij * c_ji - 1| > rtol`` for some pair.
        """
        a = np.asarray(full, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 2:
            raise ShapeError(f"expected a square matrix of order >= 2, got shape {a.shape}")
        if not (np.isfinite(a) & (a > 0)).all():
            i, j = np.argwhere(~(np.isfinite(a) & (a > 0)))[0]
            raise DomainError(f"entry ({i + 1},{j + 1}) must be positive and finite")
        n = a.shape[0]
        for i in range(n):
            if abs(a[i, i] - 1.0) > rtol:
                raise ReciprocityError(f"diagonal entry is {a[i, i]!r}, expected 1", i + 1, i + 1)
        for i in range(n):
            for j in range(i + 1, n):
                if abs(a[i, j] * a[j, i] - 1.0) > rtol:
                    raise ReciprocityError(
                        f"c_{j + 1}{i + 1} = {a[j, i]!r} is not the reciprocal of "
                        f"c_{i + 1}{j + 1} = {a[i, j]!r}",
                        j + 1,
                        i + 1,
                    )
        return cls(a[np.triu_indices(n, 1)], n)

    @property
    def n(self) -> int:
        return self._entries.shape[0]

    @property
    def entries(self) -> NDArray[np.float64]:
        """Read-only ``n x n`` array of the comparisons."""
        return self._entries

    @property
    def upper(self) -> NDArray[np.float64]:
        """Read-only strict upper triangle in row-major order."""
        return self._upper

    def __array__(self, dtype=None, copy=None):
        return np.array(self._entries, dtype=dtype)

    def __getitem__(self, ij: tuple[int, int]) -> float:
        return float(self._entries[ij])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PCMatrix):
            return NotImplemented
        return bool(np.array_equal(self._upper, other._upper)) and self.n == other.n

    def __hash__(self) -> int:
        return hash((self.n, self._upper.tobytes()))

    def __repr__(self) -> str:
        return f"PCMatrix(n={self.n}, upper={self._upper.tolist()!r})"

    def permuted(self, perm: Sequence[int]) -> PCMatrix:
        """Relabel alternatives: row/column ``k`` of the result is ``perm[k]`` here."""
        p = np.asarray(perm, dtype=int)
        if sorted(p.tolist()) != list(range(self.n)):
            raise DomainError(f"not a permutation of 0..{self.n - 1}: {perm!r}")
        a = self._entries[np.ix_(p, p)]
        return PCMatrix(a[np.triu_indices(self.n, 1)], self.n)


class PriorityVector:
    """Strictly positive weights normalized to sum 1.

    Any positive input is rescaled, so ``PriorityVector([2, 1, 1])`` equals
    ``PriorityVector([0.5, 0.25, 0.25])``.
    """

    __slots__ = ("_w",)

    def __init__(self, weights: ArrayLike) -> None:
        w = np.array(weights, dtype=np.float64).ravel()
        if w.size < 1:
            raise ShapeError("priority vector must not be empty")
        if not (np.isfinite(w) & (w > 0)).all():
            raise DomainError("weights must be positive and finite")
        s = w.sum()
        if s != 1.0:
            w = w / s
        self._w = _readonly(w)

    @property
    def weights(self) -> NDArray[np.float64]:
        return self._w

    def __len__(self) -> int:
        return self._w.size

    def __iter__(self) -> Iterator[float]:
        return iter(self._w.tolist())

    def __getitem__(self, i: int) -> float:
        return float(self._w[i])

    def __array__(self, dtype=None, copy=None):
        return np.array(self._w, dtype=dtype)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PriorityVector):
            return NotImplemented
        return bool(np.array_equal(self._w, other._w))

    def __hash__(self) -> int:
        return hash(self._w.tobytes())

    def __repr__(self) -> str:
        return f"PriorityVector({self._w.tolist()!r})"

    def tolist(self) -> list[float]:
        return self._w.tolist()


def build_matrix(upper_triangle_entries: Iterable[float], n: int) -> PCMatrix:
    """Build a PC matrix from its strict upper triangle (row-major)."""
    return PCMatrix(list(upper_triangle_entries), n)


def induced_matrix(w: PriorityVector | ArrayLike) -> PCMatrix:
    """The consistent matrix with entries ``w_i / w_j``."""
    v = w.weights if isinstance(w, PriorityVector) else PriorityVector(w).weights
    n = v.size
    if n < 2:
        raise ShapeError("an induced matrix needs at least two alternatives")
    iu = np.triu_indices(n, 1)
    return PCMatrix(v[iu[0]] / v[iu[1]], n)


def max_triad_error(C: PCMatrix) -> float:
    """``max |c_ij c_jk c_ki - 1|`` over all index triples (0 for ``n = 2``)."""
    a = C.entries
    cyc = a[:, :, None] * a[None, :, :] * a.T[:, None, :]
    return float(np.abs(cyc - 1.0).max())


def is_consistent(C: PCMatrix, tol: TolLike = 1e-9) -> bool:
    """True iff every triad satisfies ``|c_ij c_jk c_ki - 1| <= tol``."""
    return max_triad_error(C) <= _as_tolerance(tol).rel


# ---------------------------------------------------------------- text format

_NUMBER = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?\Z")
_FRACTION = re.compile(r"([+-]?\d+)/(\d+)\Z")


def _parse_entry(token: str, line: int, column: int) -> float:
    m = _FRACTION.match(token)
    if m:
        p, q = int(m.group(1)), int(m.group(2))
        if q == 0:
            raise MatrixSyntaxError(f"zero denominator in {token!r}", line, column)
        value = p / q
    elif _NUMBER.match(token):
        value = float(token)
    else:
        raise MatrixSyntaxError(f"invalid entry {token!r}", line, column)
    if not (math.isfinite(value) and value > 0):
        raise DomainError(
            f"line {line}, column {column}: entry {token!r} must be positive and finite"
        )
    return value


def _tokenize(text: str) -> list[tuple[int, list[float]]]:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if raw.lstrip().startswith("#") or not raw.strip():
            continue
        row = [
            _parse_entry(m.group(0), lineno, m.start() + 1)
            for m in re.finditer(r"\S+", raw)
        ]
        rows.append((lineno, row))
    return rows


def parse_matrix(text: str | TextIO) -> PCMatrix:
    """Parse a matrix in full or strict-upper-triangle form.

    Full matrices are checked for reciprocity at relative tolerance
    ``1e-6`` and then rebuilt from their upper triangle.

    Raises:
        MatrixSyntaxError: unparsable token, or rows of inconsistent lengths.
        ReciprocityError: a full matrix violates reciprocity.
        DomainError: an entry is zero, negative or non-finite.
    """
    if not isinstance(text, str):
        text = text.read()
    rows = _tokenize(text)
    if not rows:
        raise MatrixSyntaxError("no matrix rows found", 1, 1)
    lengths = [len(r) for _, r in rows]
    m = len(rows)
    if m >= 2 and all(k == m for k in lengths):
        return PCMatrix.from_array(np.array([r for _, r in rows]))
    if lengths == list(range(m, 0, -1)):
        return PCMatrix([x for _, r in rows for x in r], m + 1)
    # report the first row that breaks both layouts
    full_ok = lengths[0] == m and m >= 2
    for idx, (lineno, row) in enumerate(rows):
        want = m if full_ok else lengths[0] - idx
        if len(row) != want:
            raise MatrixSyntaxError(
                f"expected {want} entries in this row, found {len(row)}", lineno, 1
            )
    raise MatrixSyntaxError("not a square matrix or strict upper triangle", rows[0][0], 1)


def read_matrix(path: str) -> PCMatrix:
    with open(path, encoding="utf-8") as fh:
        return parse_matrix(fh.read())


def serialize_matrix(C: PCMatrix, header: str | None = None) -> str:
    """Full-matrix text with 17 significant digits; rows end with ``\\n``."""
    lines = []
    if header:
        lines.extend(f"# {h}" for h in header.splitlines())
    for row in C.entries:
        lines.append(" ".join(format(float(x), ".17g") for x in row))
    return "\n".join(lines) + "\n"
