"""Saaty's consistency index/ratio and Koczkodaj's triad index."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from types import MappingProxyType

import numpy as np
from numpy.typing import NDArray

from .errors import DomainError, RILookupError
from .matrix import PCMatrix
from .priority import EvmOptions, evm, power_iteration

__all__ = [
    "DEFAULT_RI",
    "InconsistencyReport",
    "RITable",
    "SAATY_SCALE",
    "Triad",
    "consistency_ratio",
    "estimate_ri",
    "inconsistency_report",
    "koczkodaj_ki",
    "koczkodaj_local",
    "load_ri_table",
    "parse_ri_table",
    "saaty_ci",
]

CI_CLAMP = 1e-9

SAATY_SCALE: tuple[float, ...] = tuple(
    [1.0 / k for k in range(9, 1, -1)] + [float(k) for k in range(1, 10)]
)


@dataclass(frozen=True)
class Triad:
    """Zero-based indices ``(i, k, j)`` of a triad and its local KI value."""

    i: int
    k: int
    j: int
    local_ki: float

    def __post_init__(self) -> None:
        if len({self.i, self.k, self.j}) != 3:
            raise DomainError(f"triad indices must be distinct: {(self.i, self.k, self.j)}")
        if not 0.0 <= self.local_ki < 1.0:
            raise DomainError(f"local KI must lie in [0, 1), got {self.local_ki!r}")

    @property
    def indices(self) -> tuple[int, int, int]:
        return (self.i, self.k, self.j)


@dataclass(frozen=True)
class RITable:
    """Random consistency index RI(n) keyed by matrix order."""

    values: Mapping[int, float]

    def __post_init__(self) -> None:
        for n, v in self.values.items():
            if not v > 0:
                raise DomainError(f"RI({n}) must be positive, got {v!r}")
        object.__setattr__(self, "values", MappingProxyType(dict(self.values)))

    def __getitem__(self, n: int) -> float:
        try:
            return self.values[n]
        except KeyError:
            raise RILookupError(n) from None

    def __contains__(self, n: object) -> bool:
        return n in self.values


# Widely used literature values for orders 3..10; regenerate with estimate_ri.
DEFAULT_RI = RITable({3: 0.58, 4: 0.90, 5: 1.12, 6: 1.24, 7: 1.32, 8: 1.41, 9: 1.45, 10: 1.49})


@dataclass(frozen=True)
class InconsistencyReport:
    lambda_max: float
    ci: float
    cr: float | None
    ki: float | None
    worst_triad: Triad | None

    @property
    def acceptable(self) -> bool | None:
        """Saaty's ``CR <= 0.1`` rule, or None when CR is unavailable."""
        return None if self.cr is None else self.cr <= 0.1


def _clamp_ci(ci: float) -> float:
    return 0.0 if -CI_CLAMP <= ci < 0.0 else ci


def saaty_ci(C: PCMatrix, opts: EvmOptions | None = None) -> float:
    """``(lambda_max - n) / (n - 1)`` using the EVM eigenvalue."""
    lam = evm(C, opts).lambda_max
    return _clamp_ci((lam - C.n) / (C.n - 1))


def consistency_ratio(C: PCMatrix, ri: RITable = DEFAULT_RI, opts: EvmOptions | None = None) -> float:
    """``CI / RI(n)``.

    Raises:
        RILookupError: ``ri`` has no entry for the order of ``C``.
    """
    r = ri[C.n]
    return saaty_ci(C, opts) / r


def estimate_ri(n: int, samples: int, seed: int) -> float:
    """Mean CI of random reciprocal matrices over the discrete Saaty scale.

    Each upper-triangle entry is drawn uniformly from
    ``{1/9, ..., 1/2, 1, 2, ..., 9}``.
    """
    if n < 3:
        raise DomainError(f"RI is only meaningful for n >= 3, got {n}")
    if samples < 1:
        raise DomainError(f"samples must be >= 1, got {samples}")
    rng = np.random.default_rng(seed)
    scale = np.array(SAATY_SCALE)
    iu = np.triu_indices(n, 1)
    total = 0.0
    chunk = 20_000
    for start in range(0, samples, chunk):
        m = min(chunk, samples - start)
        u = scale[rng.integers(0, scale.size, size=(m, iu[0].size))]
        a = np.ones((m, n, n))
        a[:, iu[0], iu[1]] = u
        a[:, iu[1], iu[0]] = 1.0 / u
        _, lam, _, _ = power_iteration(a)
        ci = (lam - n) / (n - 1)
        ci[(ci < 0) & (ci >= -CI_CLAMP)] = 0.0
        total += float(ci.sum())
    return total / samples


_BELOW_ONE = float(np.nextafter(1.0, 0.0))


def _local(cij: NDArray | float, cik: NDArray | float, ckj: NDArray | float):
    x = cij / (cik * ckj)
    v = np.minimum(np.abs(1.0 - x), np.abs(1.0 - 1.0 / x))
    # for cycle ratios beyond ~2**53 the true value rounds up to 1.0
    return np.minimum(v, _BELOW_ONE)


def koczkodaj_local(C: PCMatrix, i: int, k: int, j: int) -> float:
    """``min(|1 - c_ij/(c_ik c_kj)|, |1 - c_ik c_kj/c_ij|)`` for zero-based indices."""
    n = C.n
    for idx in (i, k, j):
        if not (0 <= idx < n):
            raise DomainError(f"index {idx} out of range for order {n}")
    if len({i, k, j}) != 3:
        raise DomainError(f"triad indices must be distinct: {(i, k, j)}")
    a = C.entries
    return float(_local(a[i, j], a[i, k], a[k, j]))


@lru_cache(maxsize=64)
def _triples(n: int) -> tuple[NDArray[np.intp], NDArray[np.intp], NDArray[np.intp]]:
    t = np.array(list(combinations(range(n), 3)), dtype=np.intp).reshape(-1, 3)
    return t[:, 0], t[:, 1], t[:, 2]


def koczkodaj_ki(C: PCMatrix) -> tuple[float, Triad]:
    """Maximum local inconsistency over all triads and the first triad attaining it.

    Each unordered triple ``i < k < j`` is evaluated once with ``k`` in the
    middle: every reordering of a triple yields the cycle product or its
    reciprocal, on which the local index is symmetric. Ties resolve to the
    lexicographically smallest triple.

    Raises:
        DomainError: ``n <= 2``.
    """
    if C.n <= 2:
        raise DomainError("Koczkodaj's index is defined only for n > 2")
    a = C.entries
    i, k, j = _triples(C.n)
    vals = _local(a[i, j], a[i, k], a[k, j])
    best = int(np.argmax(vals))
    ki = float(vals[best])
    return ki, Triad(int(i[best]), int(k[best]), int(j[best]), ki)


def inconsistency_report(
    C: PCMatrix, ri: RITable = DEFAULT_RI, opts: EvmOptions | None = None
) -> InconsistencyReport:
    lam = evm(C, opts).lambda_max
    ci = _clamp_ci((lam - C.n) / (C.n - 1))
    cr = ci / ri[C.n] if C.n in ri else None
    if C.n > 2:
        ki, triad = koczkodaj_ki(C)
    else:
        ki, triad = None, None
    return InconsistencyReport(lam, ci, cr, ki, triad)


def parse_ri_table(text: str) -> RITable:
    """Parse ``n = value`` lines; ``#`` starts a comment."""
    values: dict[int, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise DomainError(f"line {lineno}: expected 'n = value', got {raw!r}")
        try:
            values[int(key.strip())] = float(val.strip())
        except ValueError:
            raise DomainError(f"line {lineno}: expected 'n = value', got {raw!r}") from None
    return RITable(values)


def load_ri_table(path: str) -> RITable:
    with open(path, encoding="utf-8") as fh:
        return parse_ri_table(fh.read())
