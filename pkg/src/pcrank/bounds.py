"""Inconsistency-driven bounds on the divergence of EVM and GMM rankings.

With ``kappa = 1 - KI(C)`` the EVM vector ``w_ev`` and GMM vector ``w_gm``
(both summing to 1) satisfy::

    kappa^2 <= comp_lower <= comp <= comp_upper <= comp_max <= 1/kappa^2
    n (kappa^2 - 1) <= MD(w_ev, w_gm) <= n (1/kappa^2 - 1)
    kappa^2 - 1 <= MD / n <= 1/kappa^2 - 1
    ChD(w_ev, w_gm) <= 1/kappa^2 - 1
    kappa^2 <= w_ev_i / w_gm_i <= 1/kappa^2          for every i

The checks below evaluate each inequality with an additive tolerance of
``1e-9 * max(1, |bound|)``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DomainError
from .inconsistency import koczkodaj_ki
from .matrix import PCMatrix, PriorityVector
from .priority import EvmOptions, evm, gmm
from .similarity import chebyshev, comp_vectors, manhattan

__all__ = [
    "BOUND_CAP",
    "CHECK_TOL",
    "BoundCheckReport",
    "BoundEnvelope",
    "Observed",
    "Slack",
    "check_bounds",
    "check_corollaries",
    "check_theorem1",
    "check_theorem2",
    "envelope",
    "envelope_from_ki",
    "evaluate_rankings",
    "lemma1_check",
    "lemma1_ratios",
]

CHECK_TOL = 1e-9
BOUND_CAP = 1e12
KAPPA_FLOOR = 1e-6


def _tol(bound: float) -> float:
    return CHECK_TOL * max(1.0, abs(bound))


@dataclass(frozen=True)
class BoundEnvelope:
    """Bounds implied by KI for a matrix of order ``n``.

    ``uninformative`` is set when ``kappa < 1e-6``; the unbounded fields are
    then capped at ``1e12`` (any observed value lies inside them anyway).
    """

    n: int
    kappa: float
    compat_low: float
    compat_high: float
    md_low: float
    md_high: float
    cheb_high: float
    mean_low: float
    mean_high: float
    uninformative: bool = False


@dataclass(frozen=True)
class Observed:
    comp: float
    comp_lower: float
    comp_upper: float
    comp_max: float
    md: float
    cheb: float
    mean_md: float


@dataclass(frozen=True)
class Slack:
    """Smallest ``upper - lower`` gap per inequality group (negative = violated)."""

    chain: float
    md: float
    cheb: float
    mean: float


@dataclass(frozen=True)
class BoundCheckReport:
    envelope: BoundEnvelope
    observed: Observed
    chain_ok: bool
    md_ok: bool
    cheb_ok: bool
    mean_ok: bool
    slack: Slack

    @property
    def all_ok(self) -> bool:
        return self.chain_ok and self.md_ok and self.cheb_ok and self.mean_ok

    def to_dict(self) -> dict[str, float | int | bool]:
        """Flat mapping of every field; nested records are inlined, slacks prefixed ``slack_``."""
        out: dict[str, float | int | bool] = {}
        out.update(asdict(self.envelope))
        out.update(asdict(self.observed))
        for name in ("chain_ok", "md_ok", "cheb_ok", "mean_ok"):
            out[name] = getattr(self, name)
        out.update({f"slack_{k}": v for k, v in asdict(self.slack).items()})
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), allow_nan=False)


def envelope_from_ki(ki: float, n: int) -> BoundEnvelope:
    if not 0.0 <= ki < 1.0:
        raise DomainError(f"KI must lie in [0, 1), got {ki!r}")
    kappa = 1.0 - ki
    k2 = kappa * kappa
    uninformative = kappa < KAPPA_FLOOR
    inv = BOUND_CAP if uninformative else min(1.0 / k2, BOUND_CAP)
    return BoundEnvelope(
        n=n,
        kappa=kappa,
        compat_low=k2,
        compat_high=inv,
        md_low=n * (k2 - 1.0),
        md_high=min(n * (inv - 1.0), BOUND_CAP),
        cheb_high=inv - 1.0,
        mean_low=k2 - 1.0,
        mean_high=inv - 1.0,
        uninformative=uninformative,
    )


def envelope(C: PCMatrix) -> BoundEnvelope:
    """Bound envelope from Koczkodaj's index of ``C``.

    Raises:
        DomainError: ``n <= 2``.
    """
    ki, _ = koczkodaj_ki(C)
    return envelope_from_ki(ki, C.n)


def lemma1_ratios(w_ev: PriorityVector, w_gm: PriorityVector) -> np.ndarray:
    return w_ev.weights / w_gm.weights


def _lemma1_ok(env: BoundEnvelope, w_ev: PriorityVector, w_gm: PriorityVector) -> bool:
    r = lemma1_ratios(w_ev, w_gm)
    lo, hi = env.compat_low, env.compat_high
    return bool((r >= lo * (1 - CHECK_TOL)).all() and (r <= hi * (1 + CHECK_TOL)).all())


def evaluate_rankings(
    env: BoundEnvelope, w_ev: PriorityVector, w_gm: PriorityVector
) -> BoundCheckReport:
    """Test every bound in ``env`` against a pair of rankings."""
    comp = comp_vectors(w_ev, w_gm)
    md = manhattan(w_ev, w_gm)
    cheb = chebyshev(w_ev, w_gm)
    n = env.n
    obs = Observed(comp.comp, comp.comp_lower, comp.comp_upper, comp.comp_max, md, cheb, md / n)

    chain = (env.compat_low, comp.comp_lower, comp.comp, comp.comp_upper, comp.comp_max, env.compat_high)
    gaps = [b - a for a, b in zip(chain, chain[1:])]
    chain_ok = all(b - a >= -_tol(b) for a, b in zip(chain, chain[1:]))

    md_ok = env.md_low - _tol(env.md_low) <= md <= env.md_high + _tol(env.md_high)
    mean_ok = env.mean_low - _tol(env.mean_low) <= obs.mean_md <= env.mean_high + _tol(env.mean_high)
    cheb_ok = cheb <= env.cheb_high + _tol(env.cheb_high)

    slack = Slack(
        chain=min(gaps),
        md=min(md - env.md_low, env.md_high - md),
        cheb=env.cheb_high - cheb,
        mean=min(obs.mean_md - env.mean_low, env.mean_high - obs.mean_md),
    )
    return BoundCheckReport(env, obs, chain_ok, md_ok, cheb_ok, mean_ok, slack)


def check_bounds(
    C: PCMatrix,
    opts: EvmOptions | None = None,
    *,
    w_ev: PriorityVector | None = None,
    w_gm: PriorityVector | None = None,
) -> BoundCheckReport:
    """Compute EVM and GMM rankings of ``C`` and test every bound against them.

    Precomputed rankings may be passed to avoid recomputation.

    Raises:
        DomainError: ``n <= 2``.
        ConvergenceError: EVM did not converge.
    """
    env = envelope(C)
    if w_ev is None:
        w_ev = evm(C, opts).weights
    if w_gm is None:
        w_gm = gmm(C)
    return evaluate_rankings(env, w_ev, w_gm)


def check_theorem1(C: PCMatrix, opts: EvmOptions | None = None) -> BoundCheckReport:
    """Compatibility chain between ``kappa^2`` and ``1/kappa^2`` (see ``chain_ok``)."""
    return check_bounds(C, opts)


def check_theorem2(C: PCMatrix, opts: EvmOptions | None = None) -> BoundCheckReport:
    """Manhattan distance interval ``[n(kappa^2-1), n(1/kappa^2-1)]`` (see ``md_ok``)."""
    return check_bounds(C, opts)


def check_corollaries(C: PCMatrix, opts: EvmOptions | None = None) -> BoundCheckReport:
    """Mean per-alternative distance and Chebyshev bounds (``mean_ok``, ``cheb_ok``)."""
    return check_bounds(C, opts)


def lemma1_check(
    C: PCMatrix,
    opts: EvmOptions | None = None,
    *,
    w_ev: PriorityVector | None = None,
    w_gm: PriorityVector | None = None,
) -> bool:
    """True iff ``kappa^2 <= w_ev_i / w_gm_i <= 1/kappa^2`` for every ``i`` (relative tol 1e-9)."""
    env = envelope(C)
    if w_ev is None:
        w_ev = evm(C, opts).weights
    if w_gm is None:
        w_gm = gmm(C)
    return _lemma1_ok(env, w_ev, w_gm)
