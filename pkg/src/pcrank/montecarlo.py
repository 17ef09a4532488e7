"""Random PC matrices by disturbing consistent ones, and the distance-vs-inconsistency experiment.

Every sample draws from its own generator seeded by a 64-bit mix of
``(master_seed, d_index, sample_index)``, so records do not depend on how
samples are scheduled across workers.
"""

from __future__ import annotations

import io
import math
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from typing import Literal, TextIO

import numpy as np
from scipy.stats import spearmanr

from .bounds import envelope_from_ki, evaluate_rankings
from .errors import ConvergenceError, DomainError
from .inconsistency import DEFAULT_RI, RITable, koczkodaj_ki
from .matrix import PCMatrix, PriorityVector, induced_matrix
from .priority import EvmOptions, evm, gmm
from .similarity import kendall_distance

__all__ = [
    "CSV_COLUMNS",
    "DSummary",
    "ExperimentConfig",
    "ExperimentRecord",
    "ExperimentSummary",
    "GeneratorConfig",
    "config_from_mapping",
    "csv_header",
    "default_d_grid",
    "disturb",
    "generate_matrix",
    "parse_config_text",
    "random_weight_vector",
    "records_to_csv",
    "run_experiment",
    "sample_seed",
    "summarize",
    "write_csv",
]

WeightMode = Literal["uniform01", "loguniform_scale"]
FactorMode = Literal["uniform", "loguniform"]
WEIGHT_MODES = ("uniform01", "loguniform_scale")
FACTOR_MODES = ("uniform", "loguniform")
SAATY_MIN, SAATY_MAX = 1.0 / 9.0, 9.0

_MASK64 = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def sample_seed(master_seed: int, d_index: int, sample_index: int) -> int:
    """Stable 64-bit per-sample seed."""
    h = _splitmix64(master_seed & _MASK64)
    h = _splitmix64(h ^ (d_index & _MASK64))
    return _splitmix64(h ^ (sample_index & _MASK64))


def _rng(seed: int | np.random.Generator) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_weight_vector(
    n: int, mode: WeightMode = "uniform01", rng_seed: int | np.random.Generator = 0
) -> PriorityVector:
    """Random ranking vector.

    ``uniform01`` draws each component uniformly on ``(0, 1]``;
    ``loguniform_scale`` draws log-uniformly on ``[1/9, 9]``.
    """
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    rng = _rng(rng_seed)
    if mode == "uniform01":
        w = 1.0 - rng.random(n)
    elif mode == "loguniform_scale":
        w = np.exp(rng.uniform(-math.log(9.0), math.log(9.0), n))
    else:
        raise DomainError(f"unknown weight mode {mode!r}")
    return PriorityVector(w)


def disturb(
    C: PCMatrix,
    d: float,
    mode: FactorMode = "uniform",
    clamp: bool = False,
    rng_seed: int | np.random.Generator = 0,
) -> PCMatrix:
    """Multiply each upper entry by a random factor in ``[1/d, d]``.

    ``uniform`` draws the factor uniformly on ``[1/d, d]``; ``loguniform``
    draws ``exp(U(-ln d, ln d))``. Lower entries follow by reciprocity.
    With ``clamp`` the products are clipped to ``[1/9, 9]``.
    """
    if not d >= 1.0:
        raise DomainError(f"disturbance level must be >= 1, got {d!r}")
    if d == 1.0:
        return C
    rng = _rng(rng_seed)
    m = C.upper.size
    if mode == "uniform":
        r = rng.uniform(1.0 / d, d, m)
    elif mode == "loguniform":
        r = np.exp(rng.uniform(-math.log(d), math.log(d), m))
    else:
        raise DomainError(f"unknown factor mode {mode!r}")
    u = C.upper * r
    if clamp:
        u = np.clip(u, SAATY_MIN, SAATY_MAX)
    return PCMatrix(u, C.n)


@dataclass(frozen=True)
class GeneratorConfig:
    n: int = 4
    d: float = 1.0
    weight_mode: WeightMode = "uniform01"
    factor_mode: FactorMode = "uniform"
    clamp_to_scale: bool = False

    def __post_init__(self) -> None:
        if self.n < 3:
            raise DomainError(f"n must be >= 3, got {self.n}")
        if not self.d >= 1.0:
            raise DomainError(f"d must be >= 1, got {self.d!r}")
        if self.weight_mode not in WEIGHT_MODES:
            raise DomainError(f"unknown weight mode {self.weight_mode!r}")
        if self.factor_mode not in FACTOR_MODES:
            raise DomainError(f"unknown factor mode {self.factor_mode!r}")


def generate_matrix(cfg: GeneratorConfig, seed: int | np.random.Generator) -> PCMatrix:
    """Random consistent matrix disturbed at level ``cfg.d``; one generator feeds both steps."""
    rng = _rng(seed)
    w = random_weight_vector(cfg.n, cfg.weight_mode, rng)
    return disturb(induced_matrix(w), cfg.d, cfg.factor_mode, cfg.clamp_to_scale, rng)


def default_d_grid(start: float = 1.0, stop: float = 10.0, step: float = 0.25) -> list[float]:
    if step <= 0 or stop < start:
        raise DomainError("d grid needs step > 0 and stop >= start")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + k * step, 12) for k in range(count)]


@dataclass(frozen=True)
class ExperimentConfig:
    n: int = 4
    d_grid: tuple[float, ...] = field(default_factory=lambda: tuple(default_d_grid()))
    samples_per_d: int = 200
    master_seed: int = 0
    generator: GeneratorConfig | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "d_grid", tuple(float(d) for d in self.d_grid))
        if not self.d_grid:
            raise DomainError("d_grid must not be empty")
        if any(not d >= 1.0 for d in self.d_grid):
            raise DomainError("every d in d_grid must be >= 1")
        if self.samples_per_d < 1:
            raise DomainError("samples_per_d must be >= 1")
        gen = self.generator or GeneratorConfig(n=self.n)
        if gen.n != self.n:
            gen = GeneratorConfig(self.n, gen.d, gen.weight_mode, gen.factor_mode, gen.clamp_to_scale)
        object.__setattr__(self, "generator", gen)


@dataclass(frozen=True)
class ExperimentRecord:
    d: float
    sample_index: int
    seed: int
    ci: float
    cr: float
    ki: float
    kappa: float
    md: float
    cheb: float
    kendall: int
    comp: float
    comp_lower: float
    comp_upper: float
    comp_max: float
    chain_ok: bool
    md_ok: bool
    cheb_ok: bool
    mean_ok: bool
    converged: bool = True
    # minimal slacks, kept out of the CSV
    slack_chain: float = math.nan
    slack_md: float = math.nan
    slack_cheb: float = math.nan
    slack_mean: float = math.nan
    md_high: float = math.nan
    compat_high: float = math.nan

    @property
    def all_ok(self) -> bool:
        return self.chain_ok and self.md_ok and self.cheb_ok and self.mean_ok


def _sample(
    gen: GeneratorConfig,
    d: float,
    sample_index: int,
    seed: int,
    ri: float,
    opts: EvmOptions,
) -> ExperimentRecord:
    C = generate_matrix(GeneratorConfig(gen.n, d, gen.weight_mode, gen.factor_mode, gen.clamp_to_scale), seed)
    n = C.n
    ki, _ = koczkodaj_ki(C)
    try:
        ev = evm(C, opts)
    except ConvergenceError:
        nan = math.nan
        return ExperimentRecord(d, sample_index, seed, nan, nan, ki, 1.0 - ki, nan, nan, -1,
                                nan, nan, nan, nan, False, False, False, False, converged=False)
    w_gm = gmm(C)
    ci = (ev.lambda_max - n) / (n - 1)
    if -1e-9 <= ci < 0:
        ci = 0.0
    rep = evaluate_rankings(envelope_from_ki(ki, n), ev.weights, w_gm)
    o = rep.observed
    return ExperimentRecord(
        d=d,
        sample_index=sample_index,
        seed=seed,
        ci=ci,
        cr=ci / ri if ri > 0 else math.nan,
        ki=ki,
        kappa=rep.envelope.kappa,
        md=o.md,
        cheb=o.cheb,
        kendall=kendall_distance(ev.weights, w_gm),
        comp=o.comp,
        comp_lower=o.comp_lower,
        comp_upper=o.comp_upper,
        comp_max=o.comp_max,
        chain_ok=rep.chain_ok,
        md_ok=rep.md_ok,
        cheb_ok=rep.cheb_ok,
        mean_ok=rep.mean_ok,
        slack_chain=rep.slack.chain,
        slack_md=rep.slack.md,
        slack_cheb=rep.slack.cheb,
        slack_mean=rep.slack.mean,
        md_high=rep.envelope.md_high,
        compat_high=rep.envelope.compat_high,
    )


def _run_chunk(args) -> list[ExperimentRecord]:
    gen, jobs, ri, opts = args
    return [_sample(gen, d, s, seed, ri, opts) for d, s, seed in jobs]


def run_experiment(
    cfg: ExperimentConfig,
    *,
    workers: int = 1,
    ri: RITable = DEFAULT_RI,
    opts: EvmOptions | None = None,
) -> list[ExperimentRecord]:
    """Generate ``samples_per_d`` matrices per disturbance level and measure each.

    Records come back ordered by ``(d_index, sample_index)`` whatever the
    number of worker processes. Rows whose EVM fails to converge are kept
    with ``converged=False`` and NaN measurements.
    """
    opts = opts or EvmOptions()
    ri_n = ri.values.get(cfg.n, math.nan)
    jobs = [
        (d, s, sample_seed(cfg.master_seed, di, s))
        for di, d in enumerate(cfg.d_grid)
        for s in range(cfg.samples_per_d)
    ]
    if workers <= 1 or len(jobs) < 2:
        return _run_chunk((cfg.generator, jobs, ri_n, opts))
    size = max(1, math.ceil(len(jobs) / (workers * 4)))
    chunks = [(cfg.generator, jobs[i:i + size], ri_n, opts) for i in range(0, len(jobs), size)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return [r for part in pool.map(_run_chunk, chunks) for r in part]


# ---------------------------------------------------------------- CSV output

CSV_COLUMNS = (
    "d", "sample", "seed", "ci", "cr", "ki", "kappa", "md", "cheb", "kendall",
    "comp", "comp_lower", "comp_upper", "comp_max", "chain_ok", "md_ok", "cheb_ok", "mean_ok",
)


def _fmt(x: object) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".17g")


def csv_header(cfg: ExperimentConfig) -> str:
    g = cfg.generator
    return (
        f"# pcrank-experiment v1; n={cfg.n}; factor_mode={g.factor_mode}; "
        f"weight_mode={g.weight_mode}; clamp={str(g.clamp_to_scale).lower()}; "
        f"master_seed={cfg.master_seed}"
    )


def write_csv(records: Iterable[ExperimentRecord], cfg: ExperimentConfig, out: TextIO) -> None:
    out.write(csv_header(cfg) + "\n")
    out.write(",".join(CSV_COLUMNS) + "\n")
    for r in records:
        row = (r.d, r.sample_index, r.seed, r.ci, r.cr, r.ki, r.kappa, r.md, r.cheb, r.kendall,
               r.comp, r.comp_lower, r.comp_upper, r.comp_max, r.chain_ok, r.md_ok, r.cheb_ok, r.mean_ok)
        out.write(",".join(_fmt(x) for x in row) + "\n")


def records_to_csv(records: Iterable[ExperimentRecord], cfg: ExperimentConfig) -> str:
    buf = io.StringIO(newline="")
    write_csv(records, cfg, buf)
    return buf.getvalue()


# ---------------------------------------------------------------- summary


@dataclass(frozen=True)
class DSummary:
    d: float
    count: int
    mean_md: float
    max_md: float
    mean_cheb: float
    max_cheb: float
    mean_comp_upper: float
    max_comp_upper: float
    mean_ci: float
    mean_ki: float
    max_md_over_bound: float


@dataclass(frozen=True)
class ExperimentSummary:
    """Aggregates of an experiment run.

    ``min_slack_*`` is the tightest observed gap per inequality group, and
    ``max_md_over_bound`` the largest observed ``MD / (n (1/kappa^2 - 1))``
    over inconsistent samples; both quantify how loose the bounds are.
    """

    per_d: tuple[DSummary, ...]
    total: int
    violations: int
    nonconverged: int
    min_slack_chain: float
    min_slack_md: float
    min_slack_cheb: float
    min_slack_mean: float
    max_md_over_bound: float
    ki_trend_spearman: float
    max_md_at_d1: float

    def to_dict(self) -> dict:
        out = {f.name: getattr(self, f.name) for f in fields(self) if f.name != "per_d"}
        out["per_d"] = [{f.name: getattr(s, f.name) for f in fields(s)} for s in self.per_d]
        return out


def _ratio(md: float, bound: float) -> float:
    return md / bound if bound > 0 else math.nan


def summarize(records: Sequence[ExperimentRecord]) -> ExperimentSummary:
    """Per-d aggregates, violation count and bound-looseness statistics.

    Raises:
        ValueError: ``records`` is empty.
    """
    if not records:
        raise ValueError("cannot summarize an empty record list")
    ok = [r for r in records if r.converged]
    by_d: dict[float, list[ExperimentRecord]] = {}
    for r in ok:
        by_d.setdefault(r.d, []).append(r)

    def mean(xs):
        return float(np.mean(xs)) if len(xs) else math.nan

    def nanmax(xs):
        xs = [x for x in xs if not math.isnan(x)]
        return max(xs) if xs else math.nan

    per_d = []
    for d in sorted(by_d):
        rs = by_d[d]
        per_d.append(DSummary(
            d=d,
            count=len(rs),
            mean_md=mean([r.md for r in rs]),
            max_md=max(r.md for r in rs),
            mean_cheb=mean([r.cheb for r in rs]),
            max_cheb=max(r.cheb for r in rs),
            mean_comp_upper=mean([r.comp_upper for r in rs]),
            max_comp_upper=max(r.comp_upper for r in rs),
            mean_ci=mean([r.ci for r in rs]),
            mean_ki=mean([r.ki for r in rs]),
            max_md_over_bound=nanmax([_ratio(r.md, r.md_high) for r in rs]),
        ))
    if len(per_d) >= 3:
        rho = float(spearmanr([s.d for s in per_d], [s.mean_ki for s in per_d])[0])
    else:
        rho = math.nan
    d1 = [r.md for r in ok if r.d == 1.0]
    return ExperimentSummary(
        per_d=tuple(per_d),
        total=len(records),
        violations=sum(not r.all_ok for r in ok),
        nonconverged=len(records) - len(ok),
        min_slack_chain=min((r.slack_chain for r in ok), default=math.nan),
        min_slack_md=min((r.slack_md for r in ok), default=math.nan),
        min_slack_cheb=min((r.slack_cheb for r in ok), default=math.nan),
        min_slack_mean=min((r.slack_mean for r in ok), default=math.nan),
        max_md_over_bound=nanmax([_ratio(r.md, r.md_high) for r in ok]),
        ki_trend_spearman=rho,
        max_md_at_d1=max(d1) if d1 else math.nan,
    )


# ---------------------------------------------------------------- config files

_BOOL = {"1": True, "true": True, "yes": True, "on": True,
         "0": False, "false": False, "no": False, "off": False}


def _parse_grid(value: str) -> list[float]:
    if ":" in value:
        parts = [float(p) for p in value.split(":")]
        if len(parts) != 3:
            raise DomainError(f"d_grid range must be start:stop:step, got {value!r}")
        return default_d_grid(*parts)
    return [float(p) for p in value.replace(",", " ").split()]


def parse_config_text(text: str) -> dict[str, object]:
    """Flat ``key = value`` lines into keyword arguments for :func:`config_from_mapping`."""
    out: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise DomainError(f"config line {lineno}: expected key = value, got {raw!r}")
        out[key.strip()] = value.strip()
    return out


def config_from_mapping(values: dict[str, object]) -> tuple[ExperimentConfig, int]:
    """Build an experiment config (and worker count) from string or typed values.

    Recognized keys: ``n``, ``d_grid`` (``start:stop:step`` or a list),
    ``d_start``/``d_stop``/``d_step``, ``samples_per_d``, ``master_seed``,
    ``weight_mode``, ``factor_mode``, ``clamp_to_scale`` (alias ``clamp``)
    and ``workers``.
    """
    v = dict(values)
    known = {"n", "d_grid", "d_start", "d_stop", "d_step", "samples_per_d", "master_seed",
             "weight_mode", "factor_mode", "clamp_to_scale", "clamp", "workers"}
    unknown = set(v) - known
    if unknown:
        raise DomainError(f"unknown config keys: {', '.join(sorted(unknown))}")
    try:
        n = int(v.get("n", 4))
        grid = v.get("d_grid")
        if grid is None:
            grid = default_d_grid(float(v.get("d_start", 1.0)), float(v.get("d_stop", 10.0)),
                                  float(v.get("d_step", 0.25)))
        elif isinstance(grid, str):
            grid = _parse_grid(grid)
        clamp = v.get("clamp_to_scale", v.get("clamp", False))
        if isinstance(clamp, str):
            clamp = _BOOL[clamp.lower()]
        weight_mode = str(v.get("weight_mode", "uniform01"))
        if weight_mode == "loguniform":
            weight_mode = "loguniform_scale"
        gen = GeneratorConfig(n=n, weight_mode=weight_mode,
                              factor_mode=str(v.get("factor_mode", "uniform")),
                              clamp_to_scale=bool(clamp))
        cfg = ExperimentConfig(n=n, d_grid=tuple(grid), samples_per_d=int(v.get("samples_per_d", 200)),
                               master_seed=int(v.get("master_seed", 0)), generator=gen)
        workers = int(v.get("workers", 1))
    except (KeyError, ValueError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"invalid config value: {exc}") from None
    return cfg, workers
