"""Monte Carlo model of multi-message distributed computation time.

Workers draw a shifted-exponential per-task duration; a worker that is
slow is slow for all of its sub-tasks, so its j-th result reaches the
master at j times its duration (communication is instantaneous).  A run
ends when the recovery-threshold-th result arrives, decode time
excluded.  Trials use independent child RNG streams derived from
(seed, trial index), so serial and parallel execution agree bit for
bit.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .baseline import GaspParams, gasp_max_m, gasp_rth
from .bivariate import SchemeParams
from .errors import IncompletableError, ParameterError
from .scheme import max_m_for_budget, recovery_threshold, with_m

PROPOSED = "proposed"
GASP = "gasp"


@dataclass(frozen=True)
class WorkerClass:
    """A homogeneous group of workers: `count` machines with per-task
    duration nu + Exp(lam) seconds."""

    count: int
    lam: float
    nu: float

    def __post_init__(self):
        if self.count < 1:
            raise ParameterError(f"worker class count must be >= 1, got {self.count}")
        if self.lam <= 0:
            raise ParameterError(f"rate lam must be > 0, got {self.lam}")
        if self.nu < 0:
            raise ParameterError(f"shift nu must be >= 0, got {self.nu}")


@dataclass(frozen=True)
class SimConfig:
    classes: tuple[WorkerClass, ...]
    scheme_rth: int
    m: int
    trials: int
    seed: int

    def __post_init__(self):
        if self.scheme_rth < 1 or self.m < 1 or self.trials < 1:
            raise ParameterError(
                f"scheme_rth, m and trials must be >= 1, got {self}"
            )

    @property
    def n_workers(self) -> int:
        return sum(c.count for c in self.classes)


@dataclass(frozen=True)
class SimResult:
    mean_time: float
    std_error: float
    completion_rate: float
    per_trial_times: np.ndarray | None = None


def sample_task_time(lam: float, nu: float, rng: np.random.Generator) -> float:
    """One shifted-exponential duration via inverse CDF on a uniform draw."""
    u = rng.random()
    return nu + -math.log1p(-u) / lam


def _class_durations(cls: WorkerClass, rng: np.random.Generator) -> np.ndarray:
    u = rng.random(cls.count)
    return cls.nu + -np.log1p(-u) / cls.lam


def simulate_once(cfg: SimConfig, rng: np.random.Generator) -> float:
    """Arrival time of the scheme_rth-th sub-task result in one trial.

    Each worker gets one duration draw (class by class, in declaration
    order) and delivers its j-th result at j times that duration, for
    j = 1..m.
    """
    if cfg.n_workers * cfg.m < cfg.scheme_rth:
        raise IncompletableError(
            f"{cfg.n_workers} workers x m={cfg.m} tasks cannot reach "
            f"the threshold {cfg.scheme_rth}"
        )
    durations = np.concatenate([_class_durations(c, rng) for c in cfg.classes])
    arrivals = durations[:, None] * np.arange(1, cfg.m + 1)
    pool = arrivals.ravel()
    k = cfg.scheme_rth - 1
    return float(np.partition(pool, k)[k])


def expected_time(
    cfg: SimConfig, threads: int | None = None, keep_times: bool = False
) -> SimResult:
    """Monte Carlo mean completion time with its standard error.

    Deterministic for a given cfg.seed regardless of `threads`: trial i
    always consumes the i-th spawned child stream.
    """
    if cfg.n_workers * cfg.m < cfg.scheme_rth:
        raise IncompletableError(
            f"{cfg.n_workers} workers x m={cfg.m} tasks cannot reach "
            f"the threshold {cfg.scheme_rth}"
        )
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.trials)

    def run(i: int) -> float:
        return simulate_once(cfg, np.random.default_rng(children[i]))

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            times = np.fromiter(
                pool.map(run, range(cfg.trials)), dtype=float, count=cfg.trials
            )
    else:
        times = np.fromiter(
            (run(i) for i in range(cfg.trials)), dtype=float, count=cfg.trials
        )
    mean = float(times.mean())
    stderr = float(times.std(ddof=1) / math.sqrt(cfg.trials)) if cfg.trials > 1 else 0.0
    return SimResult(
        mean_time=mean,
        std_error=stderr,
        completion_rate=1.0,
        per_trial_times=times if keep_times else None,
    )


@dataclass(frozen=True)
class SweepRow:
    scheme: str
    budget: int
    m: int
    r_th: int
    mean_time_s: float
    std_err_s: float
    trials: int
    seed: int


def scheme_point(scheme: str, budget: int, params: SchemeParams) -> tuple[int, int]:
    """(m, recovery threshold) of a scheme under a partition budget."""
    if scheme == PROPOSED:
        m = max_m_for_budget(budget, params.L)
        return m, recovery_threshold(with_m(params, m))
    if scheme == GASP:
        m = gasp_max_m(budget)
        return m, gasp_rth(GaspParams(params.K, params.L, params.T, m))
    raise ParameterError(f"unknown scheme {scheme!r}; use {PROPOSED!r} or {GASP!r}")


def budget_sweep(
    classes: Sequence[WorkerClass],
    params: SchemeParams,
    budgets: Sequence[int],
    scheme: str,
    trials: int,
    seed: int,
    threads: int | None = None,
) -> list[SweepRow]:
    """Expected completion time per upload budget, one row per budget.

    Every budget reuses the same seed, so budgets that map to the same
    (m, threshold) produce identical rows and comparisons across budgets
    share their random draws.
    """
    rows = []
    for budget in budgets:
        m, r_th = scheme_point(scheme, budget, params)
        cfg = SimConfig(
            classes=tuple(classes), scheme_rth=r_th, m=m, trials=trials, seed=seed
        )
        res = expected_time(cfg, threads=threads)
        rows.append(
            SweepRow(
                scheme=scheme,
                budget=budget,
                m=m,
                r_th=r_th,
                mean_time_s=res.mean_time,
                std_err_s=res.std_error,
                trials=trials,
                seed=seed,
            )
        )
    return rows


SWEEP_CSV_HEADER = "scheme,budget,m,r_th,mean_time_s,std_err_s,trials,seed"


def sweep_rows_to_csv(rows: Sequence[SweepRow]) -> str:
    """Render sweep rows to the stable CSV schema (6 significant digits)."""
    lines = [SWEEP_CSV_HEADER]
    for r in rows:
        lines.append(
            f"{r.scheme},{r.budget},{r.m},{r.r_th},"
            f"{r.mean_time_s:.6g},{r.std_err_s:.6g},{r.trials},{r.seed}"
        )
    return "\n".join(lines) + "\n"
