"""Convergence and error-propagation sweeps."""
from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..bounds import EnvelopeSpec, Regime, envelope, fit_envelope_constant
from ..core import DelayGrid
from ..metrics import ErrorProfile, detect_plateau, estimate_order, layer_maxima, plateau_slope
from ..noise import NoiseSpec, RngStream
from ..rhs import ProblemId, make_test_problem
from ..solver import DivergenceError, euler_solve_batch, reference_solve
from .config import ExperimentConfig

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrialRow:
    problem: ProblemId
    gamma: float
    delta: float
    N: int
    h: float
    trial: int
    profile: ErrorProfile | None
    failure: str = ""

    @property
    def ok(self) -> bool:
        return self.profile is not None


@dataclass
class SummaryRow:
    problem: ProblemId
    gamma: float
    delta: float
    N: int
    h: float
    n_ok: int
    n_failed: int
    mean: float
    max: float
    std: float
    E_cum_mean: np.ndarray
    E_cum_max: np.ndarray
    E_cum_std: np.ndarray


@dataclass
class FitRow:
    problem: ProblemId
    gamma: float
    delta: float
    order_slope: float
    plateau: bool
    plateau_level: float
    plateau_slope: float
    tail_std: float
    regime: Regime
    envelope_C: float


def _stats(x: np.ndarray):
    """Mean, max and sample standard deviation along axis 0."""
    if len(x) == 0:
        nan = np.full(x.shape[1:], math.nan)
        return nan, nan, nan
    std = np.std(x, axis=0, ddof=1) if len(x) > 1 else np.zeros(x.shape[1:])
    return np.mean(x, axis=0), np.max(x, axis=0), std


def envelope_spec_for(problem_id: ProblemId, gamma: float, n: int) -> EnvelopeSpec:
    if problem_id is ProblemId.LIP_BENCH:
        return EnvelopeSpec(Regime.LIPSCHITZ)
    reg = make_test_problem(problem_id, gamma).regularity
    regime = Regime.HOLDER_GAMMA1 if gamma == 1.0 else Regime.HOLDER_GAMMA_LT1
    return EnvelopeSpec(regime, reg.alpha, reg.beta1, reg.beta2, gamma, n)


@dataclass
class ConvergenceTable:
    config: ExperimentConfig
    rows: list[TrialRow]
    timings: dict = field(default_factory=dict)

    def __post_init__(self):
        self.rows.sort(key=lambda r: (r.problem.index, r.gamma, r.delta, r.N, r.trial))

    @property
    def failed_count(self) -> int:
        return sum(not r.ok for r in self.rows)

    def summary(self) -> list[SummaryRow]:
        groups: dict[tuple, list[TrialRow]] = {}
        for r in self.rows:
            groups.setdefault((r.problem, r.gamma, r.delta, r.N), []).append(r)
        out = []
        for (p, g, d, N), rows in groups.items():
            ok = [r for r in rows if r.ok]
            cum = np.array([r.profile.E_cum for r in ok]).reshape(len(ok), self.config.n + 1)
            mean, mx, std = _stats(cum[:, -1])
            cmean, cmax, cstd = _stats(cum)
            out.append(SummaryRow(p, g, d, N, rows[0].h, len(ok), len(rows) - len(ok),
                                  float(mean), float(mx), float(std), cmean, cmax, cstd))
        return out

    def fits(self) -> list[FitRow]:
        cfg = self.config
        groups: dict[tuple, list[SummaryRow]] = {}
        for s in self.summary():
            if s.n_ok:
                groups.setdefault((s.problem, s.gamma, s.delta), []).append(s)
        out = []
        for (p, g, d), rows in groups.items():
            rows.sort(key=lambda s: s.h)
            pts = [(s.h, s.mean) for s in rows]
            spec = envelope_spec_for(p, g, cfg.n)
            C = fit_envelope_constant([(s.h, d, s.mean) for s in rows], spec)
            if len(pts) >= 2:
                slope = estimate_order(pts, min(cfg.order_window, len(pts)))
                tail = min(cfg.plateau_tail, len(pts))
                is_plateau, level = detect_plateau(pts, tail, cfg.plateau_slope_tol)
                pslope = plateau_slope(pts, tail)
                tail_std = math.sqrt(float(np.mean([s.std ** 2 for s in rows[:tail]])))
            else:
                slope = pslope = tail_std = math.nan
                is_plateau, level = False, math.nan
            out.append(FitRow(p, g, d, slope, is_plateau, level, pslope, tail_std, spec.regime, C))
        return out

    def envelope_curve(self, problem: ProblemId, gamma: float, delta: float, C: float, hs):
        spec = envelope_spec_for(problem, gamma, self.config.n)
        return [C * envelope(spec, h, delta) for h in hs]


@dataclass(frozen=True)
class _Cell:
    problem: ProblemId
    gamma: float
    gamma_index: int
    N: int
    n_index: int


def _run_cell(cfg: ExperimentConfig, cell: _Cell):
    start = time.perf_counter()
    problem = make_test_problem(cell.problem, cell.gamma)
    grid = DelayGrid(cfg.tau, cfg.n, cell.N)
    rows = []
    try:
        ref = reference_solve(problem, grid, cfg.refinement)
    except DivergenceError as exc:
        msg = f"reference: {exc}"
        for delta in cfg.deltas:
            rows += [TrialRow(cell.problem, cell.gamma, delta, cell.N, grid.h, t, None, msg)
                     for t in range(cfg.trials)]
        return cell, rows, time.perf_counter() - start
    for di, delta in enumerate(cfg.deltas):
        spec = NoiseSpec(delta, cfg.mode, cfg.seed)
        streams = [RngStream(cfg.seed, t, cell.problem, cell.gamma_index, di, cell.n_index)
                   for t in range(cfg.trials)]
        results = euler_solve_batch(problem, grid, spec, streams)
        for t, res in enumerate(results):
            if isinstance(res, DivergenceError):
                rows.append(TrialRow(cell.problem, cell.gamma, delta, cell.N, grid.h, t, None, str(res)))
            else:
                prof = ErrorProfile.from_layer_maxima(layer_maxima(res.values, ref.values))
                rows.append(TrialRow(cell.problem, cell.gamma, delta, cell.N, grid.h, t, prof))
    return cell, rows, time.perf_counter() - start


def _cells(cfg: ExperimentConfig) -> list[_Cell]:
    gammas = list(dict.fromkeys(g for _, g in cfg.problems))
    return [_Cell(p, g, gammas.index(g), N, ni)
            for p, g in cfg.problems for ni, N in enumerate(cfg.N_list)]


def run_convergence(cfg: ExperimentConfig, workers: int = 1) -> ConvergenceTable:
    """Sweep every (problem, gamma, N) cell; each cell shares one reference across deltas and trials."""
    cells = _cells(cfg)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_cell, [cfg] * len(cells), cells))
    else:
        results = [_run_cell(cfg, c) for c in cells]
    rows, timings = [], {}
    for cell, cell_rows, elapsed in results:
        rows += cell_rows
        timings[f"{cell.problem.value}:{cell.gamma!r}:N={cell.N}"] = elapsed
        log.debug("cell %s gamma=%s N=%d took %.2fs", cell.problem.value, cell.gamma, cell.N, elapsed)
    table = ConvergenceTable(cfg, rows, timings)
    if table.failed_count:
        log.warning("%d trajectories failed and are excluded from aggregates", table.failed_count)
    return table


def run_error_propagation(cfg: ExperimentConfig, workers: int = 1) -> ConvergenceTable:
    """Same sweep as :func:`run_convergence`; emit it with :func:`propagation_csv`."""
    return run_convergence(cfg, workers)
