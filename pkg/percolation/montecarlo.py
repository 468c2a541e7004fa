"""Монте-Карло: оценка вероятности перколяции, поиск p_c бисекцией, прогоны по сетке p.

Испытание t использует собственный поток Philox с энтропией
(master_seed, t), поэтому число попаданий не зависит от числа воркеров.
"""

from __future__ import annotations

import math
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.stats import norm

from . import bounds
from .config import get_settings
from .engine import percolates
from .errors import BracketFailure, CapabilityError, DiagnosticError, InputDomainError
from .hamming import HammingSpace, coupled_infected, make_rng, sample_infected

SWEEP_COLUMNS = ["n", "k", "p", "trials", "hits", "p_hat", "ci_low", "ci_high", "seed"]
COUPLING_LIMIT = 1 << 24
BRACKET_EXPANSIONS = 6

_Z95 = float(norm.ppf(0.975))


@dataclass(frozen=True)
class Estimate:
    n: int
    k: int
    p: float
    trials: int
    hits: int
    p_hat: float
    ci_low: float
    ci_high: float
    seed: int

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def wilson_interval(hits: int, trials: int, z: float = _Z95) -> Tuple[float, float]:
    p_hat = hits / trials
    z2 = z * z
    denom = 1 + z2 / trials
    center = (p_hat + z2 / (2 * trials)) / denom
    half = z * math.sqrt(p_hat * (1 - p_hat) / trials + z2 / (4 * trials * trials)) / denom
    low = max(0.0, min(center - half, p_hat))
    high = min(1.0, max(center + half, p_hat))
    return low, high


def _count_hits(n: int, k: int, p: float, master_seed: int, start: int, stop: int) -> int:
    space = HammingSpace(n, k)
    return sum(1 for t in range(start, stop) if percolates(sample_infected(space, p, (master_seed, t))))


def _chunks(trials: int, workers: int) -> List[Tuple[int, int]]:
    parts = max(1, min(trials, workers * 4))
    edges = np.linspace(0, trials, parts + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def _check_probability(p: float) -> float:
    try:
        value = float(p)
    except (TypeError, ValueError):
        raise InputDomainError(f"p должно быть числом, получено {p!r}") from None
    if not 0.0 <= value <= 1.0:
        raise InputDomainError(f"p должно лежать в [0, 1], получено {p}")
    return value


def estimate_percolation(
    space: HammingSpace,
    p: float,
    trials: Optional[int] = None,
    master_seed: Optional[int] = None,
    workers: Optional[int] = None,
) -> Estimate:
    settings = get_settings()
    trials = settings.trials if trials is None else int(trials)
    master_seed = settings.seed if master_seed is None else int(master_seed)
    workers = settings.workers if workers is None else int(workers)
    if trials < 1:
        raise InputDomainError(f"Число испытаний должно быть >= 1, получено {trials}")
    if workers < 1:
        raise InputDomainError(f"Число воркеров должно быть >= 1, получено {workers}")
    if not 0 <= master_seed < 2 ** 64:
        raise InputDomainError(f"Зерно должно быть 64-битным неотрицательным: {master_seed}")
    value = _check_probability(p)
    space.require_engine()

    chunks = _chunks(trials, workers)
    if workers == 1:
        hits = sum(_count_hits(space.n, space.k, value, master_seed, a, b) for a, b in chunks)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_count_hits, space.n, space.k, value, master_seed, a, b) for a, b in chunks]
            hits = sum(f.result() for f in futures)

    low, high = wilson_interval(hits, trials)
    return Estimate(space.n, space.k, value, trials, hits, hits / trials, low, high, master_seed)


def _progress(verbose: bool, message: str) -> None:
    if verbose:
        print(message, file=sys.stderr)


@dataclass
class PcResult:
    p_c: float
    low: float
    high: float
    target: float
    rel_tol: float
    probes: List[Estimate] = field(default_factory=list)

    def __float__(self) -> float:
        return self.p_c

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p_c": self.p_c,
            "low": self.low,
            "high": self.high,
            "target": self.target,
            "rel_tol": self.rel_tol,
            "probes": [e.to_dict() for e in self.probes],
        }


def find_pc(
    space: HammingSpace,
    target: float = 0.5,
    rel_tol: Optional[float] = None,
    trials_per_probe: Optional[int] = None,
    master_seed: Optional[int] = None,
    workers: Optional[int] = None,
    verbose: bool = False,
) -> PcResult:
    """Бисекция по log p; исходная вилка [p_*/100, min(1, 100 p^*)] расширяется в 10 раз до 6 раз."""
    settings = get_settings()
    rel_tol = settings.rel_tol if rel_tol is None else float(rel_tol)
    if rel_tol < 1e-3:
        raise InputDomainError(f"rel_tol должно быть >= 1e-3, получено {rel_tol}")
    if not 0 < target <= 1:
        raise InputDomainError(f"Целевой уровень должен лежать в (0, 1], получено {target}")

    params = bounds.parameters(space.n, space.k)
    lo = float(params.p_star) / 100
    hi = min(1.0, 100 * float(params.p_upper_star))
    probes: List[Estimate] = []

    def probe(p: float) -> Estimate:
        est = estimate_percolation(space, p, trials_per_probe, master_seed, workers)
        probes.append(est)
        _progress(verbose, f"🔄 p = {p:.6g}: p̂ = {est.p_hat:.5f} ({est.hits}/{est.trials})")
        return est

    est_lo, est_hi = probe(lo), probe(hi)
    for _ in range(BRACKET_EXPANSIONS):
        if est_lo.p_hat < target < est_hi.p_hat:
            break
        if est_lo.p_hat >= target:
            lo /= 10
            est_lo = probe(lo)
        if est_hi.p_hat <= target and hi < 1.0:
            hi = min(1.0, hi * 10)
            est_hi = probe(hi)
    if not est_lo.p_hat < target < est_hi.p_hat:
        raise BracketFailure(
            f"Оценки на концах вилки [{lo:.6g}, {hi:.6g}] не разделяют уровень {target}",
            low=est_lo.to_dict(),
            high=est_hi.to_dict(),
        )

    while hi / lo >= 1 + rel_tol:
        mid = math.sqrt(lo * hi)
        if probe(mid).p_hat >= target:
            hi = mid
        else:
            lo = mid
    p_c = math.sqrt(lo * hi)
    _progress(verbose, f"✅ p_c ≈ {p_c:.6g}")
    return PcResult(p_c, lo, hi, target, rel_tol, probes)


def parse_grid(text: str) -> List[float]:
    """'a:b:steps' или 'a:b:steps:log'."""
    parts = [part.strip() for part in text.split(":")]
    if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "log"):
        raise InputDomainError(f"Сетка задаётся как a:b:steps[:log], получено '{text}'")
    try:
        a, b, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise InputDomainError(f"Не удалось разобрать сетку '{text}'") from None
    if steps < 1:
        raise InputDomainError("Число шагов сетки должно быть >= 1")
    if len(parts) == 4:
        if a <= 0 or b <= 0:
            raise InputDomainError("Логарифмическая сетка требует a, b > 0")
        grid = np.geomspace(a, b, steps)
    else:
        grid = np.linspace(a, b, steps)
    return [float(x) for x in grid]


def _prepare_grid(p_grid: Sequence[float]) -> List[float]:
    grid = [_check_probability(p) for p in p_grid]
    if not grid:
        raise InputDomainError("Сетка p пуста")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise InputDomainError("Сетка p должна быть упорядочена по возрастанию")
    unique = sorted(set(grid))
    if len(unique) != len(grid):
        warnings.warn(f"⚠️ Повторяющиеся точки сетки удалены: {len(grid) - len(unique)}", stacklevel=3)
    return unique


@dataclass
class SweepResult:
    table: pd.DataFrame
    violations: int
    p_star: float
    p_upper_star: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rows": self.table.to_dict(orient="records"),
            "violations": self.violations,
            "sandwich": [self.p_star, self.p_upper_star],
        }


def sweep(
    space: HammingSpace,
    p_grid: Sequence[float],
    trials: Optional[int] = None,
    master_seed: Optional[int] = None,
    workers: Optional[int] = None,
    verbose: bool = False,
) -> SweepResult:
    """Оценка в каждой точке сетки; число локальных провалов p̂ носит справочный характер."""
    grid = _prepare_grid(p_grid)
    rows = []
    for p in grid:
        est = estimate_percolation(space, p, trials, master_seed, workers)
        _progress(verbose, f"🔄 p = {p:.6g}: p̂ = {est.p_hat:.5f}")
        rows.append(est.to_dict())
    table = pd.DataFrame(rows, columns=SWEEP_COLUMNS)
    violations = int((table["p_hat"].diff().dropna() < 0).sum())
    if violations:
        _progress(verbose, f"⚠️ Немонотонность оценок: {violations}")
    params = bounds.parameters(space.n, space.k)
    return SweepResult(table, violations, float(params.p_star), float(params.p_upper_star))


def coupled_trial(space: HammingSpace, p_grid: Sequence[float], seed) -> List[bool]:
    """Одно испытание со связанными посевами A_p = {v : u_v < p} по всей сетке."""
    if space.vertex_count > COUPLING_LIMIT:
        raise CapabilityError(f"k^n = {space.vertex_count} > {COUPLING_LIMIT}: плотный посев недоступен")
    uniforms = make_rng(seed).random(space.vertex_count)
    return [percolates(coupled_infected(space, uniforms, p)) for p in p_grid]


def check_coupling(
    space: HammingSpace,
    p_grid: Sequence[float],
    trials: int,
    master_seed: Optional[int] = None,
) -> int:
    """Индикатор перколяции не убывает по p в каждом связанном испытании."""
    grid = _prepare_grid(p_grid)
    master_seed = get_settings().seed if master_seed is None else int(master_seed)
    for t in range(trials):
        indicators = coupled_trial(space, grid, (master_seed, t))
        if any(a and not b for a, b in zip(indicators, indicators[1:])):
            raise DiagnosticError(f"Связанное испытание {t} немонотонно по p: {indicators}")
    return trials


__all__ = [
    "Estimate",
    "wilson_interval",
    "estimate_percolation",
    "PcResult",
    "find_pc",
    "parse_grid",
    "SweepResult",
    "sweep",
    "coupled_trial",
    "check_coupling",
    "SWEEP_COLUMNS",
]
