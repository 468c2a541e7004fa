"""Матрица перекрёстных проверок: перебор против формул, движок против движка.

Каждая проверка возвращает CheckResult со статусом pass / fail / skip;
нехватка возможностей перебора (CapabilityError) даёт skip, а не fail.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Tuple

from . import bounds, oracle
from .bounds import AdmissibleIndex
from .engine import closure_components, closure_queue, grow_spanning_sequence, percolates
from .errors import CapabilityError, PercolationError
from .hamming import HammingSpace, InfectionConfig, make_rng, sample_infected
from .montecarlo import check_coupling, estimate_percolation
from .numbers import MP, LogNumber, log_count
from .projection import all_projections, projection_of

PASS, FAIL, SKIP = "pass", "fail", "skip"
_ICONS = {PASS: "✅", FAIL: "❌", SKIP: "⏭️"}

SEQUENCE_CASES = [(2, 2, 1), (4, 2, 1), (4, 2, 2), (3, 3, 1), (2, 3, 1)]
ENGINE_SPACES = [(4, 2), (5, 2), (6, 2), (8, 2), (2, 3), (2, 4), (4, 3)]
RATIO_GRID = [(n, k) for n in (64, 100, 400, 10 ** 4) for k in (2, 3, 16)]
MC_SPACES = [(1, 2), (2, 2), (3, 2), (4, 2), (1, 3), (2, 3), (2, 4), (5, 2)]
OVERLAP_CASES = [(2, 2, 1), (4, 2, 1), (4, 2, 2), (3, 3, 1)]


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str
    detail: str = ""


@dataclass
class SelftestReport:
    results: List[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.status != FAIL for r in self.results)

    def counts(self) -> dict:
        return {s: sum(1 for r in self.results if r.status == s) for s in (PASS, FAIL, SKIP)}

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "counts": self.counts(),
            "checks": [{"name": r.name, "status": r.status, "detail": r.detail} for r in self.results],
        }


def _sequence_counts() -> Optional[str]:
    for n, k, ell in SEQUENCE_CASES:
        formula = bounds.seq_count(n, k, ell)
        brute = oracle.enumerate_spanning_sequences(HammingSpace(n, k), ell)
        if formula != brute:
            return f"|S_{ell}|({n},{k}): формула {formula}, перебор {brute}"
    return None


def _quadruple_counts() -> Optional[str]:
    for m in range(1, 4):
        for k in (2, 3):
            for t in range(1, m + 1):
                brute = oracle.enumerate_quadruples(m, k, t)
                for idx in brute:
                    if not bounds.is_admissible(idx, m, t):
                        return f"перебор нашёл недопустимый индекс {tuple(idx)} (m={m}, k={k}, t={t})"
                top = m + 2
                for ell in range(top + 1):
                    for i in range(top + 1):
                        for j in range(top + 1):
                            for d in range(top + 1):
                                idx = AdmissibleIndex(ell, i, j, d)
                                formula = bounds.count_quadruples(m, k, t, idx)
                                if formula != brute.get(idx, 0):
                                    return f"U({m},{k},{t},{tuple(idx)}) = {formula}, перебор {brute.get(idx, 0)}"
    return None


def _quadruple_dual_path() -> Optional[str]:
    for m in (6, 20):
        for k in (2, 3, 16):
            for t in (2, m // 2, m):
                for idx in bounds.admissible_indices(m, t):
                    exact = bounds.count_quadruples(m, k, t, idx)
                    logged = bounds.count_quadruples_log(m, k, t, idx)
                    if abs(logged.ln - log_count(exact).ln) > MP.mpf("1e-10") * max(1, abs(log_count(exact).ln)):
                        return f"U({m},{k},{t},{tuple(idx)}): расхождение точного и логарифмического путей"
    return None


def _engine_equivalence(seeds: int = 100) -> Optional[str]:
    rng = make_rng(7)
    for n, k in ENGINE_SPACES:
        space = HammingSpace(n, k)
        for s in range(seeds):
            p = float(rng.uniform(0.05, 0.6))
            seed = sample_infected(space, p, (11, n, k, s))
            queue = closure_queue(seed)
            components = closure_components(seed).union_codes()
            if queue != components:
                return f"({n},{k}) зерно {s}: движки расходятся"
            if percolates(seed) != (len(queue) == space.vertex_count):
                return f"({n},{k}) зерно {s}: percolates противоречит замыканию"
    return None


def _grown_sequence_dimension(trials: int = 100) -> Optional[str]:
    rng = make_rng(29)
    for n, k in ((8, 2), (6, 3)):
        space = HammingSpace(n, k)
        for _ in range(trials):
            size = int(rng.integers(0, n // 2 + 1))
            s = grow_spanning_sequence(space, size, rng)
            P = projection_of(space, closure_queue(InfectionConfig(space, frozenset(s.vertices))))
            if P is None or P.dim != 2 * size:
                return f"({n},{k}) последовательность {s.vertices}: замыкание не проекция размерности {2 * size}"
    return None


def _ratio_inequality() -> Optional[str]:
    for n, k in RATIO_GRID:
        params = bounds.parameters(n, k)
        sqrt_n = MP.sqrt(n)
        for j in range(params.D):
            ratio = bounds.phi(j + 1, n, k, params.p_star) / bounds.phi(j, n, k, params.p_star)
            rhs = LogNumber.from_log(MP.log(j + 1) - MP.log(n) + (j + 5 - 2 * sqrt_n) / 2 * MP.log(k))
            if ratio > rhs:
                return f"Φ({j + 1})/Φ({j}) > оценки при n={n}, k={k}"
    return None


def _c_bounded() -> Optional[str]:
    for n, k in RATIO_GRID:
        D = bounds.parameters(n, k).D
        # c(0) = 1 задано отдельно, монотонность с m = 1
        values = [bounds.c_const(m, n, k) for m in range(1, D + 1)]
        if any(b < a for a, b in zip(values, values[1:])):
            return f"c(m) убывает при n={n}, k={k}"
        if values[-1] > 100:
            return f"c(D) = {float(values[-1])} > 100 при n={n}, k={k}"
    return None


def _psi_monotone() -> Optional[str]:
    for n in (30, 64):
        for k in (2, 3):
            for m in range(12):
                for i in range(1, m + 2):
                    for s in range(1, 13):
                        if bounds.psi_exact(m + 1, i, s, n, k) > bounds.psi_exact(m, i, s, n, k):
                            return f"Ψ({m + 1},{i},{s}) > Ψ({m},{i},{s}) при n={n}, k={k}"
    return None


def _overlap_soundness() -> Optional[str]:
    for n, k, ell in OVERLAP_CASES:
        space = HammingSpace(n, k)
        for i in range(1, ell + 2):
            count = oracle.count_overlaps(space, ell, i)
            if log_count(count) > bounds.overlap_bound(n, k, ell, i):
                return f"Y_{ell}({i}) = {count} превышает оценку при n={n}, k={k}"
        for j in (1, 2):
            count = oracle.count_last_index_overlaps(space, ell, j)
            if count > bounds.last_index_overlap_bound(n, k, ell, j):
                return f"пары с перекрытием {j} в последнем индексе: {count} превышает оценку ({n},{k},{ell})"
    return None


def _vdbk() -> Optional[str]:
    for n in (2, 3):
        space = HammingSpace(n, 2)
        projs = all_projections(space)
        for U in projs:
            for W in projs:
                for p in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
                    res = oracle.check_vdbk(space, U, W, p)
                    if not res.holds:
                        return f"vdBK нарушено: U={U}, W={W}, p={p}: {res.left} > {res.right}"
    return None


def _coupling() -> Optional[str]:
    check_coupling(HammingSpace(4, 2), [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.8], trials=200, master_seed=3)
    return None


def _montecarlo_vs_polynomial(n: int, k: int, trials: int = 2000) -> Callable[[], Optional[str]]:
    def check() -> Optional[str]:
        space = HammingSpace(n, k)
        poly = oracle.exact_percolation_polynomial(space)
        for p in (0.25, 0.5, 0.75):
            exact = poly.evaluate(p)
            est = estimate_percolation(space, p, trials, master_seed=17, workers=1)
            sigma = math.sqrt(exact * (1 - exact) / trials)
            if abs(est.p_hat - exact) > 5 * sigma + 1e-12:
                return f"p={p}: p̂ = {est.p_hat:.4f}, точно {exact:.4f}"
        return None

    return check


def _checks() -> List[Tuple[str, Callable[[], Optional[str]]]]:
    out = [
        ("sequence_counts", _sequence_counts),
        ("quadruple_counts", _quadruple_counts),
        ("quadruple_dual_path", _quadruple_dual_path),
        ("engine_equivalence", _engine_equivalence),
        ("grown_sequence_dimension", _grown_sequence_dimension),
        ("phi_ratio_inequality", _ratio_inequality),
        ("c_bounded", _c_bounded),
        ("psi_monotone", _psi_monotone),
        ("overlap_soundness", _overlap_soundness),
        ("vdbk_inequality", _vdbk),
        ("coupling_monotone", _coupling),
    ]
    out += [(f"montecarlo_vs_polynomial[{n},{k}]", _montecarlo_vs_polynomial(n, k)) for n, k in MC_SPACES]
    return out


def run_selftest(verbose: bool = False) -> SelftestReport:
    report = SelftestReport()
    for name, check in _checks():
        try:
            failure = check()
            result = CheckResult(name, FAIL, failure) if failure else CheckResult(name, PASS)
        except CapabilityError as e:
            result = CheckResult(name, SKIP, str(e))
        except PercolationError as e:
            result = CheckResult(name, FAIL, f"{type(e).__name__}: {e}")
        report.results.append(result)
        if verbose:
            tail = f": {result.detail}" if result.detail else ""
            print(f"{_ICONS[result.status]} {name}{tail}", file=sys.stderr)
    return report


__all__ = ["CheckResult", "SelftestReport", "run_selftest", "PASS", "FAIL", "SKIP"]
