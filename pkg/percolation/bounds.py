"""Калькулятор оценок: пороги, Φ и c(m), число четвёрок U, суммы f,
число последовательно порождающих последовательностей, перекрытия,
D̂ и Ψ, отчёты по нижней оценке и второму моменту.

Целые величины считаются точно (BigCount = int), остальное -- в LogNumber.
Где в формулах стоит пол от √n, используется точная целочисленная
арифметика (math.isqrt); внутри неравенств √n вещественный.
"""

from __future__ import annotations

import functools
import math
import threading
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, NamedTuple, Optional, Tuple

import numpy as np
import pandas as pd

from .errors import DiagnosticError, InputDomainError
from .numbers import MP, BigCount, LogNumber, as_probability, log_count

EXPLICIT_CONSTANTS = "explicit proof constants"
OVERLAP_CONSTANT = 4 * 3 ** 42


class AdmissibleIndex(NamedTuple):
    ell: int
    i: int
    j: int
    d: int


@dataclass(frozen=True)
class ThresholdParams:
    n: int
    k: int
    p_star: LogNumber
    p_upper_star: LogNumber
    D: int
    L: int
    i_star: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "k": self.k,
            "p_star": self.p_star,
            "p_upper_star": self.p_upper_star,
            "D": self.D,
            "L": self.L,
            "i_star": self.i_star,
        }


def _check_nk(n: int, k: int) -> None:
    if int(n) != n or int(k) != k or n < 1 or k < 2:
        raise InputDomainError(f"Требуется n >= 1 и k >= 2, получено n={n}, k={k}")


def parameters(n: int, k: int) -> ThresholdParams:
    """p_* = n^-2 k^(-2√n+1), p^* = 200 p_*, D = ⌊2√n⌋-2, L = ⌊n/2⌋, i_* = ⌊√n⌋-1."""
    _check_nk(n, k)
    ln_p = -2 * MP.log(n) + (1 - 2 * MP.sqrt(n)) * MP.log(k)
    p_star = LogNumber.from_log(ln_p)
    return ThresholdParams(
        n=n,
        k=k,
        p_star=p_star,
        p_upper_star=p_star * 200,
        D=math.isqrt(4 * n) - 2,
        L=n // 2,
        i_star=math.isqrt(n) - 1,
    )


# --- c(m) и Φ(m) ---

_C_TABLES: Dict[Tuple[int, int], List[Any]] = {}
_C_LOCK = threading.Lock()


def _c_log(m: int, n: int, k: int):
    with _C_LOCK:
        table = _C_TABLES.setdefault((n, k), [])
        while len(table) <= m:
            j = len(table)
            if j == 0:
                table.append(MP.mpf(0))
            elif j <= 14:
                table.append(MP.log(MP.mpf("0.5")) + j * MP.log(9 * MP.sqrt(2) / 10))
            else:
                step = MP.log1p(MP.power(k, -MP.mpf(j - 11) / 2)) + MP.log1p(MP.mpf(4) / n)
                table.append(table[j - 1] + step)
        return table[m]


def c_const(m: int, n: int, k: int) -> LogNumber:
    if m < 0:
        raise InputDomainError(f"m должно быть >= 0, получено {m}")
    _check_nk(n, k)
    return LogNumber.from_log(_c_log(m, n, k))


def phi(m: int, n: int, k: int, p) -> LogNumber:
    """Φ(m) = c(m) p^(m/2+1) m! 2^(-m/2) (k-1)^m k^((m²+2m)/4)."""
    if m < 0:
        raise InputDomainError(f"m должно быть >= 0, получено {m}")
    _check_nk(n, k)
    lp = as_probability(p, open_interval=True)
    return LogNumber.from_log(_phi_log(m, n, k, lp.ln))


def _phi_log(m: int, n: int, k: int, ln_p):
    m_ = MP.mpf(m)
    return (
        _c_log(m, n, k)
        + (m_ / 2 + 1) * ln_p
        + MP.loggamma(m_ + 1)
        - (m_ / 2) * MP.log(2)
        + m_ * MP.log(k - 1)
        + (m_ * m_ + 2 * m_) / 4 * MP.log(k)
    )


# --- допустимые индексы и U ---

def is_admissible(idx: AdmissibleIndex, dim: int, t: int) -> bool:
    ell, i, j, d = idx
    return (
        d in (0, 1, 2)
        and 0 <= j <= i < t <= ell
        and ell <= min(i + j + d, dim)
        and i + d <= ell
    )


def admissible_indices(dim: int, t: int) -> List[AdmissibleIndex]:
    if not 1 <= t <= dim:
        raise InputDomainError(f"Требуется 1 <= t <= dim, получено t={t}, dim={dim}")
    out = []
    for ell in range(t, dim + 1):
        for i in range(t):
            for j in range(i + 1):
                for d in range(3):
                    idx = AdmissibleIndex(ell, i, j, d)
                    if is_admissible(idx, dim, t):
                        out.append(idx)
    return out


def count_quadruples(m: int, k: int, t: int, idx: AdmissibleIndex) -> BigCount:
    """Число кандидатных четвёрок в проекции размерности m (неупорядоченные пары при i = j)."""
    idx = AdmissibleIndex(*idx)
    if min(idx) < 0 or m < 0:
        raise InputDomainError(f"Индексы должны быть неотрицательны: {tuple(idx)}")
    if not is_admissible(idx, m, t):
        return 0
    ell, i, j, d = idx
    value = (
        math.comb(m, ell)
        * math.comb(ell, i)
        * math.comb(ell - i, d)
        * math.comb(i, i + j + d - ell)
        * k ** (m + ell - i - j - d)
        * (k - 1) ** d
    )
    if i == j:
        if value % 2:
            raise DiagnosticError(f"Нечётное произведение для i = j: {tuple(idx)}")
        value //= 2
    return value


def _log_comb(a: int, b: int):
    return MP.loggamma(a + 1) - MP.loggamma(b + 1) - MP.loggamma(a - b + 1)


def count_quadruples_log(m: int, k: int, t: int, idx: AdmissibleIndex) -> LogNumber:
    """Та же формула через log-gamma (для перекрёстной проверки)."""
    idx = AdmissibleIndex(*idx)
    if not is_admissible(idx, m, t):
        return LogNumber.zero()
    ell, i, j, d = idx
    ln = (
        _log_comb(m, ell)
        + _log_comb(ell, i)
        + _log_comb(ell - i, d)
        + _log_comb(i, i + j + d - ell)
        + (m + ell - i - j - d) * MP.log(k)
        + d * MP.log(k - 1)
    )
    if i == j:
        ln -= MP.log(2)
    return LogNumber.from_log(ln)


def f_value(n: int, k: int, p, t: int, idx: AdmissibleIndex) -> LogNumber:
    """f = U · Φ(i) · Φ(j)."""
    idx = AdmissibleIndex(*idx)
    count = count_quadruples(n, k, t, idx)
    if count == 0:
        return LogNumber.zero()
    return log_count(count) * phi(idx.i, n, k, p) * phi(idx.j, n, k, p)


# --- векторизованные суммы f по T^(1) и T^(2) ---

def _to_ld(x) -> np.longdouble:
    return np.longdouble(MP.nstr(x, 25))


def _from_ld(x: np.longdouble) -> LogNumber:
    if not np.isfinite(x):
        return LogNumber.zero()
    return LogNumber.from_log(MP.mpf(np.format_float_scientific(x, unique=True)))


def _logsumexp(values: np.ndarray) -> np.longdouble:
    if values.size == 0:
        return np.longdouble("-inf")
    top = values.max()
    return top + np.log(np.sum(np.exp(values - top)))


def _f_sums_by_ell(n: int, k: int, ln_p) -> pd.DataFrame:
    """Суммы f по (ℓ, часть разбиения) для t = D; одна строка на ℓ."""
    D = math.isqrt(4 * n) - 2
    lf = np.concatenate(([np.longdouble(0)], np.cumsum(np.log(np.arange(1, n + 1, dtype=np.longdouble)))))
    log_phi = np.array([_to_ld(_phi_log(m, n, k, ln_p)) for m in range(D)], dtype=np.longdouble)
    ln_k = np.log(np.longdouble(k))
    ln_k1 = np.log(np.longdouble(k - 1))
    ln_2 = np.log(np.longdouble(2))

    def lb(a, b):
        return lf[a] - lf[b] - lf[a - b]

    grid = np.arange(D)
    I, J = np.meshgrid(grid, grid, indexing="ij")
    rows = []
    for ell in range(D, min(n, 2 * D) + 1):
        chunks = []
        for d in range(3):
            mask = (J <= I) & (ell <= I + J + d) & (I + d <= ell)
            Im, Jm = I[mask], J[mask]
            if Im.size == 0:
                continue
            log_u = (
                lb(n, ell)
                + lb(ell, Im)
                + lb(ell - Im, d)
                + lb(Im, Im + Jm + d - ell)
                + (n + ell - Im - Jm - d) * ln_k
                + d * ln_k1
                - (Im == Jm) * ln_2
            )
            chunks.append(log_u + log_phi[Im] + log_phi[Jm])
        if not chunks:
            continue
        terms = np.concatenate(chunks)
        rows.append({
            "ell": ell,
            # ℓ <= 3√n  <=>  ℓ² <= 9n
            "part": "T1" if ell * ell <= 9 * n else "T2",
            "terms": int(terms.size),
            "ln_sum": _logsumexp(terms),
        })
    return pd.DataFrame(rows, columns=["ell", "part", "terms", "ln_sum"])


@dataclass
class LowerBoundReport:
    n: int
    k: int
    p: LogNumber
    D: int
    sum_t1: LogNumber
    sum_t2: LogNumber
    union_bound: LogNumber
    dominant_term: LogNumber
    bottleneck_bound: LogNumber
    expected_droplets: LogNumber
    total_rhs: LogNumber
    terms_t1: int
    terms_t2: int
    domination_holds: bool
    droplet_claim_holds: bool
    label: str = EXPLICIT_CONSTANTS


def lower_bound_report(n: int, k: int, p) -> LowerBoundReport:
    """Суммы f по T^(1) и T^(2), доминирующий член f(D, D-2, 0, 2) и оценка узкого места."""
    _check_nk(n, k)
    lp = as_probability(p)
    if lp == 1:
        raise InputDomainError("Отчёт определён для p < 1")
    D = math.isqrt(4 * n) - 2
    if D < 1:
        raise InputDomainError(f"Критическая размерность D = {D} < 1 при n = {n}")

    if lp.is_zero:
        zero = LogNumber.zero()
        return LowerBoundReport(n, k, lp, D, zero, zero, zero, zero, zero, zero, zero, 0, 0, True, True)

    table = _f_sums_by_ell(n, k, lp.ln)
    t1 = table[table["part"] == "T1"]
    t2 = table[table["part"] == "T2"]
    sum_t1 = _from_ld(_logsumexp(t1["ln_sum"].to_numpy(dtype=np.longdouble)))
    sum_t2 = _from_ld(_logsumexp(t2["ln_sum"].to_numpy(dtype=np.longdouble)))

    dominant = f_value(n, k, lp, D, AdmissibleIndex(D, D - 2, 0, 2)) if D >= 2 else LogNumber.zero()
    droplets = log_count(math.comb(n, D) * k ** (n - D)) * (LogNumber.of(k) ** MP.mpf("0.5")) * phi(D, n, k, lp)
    bottleneck = droplets * 5
    claim_rhs = log_count(math.comb(n, D) * k ** (n - D)) * phi(D, n, k, lp)

    return LowerBoundReport(
        n=n,
        k=k,
        p=lp,
        D=D,
        sum_t1=sum_t1,
        sum_t2=sum_t2,
        union_bound=sum_t1 + sum_t2,
        dominant_term=dominant,
        bottleneck_bound=bottleneck,
        expected_droplets=droplets,
        total_rhs=bottleneck + sum_t2,
        terms_t1=int(t1["terms"].sum()),
        terms_t2=int(t2["terms"].sum()),
        domination_holds=sum_t1 <= dominant * 5 * (LogNumber.of(k) ** MP.mpf("0.5")),
        droplet_claim_holds=dominant <= claim_rhs,
    )


def f_table(n: int, k: int, p) -> pd.DataFrame:
    """Суммы f по ℓ (для CSV)."""
    _check_nk(n, k)
    lp = as_probability(p, open_interval=True)
    table = _f_sums_by_ell(n, k, lp.ln)
    table["ln_sum"] = table["ln_sum"].astype(float)
    table["sum"] = np.exp(table["ln_sum"])
    return table


def phi_table(n: int, k: int, p, upto: Optional[int] = None) -> pd.DataFrame:
    _check_nk(n, k)
    lp = as_probability(p, open_interval=True)
    D = math.isqrt(4 * n) - 2
    upto = D if upto is None else upto
    if upto > D:
        warnings.warn(f"Φ(m) при m > D = {D} вычисляется вне области леммы (диагностика)", stacklevel=2)
    rows = []
    for m in range(max(upto, 0) + 1):
        value = phi(m, n, k, lp)
        rows.append({
            "m": m,
            "c": float(c_const(m, n, k)),
            "ln_phi": value.log_float(),
            "phi": float(value),
            "beyond_critical": m > D,
        })
    return pd.DataFrame(rows, columns=["m", "c", "ln_phi", "phi", "beyond_critical"])


# --- последовательно порождающие последовательности ---

def _raw_extension(n: int, k: int, j: int) -> BigCount:
    top = n - 2 * j + 2
    if top < 2:
        return 0
    return math.comb(top, 2) * (k - 1) ** 2 * k ** (2 * j - 2)


def _check_ell(n: int, ell: int, lowest: int) -> None:
    if not lowest <= ell <= n // 2:
        raise InputDomainError(f"ℓ = {ell} вне [{lowest}, {n // 2}]")


def seq_extension_count(n: int, k: int, ell: int) -> BigCount:
    """C_ℓ = binom(n-2ℓ+2, 2) (k-1)² k^(2ℓ-2)."""
    _check_nk(n, k)
    _check_ell(n, ell, 1)
    return _raw_extension(n, k, ell)


def seq_count(n: int, k: int, ell: int) -> BigCount:
    """|S_ℓ| = n!/(n-2ℓ)! (k-1)^(2ℓ) 2^(-ℓ) k^(n+ℓ²-ℓ), точно."""
    _check_nk(n, k)
    _check_ell(n, ell, 0)
    return (
        math.factorial(n) // math.factorial(n - 2 * ell)
        * (k - 1) ** (2 * ell)
        * k ** (n + ell * ell - ell)
    ) >> ell


@functools.lru_cache(maxsize=65536)
def _seq_count_ln(n: int, k: int, ell: int):
    return (
        MP.loggamma(n + 1)
        - MP.loggamma(n - 2 * ell + 1)
        + 2 * ell * MP.log(k - 1)
        - ell * MP.log(2)
        + (n + ell * ell - ell) * MP.log(k)
    )


def seq_count_log(n: int, k: int, ell: int) -> LogNumber:
    """|S_ℓ| через log-gamma; для отчётов при больших n."""
    _check_nk(n, k)
    _check_ell(n, ell, 0)
    return LogNumber.from_log(_seq_count_ln(n, k, ell))


def expected_sequences(n: int, k: int, ell: int, p) -> LogNumber:
    """E[X_ℓ] = p^(ℓ+1) |S_ℓ|."""
    lp = as_probability(p)
    return (lp ** (ell + 1)) * seq_count_log(n, k, ell)


# --- D̂ и Ψ ---

_DHAT_TABLES: Dict[Tuple[int, int], List[int]] = {}
_DHAT_LOCK = threading.Lock()


def _dhat_ext(j: int, n: int, k: int) -> BigCount:
    """D̂_j без ограничения j <= L (за L величины C_j равны нулю)."""
    with _DHAT_LOCK:
        table = _DHAT_TABLES.setdefault((n, k), [0])
        while len(table) <= j:
            q = len(table)
            c = _raw_extension(n, k, q)
            table.append(c if q == 1 else max(c, 3 * table[q - 1]))
        return table[j]


def dhat(j: int, n: int, k: int) -> BigCount:
    _check_nk(n, k)
    _check_ell(n, j, 1)
    return _dhat_ext(j, n, k)


def psi_exact(m: int, i: int, s: int, n: int, k: int) -> Fraction:
    if min(m, i, s) < 0:
        raise InputDomainError(f"Ψ определена для m, i, s >= 0, получено {(m, i, s)}")
    if i > m + 1:
        raise InputDomainError(f"Ψ определена при i <= m + 1, получено m={m}, i={i}")
    _check_nk(n, k)
    if n < 2:
        raise InputDomainError("Ψ требует n >= 2 (D̂_1 > 0)")
    if s == 0:
        return Fraction(1)

    def dh(j: int) -> int:
        return _dhat_ext(j, n, k)

    value = Fraction(1)
    if 2 * (m - i + 1) < s:
        for j in range(m + 1, 2 * m - i + 2):
            value *= Fraction(2 * m - i + 2 - j, dh(j)) ** 2
        for j in range(2 * m - i + 2, s + i):
            value /= dh(j)
    else:
        half = s // 2
        for j in range(m + 1, m + half + 1):
            value *= Fraction(2 * m - i + 2 - j, dh(j)) ** 2
        if s % 2:
            value *= Fraction(2 * (m - half - i + 1) + 1, dh(m + half + 1))
    return value


def psi(m: int, i: int, s: int, n: int, k: int) -> LogNumber:
    return LogNumber.of(psi_exact(m, i, s, n, k))


def extension_bound(n: int, k: int, ell: int, m: int, i: int, s: int) -> LogNumber:
    """8^s · Π_{j=m+1}^{ℓ} D̂_j² · Ψ(m, i, s)."""
    _check_nk(n, k)
    _check_ell(n, ell, 0)
    if not 0 <= m <= ell:
        raise InputDomainError(f"Требуется 0 <= m <= ℓ, получено m={m}, ℓ={ell}")
    product = 8 ** s
    for j in range(m + 1, ell + 1):
        product *= _dhat_ext(j, n, k) ** 2
    return log_count(product) * psi(m, i, s, n, k)


# --- перекрытия ---

def overlap_bound(n: int, k: int, ell: int, i: int) -> LogNumber:
    """4·3^42 · 8^i (ℓ+1)³ |S_ℓ|² / |S_{i-1}| (явные константы доказательства)."""
    _check_nk(n, k)
    if not (1 <= i <= ell + 1 and 0 <= ell <= n // 2):
        raise InputDomainError(f"Требуется 1 <= i <= ℓ+1 <= L+1, получено ℓ={ell}, i={i}")
    factor = LogNumber.from_log(MP.log(OVERLAP_CONSTANT) + i * MP.log(8) + 3 * MP.log(ell + 1))
    return factor * seq_count_log(n, k, ell) ** 2 / seq_count_log(n, k, i - 1)


def last_index_overlap_bound(n: int, k: int, m: int, j: int) -> Fraction:
    """Оценки пар последовательностей размера m, пересекающихся ровно в j вершинах
    при непересекающихся префиксах без последней вершины."""
    _check_nk(n, k)
    _check_ell(n, m, 0)
    s_m = seq_count(n, k, m)
    if j == 1:
        return Fraction(2 * (m + 1) * s_m * s_m, k ** n)
    if j == 2:
        if m == 0:
            return Fraction(0)
        return Fraction(m * (m + 1) * s_m * s_m, _raw_extension(n, k, m) * k ** n)
    raise InputDomainError(f"j должно быть 1 или 2, получено {j}")


# --- второй момент ---

@dataclass
class SecondMomentReport:
    n: int
    k: int
    p: LogNumber
    L: int
    expected_top: LogNumber
    min_term: LogNumber
    argmin_i: int
    ratio_bound: Optional[LogNumber]
    ratio_bound_infinite: bool
    delta_bound: LogNumber
    odd_case_exact: LogNumber
    odd_case_bound: LogNumber
    terms: List[LogNumber] = field(default_factory=list)
    label: str = EXPLICIT_CONSTANTS


def second_moment_report(n: int, k: int, p) -> SecondMomentReport:
    """E[X_L], min_i 8^-i E[X_{i-1}], отношение Δ/E² и оценка для нечётного n."""
    _check_nk(n, k)
    if n < 4:
        raise InputDomainError(f"Отчёт второго момента требует n >= 4, получено {n}")
    lp = as_probability(p)
    if lp == 1:
        raise InputDomainError("Отчёт определён для p < 1")
    L = n // 2

    terms = [expected_sequences(n, k, i - 1, lp) / LogNumber.from_log(i * MP.log(8)) for i in range(1, L + 2)]
    argmin = min(range(len(terms)), key=lambda pos: terms[pos]) + 1
    min_term = terms[argmin - 1]

    if min_term.is_zero:
        ratio, infinite = None, True
    else:
        ratio, infinite = log_count(OVERLAP_CONSTANT * n ** 4) / min_term, False

    delta = LogNumber.sum(overlap_bound(n, k, L, i) * lp ** (2 * L + 2 - i) for i in range(1, L + 2))

    # вершина без заражённых соседей по одной из координат
    exponent = (k - 1) * k ** (n - 1)
    ln_nk = MP.log(n * k)
    if lp.is_zero:
        odd_exact = LogNumber.of(n * k)
        odd_bound = LogNumber.of(n * k)
    else:
        p_mp = MP.exp(lp.ln)
        odd_exact = LogNumber.from_log(ln_nk + exponent * MP.log1p(-p_mp))
        odd_bound = LogNumber.from_log(ln_nk - p_mp * exponent)

    return SecondMomentReport(
        n=n,
        k=k,
        p=lp,
        L=L,
        expected_top=expected_sequences(n, k, L, lp),
        min_term=min_term,
        argmin_i=argmin,
        ratio_bound=ratio,
        ratio_bound_infinite=infinite,
        delta_bound=delta,
        odd_case_exact=odd_exact,
        odd_case_bound=odd_bound,
        terms=terms,
    )


__all__ = [
    "AdmissibleIndex",
    "ThresholdParams",
    "parameters",
    "c_const",
    "phi",
    "is_admissible",
    "admissible_indices",
    "count_quadruples",
    "count_quadruples_log",
    "f_value",
    "LowerBoundReport",
    "lower_bound_report",
    "f_table",
    "phi_table",
    "seq_extension_count",
    "seq_count",
    "seq_count_log",
    "expected_sequences",
    "dhat",
    "psi",
    "psi_exact",
    "extension_bound",
    "overlap_bound",
    "last_index_overlap_bound",
    "SecondMomentReport",
    "second_moment_report",
    "EXPLICIT_CONSTANTS",
]
