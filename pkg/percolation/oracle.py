"""Полный перебор на малых экземплярах -- эталон для формул и движков.

Перебор подмножеств векторизован: все 2^N битовых масок прогоняются
синхронными раундами правила "два соседа" одновременно; условие
"не меньше двух бит" проверяется как x & (x - 1) != 0.
"""

from __future__ import annotations

import functools
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import brentq

from . import bounds
from .bounds import AdmissibleIndex
from .engine import SpanSequence, closure_queue, is_sequentially_spanning
from .errors import CapabilityError, DiagnosticError, InputDomainError
from .hamming import HammingSpace, InfectionConfig
from .numbers import BigCount
from .projection import Projection, all_projections, projection_distance, projection_of

POLY_LIMIT = 24
VDBK_LIMIT = 16
SEQUENCE_LIMIT = 4096
QUADRUPLE_LIMIT = 512
OVERLAP_LIMIT = 10 ** 5
PAIR_LIMIT = 5000

_CHUNK = 1 << 20
_ONE = np.uint64(1)
_BYTE_POP = np.array([bin(b).count("1") for b in range(256)], dtype=np.uint8)

Rational = Union[Fraction, int, float, str]


def _as_fraction(p: Rational) -> Fraction:
    try:
        value = Fraction(p)
    except (TypeError, ValueError, ZeroDivisionError):
        raise InputDomainError(f"Не удалось прочитать вероятность {p!r}") from None
    if not 0 <= value <= 1:
        raise InputDomainError(f"p должно лежать в [0, 1], получено {p}")
    return value


def _popcount(masks: np.ndarray) -> np.ndarray:
    masks = np.ascontiguousarray(masks, dtype=np.uint64)
    return _BYTE_POP[masks.view(np.uint8).reshape(-1, 8)].sum(axis=1)


def _neighbor_masks(space: HammingSpace, codes: Sequence[int]) -> np.ndarray:
    index = {c: pos for pos, c in enumerate(codes)}
    out = np.zeros(len(codes), dtype=np.uint64)
    for pos, code in enumerate(codes):
        mask = 0
        for u in space.neighbor_codes(code):
            other = index.get(u)
            if other is not None:
                mask |= 1 << other
        out[pos] = mask
    return out


def _close_masks(masks: np.ndarray, nbr: np.ndarray) -> np.ndarray:
    current = masks.copy()
    while True:
        nxt = current.copy()
        for v, nm in enumerate(nbr):
            y = current & nm
            nxt[(y & (y - _ONE)) != 0] |= np.uint64(1 << v)
        if np.array_equal(nxt, current):
            return current
        current = nxt


def _closure_table(space: HammingSpace, codes: Sequence[int]) -> np.ndarray:
    """Замыкание каждого подмножества вершин codes (индуцированный подграф)."""
    nbr = _neighbor_masks(space, codes)
    total = 1 << len(codes)
    out = np.empty(total, dtype=np.uint64)
    for start in range(0, total, _CHUNK):
        stop = min(total, start + _CHUNK)
        out[start:stop] = _close_masks(np.arange(start, stop, dtype=np.uint64), nbr)
    return out


def _spanning_counts(space: HammingSpace, codes: Sequence[int]) -> Tuple[int, ...]:
    size = len(codes)
    closed = _closure_table(space, codes)
    full = np.uint64((1 << size) - 1)
    spans = closed == full
    # надмножество перколирующего множества перколирует
    winners = np.flatnonzero(spans).astype(np.uint64)
    for v in range(size):
        if not spans[winners | np.uint64(1 << v)].all():
            raise DiagnosticError("Нарушена монотонность: надмножество перколирующего множества не перколирует")
    counts = np.bincount(_popcount(winners), minlength=size + 1)
    return tuple(int(c) for c in counts)


def _polynomial_value(counts: Sequence[int], p):
    size = len(counts) - 1
    return sum(c * p ** s * (1 - p) ** (size - s) for s, c in enumerate(counts) if c)


@dataclass(frozen=True)
class PercolationPolynomial:
    space: HammingSpace
    counts: Tuple[int, ...]

    def evaluate(self, p: Rational):
        """Точно для Fraction/int, иначе в float."""
        if isinstance(p, float):
            return float(_polynomial_value(self.counts, p))
        return _polynomial_value(self.counts, _as_fraction(p))

    def root(self, target: float = 0.5) -> float:
        if not 0 < target < 1:
            raise InputDomainError(f"Уровень должен лежать в (0, 1), получено {target}")
        return brentq(lambda x: self.evaluate(float(x)) - target, 0.0, 1.0, xtol=1e-14)


def exact_percolation_polynomial(space: HammingSpace) -> PercolationPolynomial:
    if space.vertex_count > POLY_LIMIT:
        raise CapabilityError(f"Перебор 2^{space.vertex_count} подмножеств недоступен (k^n > {POLY_LIMIT})")
    return PercolationPolynomial(space, _spanning_counts(space, list(range(space.vertex_count))))


def exact_spanned_prob(space: HammingSpace, P: Projection, p: Rational) -> Fraction:
    """P(P внутренне порождена p-случайным множеством)."""
    if P.space != space:
        raise InputDomainError("Проекция из другого пространства")
    if P.vertex_count > POLY_LIMIT:
        raise CapabilityError(f"k^dim = {P.vertex_count} > {POLY_LIMIT}: перебор недоступен")
    q = _as_fraction(p)
    counts = _spanning_counts(space, sorted(P.vertex_codes()))
    if counts != _canonical_counts(space, P.dim):
        raise DiagnosticError(f"Вероятность порождения зависит не только от размерности: {P}")
    return _polynomial_value(counts, q)


@functools.lru_cache(maxsize=None)
def _canonical_counts(space: HammingSpace, dim: int) -> Tuple[int, ...]:
    canonical = Projection(space, (None,) * dim + (0,) * (space.n - dim))
    return _spanning_counts(space, sorted(canonical.vertex_codes()))


# --- последовательности ---

def _check_sequence_space(space: HammingSpace, ell: int) -> None:
    if space.vertex_count > SEQUENCE_LIMIT:
        raise CapabilityError(f"k^n = {space.vertex_count} > {SEQUENCE_LIMIT}: перебор последовательностей недоступен")
    if not 0 <= ell <= space.n // 2:
        raise InputDomainError(f"ℓ = {ell} вне [0, {space.n // 2}]")


def iter_spanning_sequences(space: HammingSpace, ell: int) -> Iterator[Tuple[int, ...]]:
    """Обход в глубину по упорядоченным наборам вершин."""
    _check_sequence_space(space, ell)
    stack: List[Tuple[int, ...]] = [(v,) for v in reversed(range(space.vertex_count))]
    while stack:
        prefix = stack.pop()
        if len(prefix) == ell + 1:
            yield prefix
            continue
        for v in reversed(range(space.vertex_count)):
            if v in prefix:
                continue
            candidate = prefix + (v,)
            if is_sequentially_spanning(SpanSequence(space, candidate)):
                stack.append(candidate)


def enumerate_spanning_sequences(space: HammingSpace, ell: int) -> BigCount:
    return sum(1 for _ in iter_spanning_sequences(space, ell))


def _sequences_for_pairs(space: HammingSpace, ell: int, limit: int) -> List[Tuple[int, ...]]:
    _check_sequence_space(space, ell)
    expected = bounds.seq_count(space.n, space.k, ell)
    if expected > limit:
        raise CapabilityError(f"|S_ℓ| = {expected} > {limit}: перебор пар недоступен")
    return list(iter_spanning_sequences(space, ell))


def count_overlaps(space: HammingSpace, ell: int, i: int) -> BigCount:
    """|Y_ℓ(i)|: неупорядоченные пары последовательностей, пересекающихся ровно в i вершинах."""
    if i < 0 or i > ell + 1:
        return 0
    seqs = _sequences_for_pairs(space, ell, OVERLAP_LIMIT)
    groups = Counter(frozenset(s) for s in seqs)
    keys = list(groups)
    weight = [groups[key] for key in keys]

    if i == ell + 1:
        return sum(w * (w - 1) // 2 for w in weight)

    by_vertex: Dict[int, List[int]] = defaultdict(list)
    for gid, key in enumerate(keys):
        for v in key:
            by_vertex[v].append(gid)
    shared: Counter = Counter()
    for ids in by_vertex.values():
        for x in range(len(ids)):
            for y in range(x + 1, len(ids)):
                shared[(ids[x], ids[y])] += 1

    if i >= 1:
        return sum(weight[a] * weight[b] for (a, b), s in shared.items() if s == i)
    total = len(seqs) * (len(seqs) - 1) // 2
    same_set = sum(w * (w - 1) // 2 for w in weight)
    touching = sum(weight[a] * weight[b] for a, b in shared)
    return total - same_set - touching


def count_last_index_overlaps(space: HammingSpace, m: int, j: int) -> BigCount:
    """Пары, пересекающиеся ровно в j вершинах, у которых префиксы без последней вершины не пересекаются."""
    if j not in (1, 2):
        raise InputDomainError(f"j должно быть 1 или 2, получено {j}")
    seqs = _sequences_for_pairs(space, m, PAIR_LIMIT)
    full = [sum(1 << v for v in s) for s in seqs]
    head = [sum(1 << v for v in s[:-1]) for s in seqs]
    count = 0
    for a in range(len(seqs)):
        for b in range(a + 1, len(seqs)):
            if not head[a] & head[b] and (full[a] & full[b]).bit_count() == j:
                count += 1
    return count


# --- кандидатные четвёрки ---

@functools.lru_cache(maxsize=None)
def _projection_pairs(m: int, k: int) -> Tuple[Tuple[int, int, int, int], ...]:
    """(dim H, dim A, dim B, d) для всех неупорядоченных пар проекций, чьё замыкание -- проекция."""
    space = HammingSpace(m, k)
    projs = all_projections(space)
    vertex_sets = [frozenset(P.vertex_codes()) for P in projs]
    out = []
    for a in range(len(projs)):
        for b in range(a + 1, len(projs)):
            A, B = projs[a], projs[b]
            closure = closure_queue(InfectionConfig(space, vertex_sets[a] | vertex_sets[b]))
            H = projection_of(space, closure)
            if H is None:
                continue
            hi, lo = (A, B) if A.dim >= B.dim else (B, A)
            out.append((H.dim, hi.dim, lo.dim, projection_distance(A, B)))
    return tuple(out)


def enumerate_quadruples(m: int, k: int, t: int) -> Dict[AdmissibleIndex, BigCount]:
    if k ** m > QUADRUPLE_LIMIT:
        raise CapabilityError(f"k^m = {k ** m} > {QUADRUPLE_LIMIT}: перебор четвёрок недоступен")
    if not 1 <= t <= m:
        raise InputDomainError(f"Требуется 1 <= t <= m, получено t={t}, m={m}")
    counts: Counter = Counter()
    for ell, i, j, d in _projection_pairs(m, k):
        if i < t <= ell:
            counts[AdmissibleIndex(ell, i, j, d)] += 1
    return dict(sorted(counts.items()))


# --- неравенство ван ден Берга -- Кестена ---

@dataclass(frozen=True)
class VdbkCheck:
    left: Fraction
    right: Fraction

    @property
    def holds(self) -> bool:
        return self.left <= self.right


def _event_probability(event: np.ndarray, size: int, p: Fraction) -> Fraction:
    hist = np.bincount(_popcount(np.flatnonzero(event).astype(np.uint64)), minlength=size + 1)
    return _polynomial_value([int(h) for h in hist], p)


@functools.lru_cache(maxsize=8)
def _full_closure(space: HammingSpace) -> np.ndarray:
    table = _closure_table(space, list(range(space.vertex_count)))
    table.setflags(write=False)
    return table


def check_vdbk(space: HammingSpace, U: Projection, W: Projection, p: Rational) -> VdbkCheck:
    """Точные обе части P({U, W} непересекающимися свидетелями) <= P(U ∈ I) · P(W ∈ I)."""
    if space.vertex_count > VDBK_LIMIT:
        raise CapabilityError(f"k^n = {space.vertex_count} > {VDBK_LIMIT}: вложенный перебор недоступен")
    if U.space != space or W.space != space:
        raise InputDomainError("Проекции из другого пространства")
    q = _as_fraction(p)
    size = space.vertex_count
    closed = _full_closure(space)
    masks = np.arange(1 << size, dtype=np.uint64)
    u_mask = np.uint64(sum(1 << c for c in U.vertex_codes()))
    w_mask = np.uint64(sum(1 << c for c in W.vertex_codes()))

    spans_u = (closed == u_mask) & ((masks & ~u_mask) == 0)
    spans_w = (closed == w_mask) & ((masks & ~w_mask) == 0)

    # минимальные порождающие подмножества U
    minimal = []
    for x in np.flatnonzero(spans_u):
        bits = [b for b in range(size) if (int(x) >> b) & 1]
        if not any(spans_u[int(x) ^ (1 << b)] for b in bits):
            minimal.append(np.uint64(x))

    disjoint = np.zeros(1 << size, dtype=bool)
    for x in minimal:
        rest = (masks & w_mask) & ~x
        disjoint |= ((masks & x) == x) & spans_w[rest.astype(np.int64)]

    right_u = _event_probability(spans_u[(masks & u_mask).astype(np.int64)], size, q)
    right_w = _event_probability(spans_w[(masks & w_mask).astype(np.int64)], size, q)
    return VdbkCheck(left=_event_probability(disjoint, size, q), right=right_u * right_w)


__all__ = [
    "PercolationPolynomial",
    "exact_percolation_polynomial",
    "exact_spanned_prob",
    "iter_spanning_sequences",
    "enumerate_spanning_sequences",
    "count_overlaps",
    "count_last_index_overlaps",
    "enumerate_quadruples",
    "VdbkCheck",
    "check_vdbk",
]
