"""Динамика 2-соседней бутстрап-перколяции.

Два движка замыкания:
  * closure_queue -- счётчики заражённых соседей + очередь;
  * closure_components -- слияние проекций с журналом событий.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .errors import InputDomainError, PreconditionError, WitnessNotFoundError
from .hamming import HammingSpace, InfectionConfig, Vertex
from .projection import Projection, merge_span, projection_distance


def closure_queue(seed: InfectionConfig) -> FrozenSet[int]:
    """[A]: наименьшее надмножество A без здоровых вершин с >= 2 заражёнными соседями."""
    space = seed.space
    space.require_engine()
    infected = set(seed.infected)
    counts: Dict[int, int] = {}
    queue = deque(infected)
    while queue:
        v = queue.popleft()
        for u in space.neighbor_codes(v):
            if u in infected:
                continue
            c = counts.get(u, 0) + 1
            if c >= 2:
                infected.add(u)
                queue.append(u)
                del counts[u]
            else:
                counts[u] = c
    return frozenset(infected)


class MergeEvent(NamedTuple):
    left: int
    right: int
    distance: int
    result: Projection
    result_id: int
    left_projection: Projection
    right_projection: Projection


@dataclass(frozen=True)
class MergeTrace:
    events: Tuple[MergeEvent, ...]
    final: Tuple[Projection, ...]

    def union_codes(self) -> FrozenSet[int]:
        """Объединение финальных проекций (только для малых пространств)."""
        out = set()
        for P in self.final:
            out.update(P.vertex_codes())
        return frozenset(out)


def _merge_process(
    space: HammingSpace,
    codes: Sequence[int],
    until: Optional[Callable[[Projection], bool]] = None,
) -> Tuple[List[MergeEvent], List[Tuple[int, Projection]], bool]:
    # settled всегда попарно на расстоянии >= 3
    settled: List[Tuple[int, Projection]] = []
    events: List[MergeEvent] = []
    next_id = len(codes)
    for cid, code in enumerate(codes):
        current_id, current = cid, Projection.from_code(space, code)
        while True:
            hit = None
            for pos, (_, other) in enumerate(settled):
                d = projection_distance(other, current)
                if d <= 2:
                    hit = (pos, d)
                    break
            if hit is None:
                settled.append((current_id, current))
                break
            pos, d = hit
            left_id, left = settled.pop(pos)
            merged = merge_span(left, current)
            events.append(MergeEvent(left_id, current_id, d, merged, next_id, left, current))
            current_id, current = next_id, merged
            next_id += 1
            if until is not None and until(merged):
                settled.append((current_id, current))
                return events, settled, True
    return events, settled, False


def _ordered_codes(seed: InfectionConfig, order: Optional[Sequence[int]]) -> List[int]:
    if order is None:
        return seed.codes()
    codes = [int(c) for c in order]
    if sorted(codes) != seed.codes():
        raise InputDomainError("Порядок слияния должен быть перестановкой начального множества")
    return codes


def closure_components(seed: InfectionConfig, order: Optional[Sequence[int]] = None) -> MergeTrace:
    """Слияние одновершинных проекций, пока все попарные расстояния не станут >= 3.

    Компоненты обрабатываются в порядке вставки: очередная компонента
    сливается с первой (по порядку) оседлой компонентой на расстоянии <= 2,
    результат снова считается входящим.
    """
    seed.space.require_engine()
    events, settled, _ = _merge_process(seed.space, _ordered_codes(seed, order))
    return MergeTrace(tuple(events), tuple(P for _, P in settled))


def percolates(seed: InfectionConfig) -> bool:
    space = seed.space
    space.require_engine()
    size = len(seed)
    if size == space.vertex_count:
        return True
    # слияние не увеличивает сумму (dim + 2) по компонентам
    if 2 * size < space.n + 2:
        return False
    _, settled, stopped = _merge_process(space, seed.codes(), until=Projection.is_full)
    return stopped or (len(settled) == 1 and settled[0][1].is_full())


@dataclass(frozen=True)
class SpanSequence:
    space: HammingSpace
    vertices: Tuple[int, ...]

    def __post_init__(self):
        codes = tuple(int(c) for c in self.vertices)
        if not codes:
            raise InputDomainError("Последовательность должна содержать хотя бы одну вершину")
        if len(set(codes)) != len(codes):
            raise InputDomainError("Вершины последовательности должны быть различны")
        for c in codes:
            self.space.validate_code(c)
        object.__setattr__(self, "vertices", codes)

    @classmethod
    def from_digits(cls, space: HammingSpace, vertices: Iterable[Sequence[int]]) -> "SpanSequence":
        return cls(space, tuple(space.encode(v) for v in vertices))

    @property
    def size(self) -> int:
        return len(self.vertices) - 1

    def extended(self, code: int) -> "SpanSequence":
        return SpanSequence(self.space, self.vertices + (code,))

    def digits(self) -> List[Vertex]:
        return [self.space.decode(c) for c in self.vertices]


def is_sequentially_spanning(s: SpanSequence) -> bool:
    P = Projection.from_code(s.space, s.vertices[0])
    for code in s.vertices[1:]:
        V = Projection.from_code(s.space, code)
        if projection_distance(P, V) != 2:
            return False
        P = merge_span(P, V)
    return True


def span_projection(s: SpanSequence) -> Projection:
    """Проекция, порождённая последовательно порождающей последовательностью."""
    if not is_sequentially_spanning(s):
        raise PreconditionError("Последовательность не является последовательно порождающей")
    P = Projection.from_code(s.space, s.vertices[0])
    for code in s.vertices[1:]:
        P = merge_span(P, Projection.from_code(s.space, code))
    return P


def extend_candidates(s: SpanSequence) -> FrozenSet[int]:
    """Вершины на расстоянии ровно 2 от порождённой проекции."""
    P = span_projection(s)
    space = s.space
    k, weights = space.k, space.weights
    fixed = sorted(P.fixed.items())
    if len(fixed) < 2:
        return frozenset()
    free_codes = [0]
    for i in sorted(P.free):
        free_codes = [c + d * weights[i] for c in free_codes for d in range(k)]
    base = sum(d * weights[i] for i, d in fixed)
    out = set()
    for x in range(len(fixed)):
        ia, da = fixed[x]
        for y in range(x + 1, len(fixed)):
            ib, db = fixed[y]
            for ea in range(k):
                if ea == da:
                    continue
                for eb in range(k):
                    if eb == db:
                        continue
                    shifted = base + (ea - da) * weights[ia] + (eb - db) * weights[ib]
                    out.update(shifted + c for c in free_codes)
    return frozenset(out)


def grow_spanning_sequence(space: HammingSpace, size: int, rng: np.random.Generator) -> SpanSequence:
    """Случайная последовательно порождающая последовательность заданного размера."""
    if not 0 <= 2 * size <= space.n:
        raise InputDomainError(f"Размер {size} вне [0, {space.n // 2}]")
    s = SpanSequence(space, (int(rng.integers(space.vertex_count)),))
    for _ in range(size):
        candidates = sorted(extend_candidates(s))
        s = s.extended(candidates[int(rng.integers(len(candidates)))])
    return s


@dataclass(frozen=True)
class WitnessQuadruple:
    H_ell: Projection
    H_i: Projection
    H_j: Projection
    d: int

    def check(self, t: int) -> bool:
        return (
            projection_distance(self.H_i, self.H_j) == self.d
            and self.d in (0, 1, 2)
            and merge_span(self.H_i, self.H_j) == self.H_ell
            and self.H_ell.dim >= t > max(self.H_i.dim, self.H_j.dim)
            and self.H_i.dim >= self.H_j.dim
        )


def witnessing_quadruple(seed: InfectionConfig, t: int) -> WitnessQuadruple:
    """Первое событие слияния, дающее компоненту размерности >= t."""
    if t < 1:
        raise InputDomainError(f"Порог t должен быть >= 1, получено {t}")
    seed.space.require_engine()
    events, _, stopped = _merge_process(seed.space, seed.codes(), until=lambda R: R.dim >= t)
    if not stopped:
        raise WitnessNotFoundError(f"Ни одна компонента не достигла размерности {t}")
    last = events[-1]
    a, b = last.left_projection, last.right_projection
    if b.dim > a.dim:
        a, b = b, a
    return WitnessQuadruple(last.result, a, b, last.distance)


__all__ = [
    "closure_queue",
    "closure_components",
    "percolates",
    "MergeEvent",
    "MergeTrace",
    "SpanSequence",
    "is_sequentially_spanning",
    "span_projection",
    "extend_candidates",
    "grow_spanning_sequence",
    "WitnessQuadruple",
    "witnessing_quadruple",
]
