"""Алгебра проекций: размерность, принадлежность, расстояние, слияние.

Проекция задаётся шаблоном длины n: ``None`` -- свободная координата,
цифра -- фиксированная. Текстовая запись: "*,1,0,*".
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .errors import InputDomainError, PreconditionError
from .hamming import HammingSpace, Vertex

Pattern = Tuple[Optional[int], ...]


@dataclass(frozen=True)
class Projection:
    space: HammingSpace
    pattern: Pattern

    def __post_init__(self):
        pattern = tuple(None if d is None else int(d) for d in self.pattern)
        if len(pattern) != self.space.n:
            raise InputDomainError(f"Шаблон проекции длины {len(pattern)}, ожидалось {self.space.n}")
        for d in pattern:
            if d is not None and not 0 <= d < self.space.k:
                raise InputDomainError(f"Цифра {d} вне диапазона [0, {self.space.k - 1}]")
        object.__setattr__(self, "pattern", pattern)

    @classmethod
    def vertex(cls, space: HammingSpace, v: Sequence[int]) -> "Projection":
        return cls(space, space.validate(v))

    @classmethod
    def from_code(cls, space: HammingSpace, code: int) -> "Projection":
        return cls(space, space.decode(code))

    @classmethod
    def full(cls, space: HammingSpace) -> "Projection":
        return cls(space, (None,) * space.n)

    @classmethod
    def from_parts(cls, space: HammingSpace, free: Iterable[int], fixed: Mapping[int, int]) -> "Projection":
        free = set(free)
        if free & set(fixed) or free | set(fixed) != set(range(space.n)):
            raise InputDomainError("Свободные и фиксированные координаты должны разбивать [n]")
        return cls(space, tuple(None if i in free else fixed[i] for i in range(space.n)))

    @property
    def free(self) -> FrozenSet[int]:
        return frozenset(i for i, d in enumerate(self.pattern) if d is None)

    @property
    def fixed(self) -> Dict[int, int]:
        return {i: d for i, d in enumerate(self.pattern) if d is not None}

    @property
    def dim(self) -> int:
        return sum(1 for d in self.pattern if d is None)

    @property
    def vertex_count(self) -> int:
        return self.space.k ** self.dim

    def is_full(self) -> bool:
        return all(d is None for d in self.pattern)

    def contains(self, v: Sequence[int]) -> bool:
        digits = self.space.validate(v)
        return all(d is None or d == x for d, x in zip(self.pattern, digits))

    def contains_code(self, code: int) -> bool:
        k = self.space.k
        for d, w in zip(self.pattern, self.space.weights):
            if d is not None and (code // w) % k != d:
                return False
        return True

    def contains_projection(self, other: "Projection") -> bool:
        _same_space(self, other)
        return all(a is None or (b is not None and a == b) for a, b in zip(self.pattern, other.pattern))

    def vertex_codes(self) -> Iterator[int]:
        """Все вершины проекции (только для малых пространств)."""
        base = sum(d * w for d, w in zip(self.pattern, self.space.weights) if d is not None)
        free_weights = [w for d, w in zip(self.pattern, self.space.weights) if d is None]
        for digits in itertools.product(range(self.space.k), repeat=len(free_weights)):
            yield base + sum(d * w for d, w in zip(digits, free_weights))

    def __str__(self) -> str:
        return ",".join("*" if d is None else str(d) for d in self.pattern)


def _same_space(P: Projection, Q: Projection) -> None:
    if P.space != Q.space:
        raise InputDomainError(f"Проекции из разных пространств: {P.space} и {Q.space}")


def contains(P: Projection, v: Sequence[int]) -> bool:
    if len(v) != P.space.n:
        raise InputDomainError(f"Вершина длины {len(v)} не принадлежит пространству размерности {P.space.n}")
    return P.contains(v)


def projection_distance(P: Projection, Q: Projection) -> int:
    """Число координат, фиксированных в обеих проекциях с разными цифрами."""
    _same_space(P, Q)
    return sum(1 for a, b in zip(P.pattern, Q.pattern) if a is not None and b is not None and a != b)


def merge_span(P: Projection, Q: Projection) -> Projection:
    """Наименьшая проекция, содержащая P и Q; совпадает с замыканием P ∪ Q."""
    d = projection_distance(P, Q)
    if d >= 3:
        raise PreconditionError(f"Проекции {P} и {Q} на расстоянии {d} >= 3 не взаимодействуют")
    return Projection(
        P.space,
        tuple(a if a is not None and a == b else None for a, b in zip(P.pattern, Q.pattern)),
    )


def parse_projection(text: str, space: HammingSpace) -> Projection:
    tokens = [tok.strip() for tok in text.strip().split(",")]
    try:
        pattern = tuple(None if tok == "*" else int(tok) for tok in tokens)
    except ValueError:
        raise InputDomainError(f"Не удалось разобрать проекцию '{text}'") from None
    return Projection(space, pattern)


def all_projections(space: HammingSpace) -> List[Projection]:
    choices = [None] + list(range(space.k))
    return [Projection(space, pattern) for pattern in itertools.product(choices, repeat=space.n)]


def projection_of(space: HammingSpace, codes: Iterable[int]) -> Optional[Projection]:
    """Проекция, совпадающая с множеством вершин, или None."""
    codes = set(codes)
    if not codes:
        return None
    per_coord: List[set] = [set() for _ in range(space.n)]
    for code in codes:
        for i, d in enumerate(space.decode(code)):
            per_coord[i].add(d)
    size = 1
    pattern: List[Optional[int]] = []
    for digits in per_coord:
        if len(digits) == 1:
            pattern.append(next(iter(digits)))
        elif len(digits) == space.k:
            pattern.append(None)
            size *= space.k
        else:
            return None
    if size != len(codes):
        return None
    return Projection(space, tuple(pattern))


__all__ = [
    "Projection",
    "contains",
    "projection_distance",
    "merge_span",
    "parse_projection",
    "all_projections",
    "projection_of",
]
