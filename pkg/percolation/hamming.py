"""Граф Хэмминга K_k^□n: кодирование вершин, смежность, расстояния, посев.

Вершина хранится упакованным целым в смешанной системе счисления
(little-endian): цифра i имеет вес k^i. Для динамических движков
действует ограничение k^n <= 2^63.

Генератор случайных чисел: numpy Philox (counter-based) с ключом
``SeedSequence(entropy)``; одинаковая энтропия даёт одинаковую выборку
на любой платформе и при любом числе воркеров.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Iterable, Iterator, List, Sequence, Tuple, Union

import numpy as np

from .errors import CapabilityError, InputDomainError

Vertex = Tuple[int, ...]
SeedLike = Union[int, Sequence[int]]

ENGINE_LIMIT = 2 ** 63


@dataclass(frozen=True)
class HammingSpace:
    """n-мерный граф Хэмминга над полным графом K_k."""

    n: int
    k: int

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or not isinstance(self.k, (int, np.integer)):
            raise InputDomainError("n и k должны быть целыми")
        if self.n < 1 or self.k < 2:
            raise InputDomainError(f"Требуется n >= 1 и k >= 2, получено n={self.n}, k={self.k}")

    @property
    def vertex_count(self) -> int:
        return self.k ** self.n

    @property
    def degree(self) -> int:
        return self.n * (self.k - 1)

    @functools.cached_property
    def weights(self) -> Tuple[int, ...]:
        return tuple(self.k ** i for i in range(self.n))

    def require_engine(self) -> None:
        """Проверка, что индексы вершин помещаются в 64 бита."""
        if self.vertex_count > ENGINE_LIMIT:
            raise CapabilityError(
                f"k^n = {self.k}^{self.n} превышает 2^63: динамические движки недоступны"
            )

    # --- кодек ---
    def validate(self, v: Sequence[int]) -> Vertex:
        digits = tuple(int(d) for d in v)
        if len(digits) != self.n:
            raise InputDomainError(f"Вершина {digits} имеет длину {len(digits)}, ожидалось {self.n}")
        for d in digits:
            if not 0 <= d < self.k:
                raise InputDomainError(f"Цифра {d} вне диапазона [0, {self.k - 1}] в вершине {digits}")
        return digits

    def encode(self, v: Sequence[int]) -> int:
        digits = self.validate(v)
        return sum(d * w for d, w in zip(digits, self.weights))

    def decode(self, code: int) -> Vertex:
        self.validate_code(code)
        out = []
        for _ in range(self.n):
            code, d = divmod(code, self.k)
            out.append(d)
        return tuple(out)

    def validate_code(self, code: int) -> int:
        if not 0 <= code < self.vertex_count:
            raise InputDomainError(f"Код вершины {code} вне [0, {self.vertex_count})")
        return code

    def digit(self, code: int, i: int) -> int:
        return (code // self.weights[i]) % self.k

    def neighbor_codes(self, code: int) -> Iterator[int]:
        """Соседи упакованной вершины (координата, затем цифра по возрастанию)."""
        k = self.k
        for w in self.weights:
            d = (code // w) % k
            base = code - d * w
            for e in range(k):
                if e != d:
                    yield base + e * w


def neighbors(space: HammingSpace, v: Sequence[int]) -> Iterator[Vertex]:
    digits = space.validate(v)
    for i in range(space.n):
        for e in range(space.k):
            if e != digits[i]:
                yield digits[:i] + (e,) + digits[i + 1:]


def vertex_distance(u: Sequence[int], v: Sequence[int]) -> int:
    if len(u) != len(v):
        raise InputDomainError(f"Вершины из разных пространств: длины {len(u)} и {len(v)}")
    return sum(1 for a, b in zip(u, v) if a != b)


def parse_vertex(text: str, space: HammingSpace) -> Vertex:
    """'0,1,2' -> (0, 1, 2)."""
    try:
        digits = tuple(int(tok) for tok in text.strip().split(","))
    except ValueError:
        raise InputDomainError(f"Не удалось разобрать вершину '{text}'") from None
    return space.validate(digits)


def format_vertex(v: Sequence[int]) -> str:
    return ",".join(str(d) for d in v)


@dataclass(frozen=True)
class InfectionConfig:
    """Конечное множество заражённых вершин (упакованные коды)."""

    space: HammingSpace
    infected: FrozenSet[int]

    def __post_init__(self):
        object.__setattr__(self, "infected", frozenset(int(c) for c in self.infected))
        for code in self.infected:
            self.space.validate_code(code)

    @classmethod
    def from_digits(cls, space: HammingSpace, vertices: Iterable[Sequence[int]]) -> "InfectionConfig":
        codes = [space.encode(v) for v in vertices]
        if len(set(codes)) != len(codes):
            raise InputDomainError("Повторяющиеся вершины в начальном множестве")
        return cls(space, frozenset(codes))

    def __len__(self) -> int:
        return len(self.infected)

    def codes(self) -> List[int]:
        return sorted(self.infected)

    def digits(self) -> List[Vertex]:
        return [self.space.decode(c) for c in self.codes()]


def make_rng(seed: SeedLike) -> np.random.Generator:
    """Philox-генератор для заданной энтропии (int или последовательность int)."""
    entropy = [seed] if isinstance(seed, (int, np.integer)) else list(seed)
    entropy = [int(s) for s in entropy]
    if any(s < 0 or s >= 2 ** 64 for s in entropy):
        raise InputDomainError(f"Зерно должно быть 64-битным неотрицательным: {entropy}")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def _check_p(p: Union[float, Fraction]) -> float:
    try:
        value = float(p)
    except (TypeError, ValueError):
        raise InputDomainError(f"p должно быть числом, получено {p!r}") from None
    if not 0.0 <= value <= 1.0:
        raise InputDomainError(f"p должно лежать в [0, 1], получено {p}")
    return value


def _binomial(rng: np.random.Generator, total: int, p: float) -> int:
    # numpy принимает n только в int64
    limit = np.iinfo(np.int64).max
    count = 0
    while total > 0:
        part = min(total, limit)
        count += int(rng.binomial(part, p))
        total -= part
    return count


def sample_infected(space: HammingSpace, p: Union[float, Fraction], seed: SeedLike) -> InfectionConfig:
    """p-случайное подмножество вершин: число ~ Bin(k^n, p), затем различные позиции."""
    value = _check_p(p)
    space.require_engine()
    total = space.vertex_count
    if value == 0.0:
        return InfectionConfig(space, frozenset())
    if value == 1.0:
        return InfectionConfig(space, frozenset(range(total)))

    rng = make_rng(seed)
    count = _binomial(rng, total, value)
    if count == 0:
        return InfectionConfig(space, frozenset())
    if 2 * count > total:
        chosen = set(int(x) for x in rng.choice(total, size=count, replace=False))
    else:
        chosen = set()
        while len(chosen) < count:
            draw = rng.integers(0, total, size=count - len(chosen), dtype=np.uint64)
            chosen.update(int(x) for x in draw)
    return InfectionConfig(space, frozenset(chosen))


def coupled_infected(space: HammingSpace, uniforms: np.ndarray, p: float) -> InfectionConfig:
    """Плотный посев из общих равномерных величин: A_p = {v : u_v < p}."""
    if uniforms.shape != (space.vertex_count,):
        raise InputDomainError("Число равномерных величин не совпадает с k^n")
    return InfectionConfig(space, frozenset(int(c) for c in np.flatnonzero(uniforms < _check_p(p))))


__all__ = [
    "Vertex",
    "HammingSpace",
    "InfectionConfig",
    "neighbors",
    "vertex_distance",
    "parse_vertex",
    "format_vertex",
    "make_rng",
    "sample_infected",
    "coupled_infected",
    "ENGINE_LIMIT",
]
