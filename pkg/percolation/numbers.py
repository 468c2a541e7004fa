"""Арифметические носители калькулятора оценок.

BigCount -- обычный ``int`` Python (точная длинная арифметика).
LogNumber -- неотрицательное вещественное число, хранимое натуральным
логарифмом в расширенной точности mpmath (113 бит мантиссы); ноль
хранится отдельным признаком.
"""

from __future__ import annotations

import functools
from fractions import Fraction
from typing import Any, Dict, Iterable, Optional, Union

import mpmath
import numpy as np

from .errors import InputDomainError

# Отдельный контекст, чтобы не трогать глобальный mpmath.mp
MP = mpmath.MPContext()
MP.prec = 113

BigCount = int

Real = Union[int, float, Fraction, "LogNumber", np.integer, np.floating]

_LN_FLOAT_MAX = 709.782712893384


@functools.total_ordering
class LogNumber:
    """Неотрицательное число в лог-шкале."""

    __slots__ = ("_ln",)

    def __init__(self, ln: Any = None):
        self._ln = None if ln is None else MP.mpf(ln)

    # --- конструкторы ---
    @classmethod
    def zero(cls) -> "LogNumber":
        return cls(None)

    @classmethod
    def one(cls) -> "LogNumber":
        return cls(0)

    @classmethod
    def from_log(cls, ln: Any) -> "LogNumber":
        return cls(ln)

    @classmethod
    def of(cls, x: Real) -> "LogNumber":
        """Перевод int / float / Fraction / LogNumber в лог-шкалу."""
        if isinstance(x, LogNumber):
            return x
        if isinstance(x, np.integer):
            x = int(x)
        if isinstance(x, np.floating):
            x = float(x)
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, Fraction):
            if x < 0:
                raise InputDomainError(f"LogNumber не хранит отрицательные числа: {x}")
            if x == 0:
                return cls.zero()
            return cls(MP.log(MP.mpf(x.numerator)) - MP.log(MP.mpf(x.denominator)))
        if isinstance(x, (int, float)):
            if x < 0 or x != x:
                raise InputDomainError(f"LogNumber не хранит отрицательные числа: {x}")
            if x == 0:
                return cls.zero()
            return cls(MP.log(MP.mpf(x)))
        raise InputDomainError(f"Неподдерживаемый тип для LogNumber: {type(x).__name__}")

    @classmethod
    def sum(cls, items: Iterable["LogNumber"]) -> "LogNumber":
        """log-sum-exp по набору слагаемых."""
        logs = [it._ln for it in items if it._ln is not None]
        if not logs:
            return cls.zero()
        top = max(logs)
        return cls(top + MP.log(MP.fsum(MP.exp(v - top) for v in logs)))

    # --- свойства ---
    @property
    def is_zero(self) -> bool:
        return self._ln is None

    @property
    def ln(self) -> Optional[mpmath.mpf]:
        return self._ln

    def log_float(self) -> float:
        return float("-inf") if self._ln is None else float(self._ln)

    def log10(self) -> float:
        return float("-inf") if self._ln is None else float(self._ln / MP.log(10))

    # --- арифметика ---
    def __mul__(self, other: Real) -> "LogNumber":
        o = LogNumber.of(other)
        if self._ln is None or o._ln is None:
            return LogNumber.zero()
        return LogNumber(self._ln + o._ln)

    __rmul__ = __mul__

    def __truediv__(self, other: Real) -> "LogNumber":
        o = LogNumber.of(other)
        if o._ln is None:
            raise ZeroDivisionError("деление LogNumber на ноль")
        if self._ln is None:
            return LogNumber.zero()
        return LogNumber(self._ln - o._ln)

    def __rtruediv__(self, other: Real) -> "LogNumber":
        return LogNumber.of(other) / self

    def __pow__(self, exponent: Any) -> "LogNumber":
        e = MP.mpf(exponent) if not isinstance(exponent, Fraction) else MP.mpf(exponent.numerator) / exponent.denominator
        if self._ln is None:
            if e == 0:
                return LogNumber.one()
            if e < 0:
                raise ZeroDivisionError("ноль в отрицательной степени")
            return LogNumber.zero()
        return LogNumber(self._ln * e)

    def __add__(self, other: Real) -> "LogNumber":
        o = LogNumber.of(other)
        if self._ln is None:
            return o
        if o._ln is None:
            return self
        hi, lo = (self._ln, o._ln) if self._ln >= o._ln else (o._ln, self._ln)
        return LogNumber(hi + MP.log1p(MP.exp(lo - hi)))

    __radd__ = __add__

    # --- сравнения ---
    def _key(self):
        return MP.ninf if self._ln is None else self._ln

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, (LogNumber, int, float, Fraction)):
            return NotImplemented
        return self._key() == LogNumber.of(other)._key()

    def __lt__(self, other: Real) -> bool:
        return self._key() < LogNumber.of(other)._key()

    def __hash__(self) -> int:
        return hash(self._ln)

    def __float__(self) -> float:
        if self._ln is None:
            return 0.0
        if self._ln > _LN_FLOAT_MAX:
            return float("inf")
        return float(MP.exp(self._ln))

    def __repr__(self) -> str:
        if self._ln is None:
            return "LogNumber(0)"
        return f"LogNumber(ln={MP.nstr(self._ln, 20)})"

    def to_json(self) -> Dict[str, Any]:
        return {"ln": None if self._ln is None else float(self._ln), "value": float(self)}


def log_count(n: BigCount) -> LogNumber:
    """BigCount -> LogNumber."""
    if n < 0:
        raise InputDomainError(f"BigCount неотрицателен, получено {n}")
    return LogNumber.of(int(n))


def as_probability(p: Real, *, open_interval: bool = False) -> LogNumber:
    """Проверка вероятности и перевод в LogNumber."""
    lp = LogNumber.of(p) if not isinstance(p, LogNumber) else p
    if lp > 1:
        raise InputDomainError(f"Вероятность должна лежать в [0, 1], получено {float(lp)}")
    if open_interval and (lp.is_zero or lp == 1):
        raise InputDomainError(f"Вероятность должна лежать в (0, 1), получено {float(lp)}")
    return lp


__all__ = ["MP", "BigCount", "LogNumber", "log_count", "as_probability"]
