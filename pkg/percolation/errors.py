"""Иерархия исключений пакета и коды выхода CLI."""

from __future__ import annotations

from typing import Any, Dict


class PercolationError(Exception):
    """Базовая ошибка пакета."""

    exit_code = 1


class InputDomainError(PercolationError, ValueError):
    """Аргумент вне области определения (p вне [0,1], неверная вершина и т.п.)."""

    exit_code = 1


class PreconditionError(InputDomainError):
    """Нарушено предусловие операции (например, слияние на расстоянии >= 3)."""


class WitnessNotFoundError(InputDomainError, LookupError):
    """Ни одна компонента не достигла нужной размерности."""


class CapabilityError(PercolationError, RuntimeError):
    """Экземпляр слишком велик для перебора или индексного пространства."""

    exit_code = 2


class DiagnosticError(PercolationError, RuntimeError):
    """Численная процедура не смогла дать результат."""

    exit_code = 3


class BracketFailure(DiagnosticError):
    """Оценки на концах интервала бисекции не разделяют целевой уровень."""

    def __init__(self, message: str, low: Dict[str, Any], high: Dict[str, Any]):
        super().__init__(message)
        self.low = low
        self.high = high


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, PercolationError):
        return exc.exit_code
    return 1


__all__ = [
    "PercolationError",
    "InputDomainError",
    "PreconditionError",
    "WitnessNotFoundError",
    "CapabilityError",
    "DiagnosticError",
    "BracketFailure",
    "exit_code_for",
]
