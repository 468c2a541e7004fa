"""Общие помощники роутеров: архив запусков и перевод ошибок пакета в HTTP."""

from fractions import Fraction
from typing import Any, Dict

from fastapi import HTTPException
from sqlalchemy.orm import Session

from percolation import __version__
from percolation.errors import CapabilityError, DiagnosticError, InputDomainError, PercolationError
from percolation.report import sanitize

from . import models


def http_error(exc: PercolationError) -> HTTPException:
    if isinstance(exc, CapabilityError):
        return HTTPException(status_code=413, detail=str(exc))
    if isinstance(exc, DiagnosticError):
        detail: Dict[str, Any] = {"message": str(exc)}
        if hasattr(exc, "low"):
            detail.update(sanitize({"low": exc.low, "high": exc.high}))
        return HTTPException(status_code=422, detail=detail)
    if isinstance(exc, InputDomainError):
        return HTTPException(status_code=400, detail=str(exc))
    return HTTPException(status_code=500, detail=str(exc))


def archive_run(db: Session, command: models.RunCommand, config: Dict[str, Any], result: Any) -> models.RunRecord:
    record = models.RunRecord(
        command=command.value,
        version=__version__,
        config=sanitize(config),
        result=sanitize(result),
    )
    db.add(record)
    db.commit()
    db.refresh(record)
    print(f"✅ Запуск #{record.id} ({record.command}) сохранён")
    return record


def parse_probability(text: str) -> Fraction:
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise InputDomainError(f"Не удалось прочитать вероятность '{text}'") from None
    if not 0 <= value <= 1:
        raise InputDomainError(f"p должно лежать в [0, 1], получено {text}")
    return value
