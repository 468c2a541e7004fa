"""Настройки окружения и конфигурация запуска.

Приоритет: значения по умолчанию <- переменные окружения PERC_* <-
файл --config (строки key=value) <- флаги командной строки.
"""

from __future__ import annotations

import functools
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Literal, Mapping, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from .errors import InputDomainError


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="PERC_")

    workers: int = Field(1, ge=1, description="Число процессов для Монте-Карло")
    trials: int = Field(10000, ge=1)
    seed: int = Field(20240101, ge=0, lt=2 ** 64)
    rel_tol: float = Field(1e-2, ge=1e-3)
    database_url: str = "sqlite:///./percolation_runs.db"


@functools.lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings()


class RunConfig(BaseModel):
    """Плоский набор параметров одного запуска; неизвестные ключи запрещены."""

    model_config = ConfigDict(extra="forbid")

    command: str
    action: Optional[str] = Field(None, description="Подкоманда oracle: poly, sequences, ...")

    n: Optional[int] = Field(None, ge=1)
    k: Optional[int] = Field(None, ge=2)
    p: Optional[str] = Field(None, description="Вероятность: десятичная запись или дробь '1/4'")

    ell: Optional[int] = Field(None, ge=0)
    i: Optional[int] = Field(None, ge=0)
    j: Optional[int] = Field(None, ge=0)
    m: Optional[int] = Field(None, ge=1)
    t: Optional[int] = Field(None, ge=1)

    seed_vertices: Optional[str] = Field(None, description="Начальные вершины: файл или список '0,0;1,1'")
    trace: bool = Field(False, description="closure: выдавать события слияния")
    order: Optional[str] = Field(None, description="Порядок слияния (коды вершин через запятую)")
    projection: Optional[str] = Field(None, description="Проекция вида '*,1,*'")
    other: Optional[str] = Field(None, description="Вторая проекция (vdbk)")

    trials: int = Field(10000, ge=1)
    workers: int = Field(1, ge=1)
    seed: int = Field(20240101, ge=0, lt=2 ** 64)
    rel_tol: float = Field(1e-2, ge=1e-3)
    target: float = Field(0.5, gt=0, le=1)
    p_grid: Optional[str] = None

    format: Literal["json", "csv", "text"] = "json"
    table: Literal["phi", "f"] = Field("phi", description="Таблица для bounds --csv")
    verbose: bool = False

    host: str = "127.0.0.1"
    port: int = Field(8000, ge=1, le=65535)

    @field_validator("p")
    @classmethod
    def _check_p(cls, value: Optional[str]) -> Optional[str]:
        if value is None:
            return value
        try:
            q = Fraction(str(value).strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"не удалось прочитать вероятность '{value}'") from None
        if not 0 <= q <= 1:
            raise ValueError(f"p должно лежать в [0, 1], получено {value}")
        return str(value).strip()

    def p_fraction(self) -> Fraction:
        if self.p is None:
            raise InputDomainError("Параметр p не задан")
        return Fraction(self.p)

    def require(self, *names: str) -> None:
        missing = [name for name in names if getattr(self, name) is None]
        if missing:
            raise InputDomainError(f"Не заданы параметры для '{self.command}': {', '.join(missing)}")

    def resolved(self) -> Dict[str, Any]:
        return self.model_dump()


def load_config_file(path: Path) -> Dict[str, str]:
    """Строки key=value; '#' -- комментарий, пустые строки пропускаются."""
    values: Dict[str, str] = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputDomainError(f"Не удалось прочитать конфиг {path}: {e}") from None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputDomainError(f"{path}:{lineno}: ожидалась строка key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def build_run_config(
    command: str,
    file_values: Optional[Mapping[str, Any]] = None,
    cli_values: Optional[Mapping[str, Any]] = None,
) -> RunConfig:
    settings = get_settings()
    merged: Dict[str, Any] = {
        "trials": settings.trials,
        "workers": settings.workers,
        "seed": settings.seed,
        "rel_tol": settings.rel_tol,
    }
    merged.update(file_values or {})
    merged.update({key: value for key, value in (cli_values or {}).items() if value is not None})
    merged["command"] = command
    try:
        return RunConfig(**merged)
    except ValidationError as e:
        raise InputDomainError(f"Некорректная конфигурация: {e}") from None


__all__ = ["Settings", "get_settings", "RunConfig", "load_config_file", "build_run_config"]
