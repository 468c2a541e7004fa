from datetime import datetime
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class SpaceInput(BaseModel):
    n: int = Field(..., ge=1, description="Размерность графа Хэмминга")
    k: int = Field(..., ge=2, description="Размер алфавита (K_k)")


# --- BOUNDS ---

class ParametersResponse(BaseModel):
    n: int
    k: int
    p_star: float = Field(..., description="Нижний порог p_* (может обнулиться при переполнении)")
    p_upper_star: float = Field(..., description="Верхний порог p^* = 200 p_*")
    ln_p_star: float
    D: int = Field(..., description="Критическая размерность ⌊2√n⌋-2")
    L: int
    i_star: int


class BoundsInput(SpaceInput):
    p: Optional[str] = Field(None, description="Вероятность (по умолчанию p_*); допускается дробь '1/4'")


# --- ORACLE ---

class PolynomialInput(SpaceInput):
    target: float = Field(0.5, gt=0, lt=1, description="Уровень для корня многочлена")


class QuadruplesInput(BaseModel):
    m: int = Field(..., ge=1, description="Размерность объемлющей проекции")
    k: int = Field(..., ge=2)
    t: int = Field(..., ge=1, description="Порог размерности")


# --- SIMULATION ---

class EstimateInput(SpaceInput):
    p: float = Field(..., ge=0, le=1)
    trials: Optional[int] = Field(None, ge=1, description="По умолчанию PERC_TRIALS")
    seed: Optional[int] = Field(None, ge=0, description="Главное зерно (по умолчанию PERC_SEED)")
    workers: Optional[int] = Field(None, ge=1)


class PcInput(SpaceInput):
    target: float = Field(0.5, gt=0, le=1)
    rel_tol: Optional[float] = Field(None, ge=1e-3)
    trials: Optional[int] = Field(None, ge=1, description="Испытаний на одну пробу")
    seed: Optional[int] = Field(None, ge=0)
    workers: Optional[int] = Field(None, ge=1)


# --- RUNS ---

class RunResponse(BaseModel):
    id: int
    command: str
    version: str
    config: Dict[str, Any]
    result: Any
    created_at: datetime

    class Config:
        from_attributes = True


class RunSummary(BaseModel):
    id: int
    command: str
    created_at: datetime

    class Config:
        from_attributes = True


class RunList(BaseModel):
    total: int
    runs: List[RunSummary]
