import enum
from datetime import datetime

from sqlalchemy import JSON, Column, DateTime, Integer, String

from .database import Base


class RunCommand(str, enum.Enum):
    BOUNDS = "bounds"
    POLYNOMIAL = "oracle_poly"
    QUADRUPLES = "oracle_quadruples"
    ESTIMATE = "estimate"
    PC = "pc"


class RunRecord(Base):
    """Архив запусков: параметры и результат в JSON."""

    __tablename__ = "runs"

    id = Column(Integer, primary_key=True, index=True)
    command = Column(String, index=True)
    version = Column(String)
    config = Column(JSON)
    result = Column(JSON)
    created_at = Column(DateTime, default=datetime.utcnow)
