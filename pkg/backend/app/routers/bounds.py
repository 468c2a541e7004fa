from fastapi import APIRouter, Depends, Query
from sqlalchemy.orm import Session

from percolation import bounds
from percolation.errors import PercolationError

from .. import database, models, schemas, services

router = APIRouter(prefix="/bounds", tags=["Bounds Calculus"])


@router.get("/parameters", response_model=schemas.ParametersResponse)
def get_parameters(n: int = Query(..., ge=1), k: int = Query(..., ge=2)):
    try:
        params = bounds.parameters(n, k)
    except PercolationError as e:
        raise services.http_error(e)
    return {
        "n": n,
        "k": k,
        "p_star": float(params.p_star),
        "p_upper_star": float(params.p_upper_star),
        "ln_p_star": params.p_star.log_float(),
        "D": params.D,
        "L": params.L,
        "i_star": params.i_star,
    }


@router.post("/report", response_model=schemas.RunResponse)
def bounds_report(data: schemas.BoundsInput, db: Session = Depends(database.get_db)):
    """Параметры, таблица Φ, нижняя оценка и (при n >= 4) второй момент."""
    try:
        params = bounds.parameters(data.n, data.k)
        p = services.parse_probability(data.p) if data.p is not None else params.p_star
        result = {
            "parameters": params,
            "phi": bounds.phi_table(data.n, data.k, p),
            "lower_bound": bounds.lower_bound_report(data.n, data.k, p),
        }
        if data.n >= 4:
            result["second_moment"] = bounds.second_moment_report(data.n, data.k, p)
    except PercolationError as e:
        raise services.http_error(e)
    return services.archive_run(db, models.RunCommand.BOUNDS, data.model_dump(), result)
