from fastapi import APIRouter, Depends
from sqlalchemy.orm import Session

from percolation import bounds, montecarlo
from percolation.errors import PercolationError
from percolation.hamming import HammingSpace

from .. import database, models, schemas, services

router = APIRouter(prefix="/simulation", tags=["Monte Carlo"])


@router.post("/estimate", response_model=schemas.RunResponse)
def estimate(data: schemas.EstimateInput, db: Session = Depends(database.get_db)):
    try:
        est = montecarlo.estimate_percolation(
            HammingSpace(data.n, data.k), data.p, data.trials, data.seed, data.workers
        )
    except PercolationError as e:
        raise services.http_error(e)
    return services.archive_run(db, models.RunCommand.ESTIMATE, data.model_dump(), est)


@router.post("/pc", response_model=schemas.RunResponse)
def critical_probability(data: schemas.PcInput, db: Session = Depends(database.get_db)):
    """Бисекция по log p; при неразделяющей вилке -- 422 с оценками на концах."""
    try:
        space = HammingSpace(data.n, data.k)
        res = montecarlo.find_pc(space, data.target, data.rel_tol, data.trials, data.seed, data.workers)
        params = bounds.parameters(data.n, data.k)
    except PercolationError as e:
        raise services.http_error(e)
    result = res.to_dict()
    result["sandwich"] = [float(params.p_star), float(params.p_upper_star)]
    return services.archive_run(db, models.RunCommand.PC, data.model_dump(), result)
