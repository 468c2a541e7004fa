from fastapi import APIRouter, Depends
from sqlalchemy.orm import Session

from percolation import bounds, oracle
from percolation.errors import PercolationError
from percolation.hamming import HammingSpace

from .. import database, models, schemas, services

router = APIRouter(prefix="/oracle", tags=["Exhaustive Oracle"])


@router.post("/polynomial", response_model=schemas.RunResponse)
def percolation_polynomial(data: schemas.PolynomialInput, db: Session = Depends(database.get_db)):
    try:
        poly = oracle.exact_percolation_polynomial(HammingSpace(data.n, data.k))
        result = {"counts": list(poly.counts), "root": poly.root(data.target)}
    except PercolationError as e:
        raise services.http_error(e)
    return services.archive_run(db, models.RunCommand.POLYNOMIAL, data.model_dump(), result)


@router.post("/quadruples", response_model=schemas.RunResponse)
def candidate_quadruples(data: schemas.QuadruplesInput, db: Session = Depends(database.get_db)):
    try:
        counts = oracle.enumerate_quadruples(data.m, data.k, data.t)
        rows = [
            {**idx._asdict(), "oracle": count, "formula": bounds.count_quadruples(data.m, data.k, data.t, idx)}
            for idx, count in counts.items()
        ]
    except PercolationError as e:
        raise services.http_error(e)
    result = {"rows": rows, "matches": all(r["oracle"] == r["formula"] for r in rows)}
    return services.archive_run(db, models.RunCommand.QUADRUPLES, data.model_dump(), result)
