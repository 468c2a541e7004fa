from fastapi import APIRouter, Depends, HTTPException, Query
from sqlalchemy.orm import Session

from .. import database, models, schemas

router = APIRouter(prefix="/runs", tags=["Run Archive"])


@router.get("/", response_model=schemas.RunList)
def list_runs(
    command: str = None,
    limit: int = Query(50, ge=1, le=500),
    db: Session = Depends(database.get_db),
):
    query = db.query(models.RunRecord)
    if command:
        query = query.filter(models.RunRecord.command == command)
    total = query.count()
    runs = query.order_by(models.RunRecord.id.desc()).limit(limit).all()
    return {"total": total, "runs": runs}


@router.get("/{run_id}", response_model=schemas.RunResponse)
def get_run(run_id: int, db: Session = Depends(database.get_db)):
    run = db.query(models.RunRecord).filter(models.RunRecord.id == run_id).first()
    if not run:
        raise HTTPException(status_code=404, detail="Run not found")
    return run
