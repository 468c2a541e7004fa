from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from app.database import Base, engine
from app.routers import bounds, oracle, runs, simulation
from percolation import __version__

# Создаем таблицы при старте
Base.metadata.create_all(bind=engine)

app = FastAPI(
    title="Bootstrap Percolation on Hamming Graphs",
    description="Калькулятор оценок порога, переборный эталон и Монте-Карло для 2-соседней бутстрап-перколяции",
    version=__version__,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(bounds.router)
app.include_router(oracle.router)
app.include_router(simulation.router)
app.include_router(runs.router)


@app.get("/")
def root():
    return {
        "message": "Percolation API is running",
        "version": __version__,
        "endpoints": {
            "docs": "/docs",
            "parameters": "/bounds/parameters",
            "bounds_report": "/bounds/report",
            "polynomial": "/oracle/polynomial",
            "quadruples": "/oracle/quadruples",
            "estimate": "/simulation/estimate",
            "pc": "/simulation/pc",
            "runs": "/runs/",
        },
    }
