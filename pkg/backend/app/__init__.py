import sys
from pathlib import Path

# backend/app/__init__.py -> корень проекта, где лежит пакет percolation
PROJECT_ROOT = Path(__file__).resolve().parents[2]
if str(PROJECT_ROOT) not in sys.path:
    sys.path.append(str(PROJECT_ROOT))
