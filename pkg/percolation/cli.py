"""Командная строка: python -m percolation <команда> [параметры].

Коды выхода: 0 -- успех, 1 -- ошибка входных данных, 2 -- экземпляр
слишком велик, 3 -- диагностика (например, вилка бисекции не найдена
или selftest нашёл расхождение).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import pandas as pd

from . import __version__, bounds, montecarlo, oracle, report
from .config import RunConfig, build_run_config, load_config_file
from .engine import closure_components, closure_queue, percolates
from .errors import CapabilityError, InputDomainError, PercolationError
from .hamming import HammingSpace, InfectionConfig, format_vertex, parse_vertex
from .projection import parse_projection
from .selftest import run_selftest

ORACLE_ACTIONS = ("poly", "sequences", "quadruples", "overlaps", "spanned", "vdbk")


@dataclass
class Outcome:
    result: Any
    table: Optional[pd.DataFrame] = None
    exit_code: int = 0
    text: Optional[str] = None


def _space(config: RunConfig) -> HammingSpace:
    config.require("n", "k")
    return HammingSpace(config.n, config.k)


def _read_seed_vertices(text: str, space: HammingSpace) -> InfectionConfig:
    """Список '0,0;1,1' либо путь к файлу: вершина на строке (или через ';'), '#' -- комментарий."""
    source = text
    path = Path(text.strip())
    if path.is_file():
        try:
            source = path.read_text(encoding="utf-8")
        except OSError as e:
            raise InputDomainError(f"Не удалось прочитать {path}: {e}") from None
        source = "\n".join(line.split("#", 1)[0] for line in source.splitlines())
    chunks = [chunk for line in source.splitlines() for chunk in line.split(";")]
    vertices = [parse_vertex(chunk, space) for chunk in chunks if chunk.strip()]
    return InfectionConfig.from_digits(space, vertices)


def _parse_codes(text: str) -> List[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise InputDomainError(f"Порядок задаётся кодами вершин через запятую, получено '{text}'") from None


# --- обработчики команд ---

def _closure(config: RunConfig) -> Outcome:
    space = _space(config)
    config.require("seed_vertices")
    seed = _read_seed_vertices(config.seed_vertices, space)
    closed = closure_queue(seed)
    trace = closure_components(seed, _parse_codes(config.order) if config.order else None)
    components = [str(P) for P in trace.final]
    result: Dict[str, Any] = {
        "seed_size": len(seed),
        "closure_size": len(closed),
        "percolates": percolates(seed),
        "closure": [format_vertex(space.decode(c)) for c in sorted(closed)],
        "components": components,
    }
    lines = list(components)
    if config.trace:
        result["merges"] = [
            {"left": e.left, "right": e.right, "distance": e.distance, "result": str(e.result), "result_id": e.result_id}
            for e in trace.events
        ]
        lines += [f"merge {e.left} {e.right} d={e.distance} -> {e.result}" for e in trace.events]
    return Outcome(result, text="\n".join(lines))


def _oracle(config: RunConfig) -> Outcome:
    action = config.action
    if action not in ORACLE_ACTIONS:
        raise InputDomainError(f"Неизвестное действие oracle: {action}")

    if action == "quadruples":
        config.require("m", "k", "t")
        counts = oracle.enumerate_quadruples(config.m, config.k, config.t)
        rows = [
            {**idx._asdict(), "oracle": count, "formula": bounds.count_quadruples(config.m, config.k, config.t, idx)}
            for idx, count in counts.items()
        ]
        table = pd.DataFrame(rows, columns=["ell", "i", "j", "d", "oracle", "formula"])
        return Outcome({"m": config.m, "k": config.k, "t": config.t, "rows": rows}, table)

    space = _space(config)
    if action == "poly":
        poly = oracle.exact_percolation_polynomial(space)
        result: Dict[str, Any] = {"counts": list(poly.counts), "root": poly.root(config.target)}
        if config.p is not None:
            result["value"] = poly.evaluate(config.p_fraction())
        table = pd.DataFrame({"size": range(len(poly.counts)), "count": poly.counts})
        return Outcome(result, table)
    if action == "sequences":
        config.require("ell")
        return Outcome({
            "ell": config.ell,
            "oracle": oracle.enumerate_spanning_sequences(space, config.ell),
            "formula": bounds.seq_count(space.n, space.k, config.ell),
        })
    if action == "overlaps":
        config.require("ell", "i")
        return Outcome({
            "ell": config.ell,
            "i": config.i,
            "oracle": oracle.count_overlaps(space, config.ell, config.i),
            "bound": bounds.overlap_bound(space.n, space.k, config.ell, config.i),
        })
    if action == "spanned":
        config.require("projection", "p")
        P = parse_projection(config.projection, space)
        return Outcome({"projection": str(P), "dim": P.dim, "probability": oracle.exact_spanned_prob(space, P, config.p_fraction())})

    config.require("projection", "other", "p")
    U = parse_projection(config.projection, space)
    W = parse_projection(config.other, space)
    res = oracle.check_vdbk(space, U, W, config.p_fraction())
    return Outcome({"U": str(U), "W": str(W), "left": res.left, "right": res.right, "holds": res.holds})


def _bounds(config: RunConfig) -> Outcome:
    config.require("n", "k")
    n, k = config.n, config.k
    params = bounds.parameters(n, k)
    p = config.p_fraction() if config.p is not None else params.p_star
    if config.format == "csv":
        table = bounds.phi_table(n, k, p) if config.table == "phi" else bounds.f_table(n, k, p)
        return Outcome(None, table)
    result: Dict[str, Any] = {
        "parameters": params,
        "phi": bounds.phi_table(n, k, p),
        "lower_bound": bounds.lower_bound_report(n, k, p),
    }
    if n >= 4:
        result["second_moment"] = bounds.second_moment_report(n, k, p)
    return Outcome(result)


def _pc(config: RunConfig) -> Outcome:
    space = _space(config)
    res = montecarlo.find_pc(
        space,
        target=config.target,
        rel_tol=config.rel_tol,
        trials_per_probe=config.trials,
        master_seed=config.seed,
        workers=config.workers,
        verbose=config.verbose,
    )
    result = res.to_dict()
    params = bounds.parameters(space.n, space.k)
    result["sandwich"] = [float(params.p_star), float(params.p_upper_star)]
    try:
        result["exact_root"] = oracle.exact_percolation_polynomial(space).root(config.target) if config.target < 1 else None
    except CapabilityError:
        result["exact_root"] = None
    table = pd.DataFrame([e.to_dict() for e in res.probes], columns=montecarlo.SWEEP_COLUMNS)
    return Outcome(result, table)


def _sweep(config: RunConfig) -> Outcome:
    space = _space(config)
    config.require("p_grid")
    res = montecarlo.sweep(
        space,
        montecarlo.parse_grid(config.p_grid),
        trials=config.trials,
        master_seed=config.seed,
        workers=config.workers,
        verbose=config.verbose,
    )
    return Outcome(res.to_dict(), res.table)


def _selftest(config: RunConfig) -> Outcome:
    res = run_selftest(verbose=True)
    table = pd.DataFrame(res.to_dict()["checks"], columns=["name", "status", "detail"])
    return Outcome(res.to_dict(), table, exit_code=0 if res.ok else 3)


def _serve(config: RunConfig) -> Outcome:
    import uvicorn

    backend_dir = Path(__file__).resolve().parents[1] / "backend"
    if str(backend_dir) not in sys.path:
        sys.path.insert(0, str(backend_dir))
    print(f"🔄 Сервис на http://{config.host}:{config.port}", file=sys.stderr)
    uvicorn.run("main:app", host=config.host, port=config.port)
    return Outcome(None)


HANDLERS: Dict[str, Callable[[RunConfig], Outcome]] = {
    "closure": _closure,
    "oracle": _oracle,
    "bounds": _bounds,
    "pc": _pc,
    "sweep": _sweep,
    "selftest": _selftest,
    "serve": _serve,
}


def render(config: RunConfig, outcome: Outcome) -> Optional[str]:
    if outcome.result is None and outcome.table is None:
        return None
    if config.format == "csv":
        if outcome.table is None:
            raise InputDomainError(f"Команда '{config.command}' не выдаёт таблицу CSV")
        return report.to_csv(outcome.table).rstrip("\n")
    if config.format == "text":
        if outcome.text is not None:
            return outcome.text
        doc = report.sanitize(outcome.result)
        if not isinstance(doc, dict):
            return str(doc)
        return "\n".join(f"{key}: {doc[key]}" for key in sorted(doc))
    return report.dumps(report.envelope(config.resolved(), config.seed, outcome.result))


def run(config: RunConfig, out: Optional[Path] = None) -> int:
    outcome = HANDLERS[config.command](config)
    text = render(config, outcome)
    if text is not None:
        report.write_artifact(text, out)
    return outcome.exit_code


# --- разбор аргументов ---

class _Parser(argparse.ArgumentParser):
    """Ошибка разбора аргументов -- ошибка входных данных (код 1), а не код 2."""

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        print(f"❌ {message}", file=sys.stderr)
        raise SystemExit(InputDomainError.exit_code)


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=argparse.SUPPRESS, help="Файл key=value")
    common.add_argument("--out", type=Path, default=argparse.SUPPRESS, help="Куда записать результат")
    common.add_argument("--format", choices=["json", "csv", "text"], default=argparse.SUPPRESS)
    common.add_argument("--verbose", action="store_true", default=argparse.SUPPRESS)
    return common


def _space_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int)
    parser.add_argument("--k", type=int)


def _mc_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--trials", type=int)
    parser.add_argument("--seed", type=int, help="Главное зерно")
    parser.add_argument("--workers", type=int, help="Число процессов (иначе PERC_WORKERS)")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="percolation", parents=[common], description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("closure", parents=[common], help="Замыкание начального множества")
    _space_args(p)
    p.add_argument(
        "--seed-vertices",
        dest="seed_vertices",
        help="Файл (вершина на строке) или список: вершины через ';', цифры через ','",
    )
    p.add_argument("--order", help="Порядок слияния (коды вершин)")
    p.add_argument("--trace", action="store_true", default=None, help="Добавить события слияния")

    p = sub.add_parser("oracle", parents=[common], help="Полный перебор")
    p.add_argument("action", choices=ORACLE_ACTIONS)
    _space_args(p)
    for name in ("ell", "i", "j", "m", "t"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--p")
    p.add_argument("--target", type=float)
    p.add_argument("--projection")
    p.add_argument("--other")

    p = sub.add_parser("bounds", parents=[common], help="Калькулятор оценок")
    _space_args(p)
    p.add_argument("--p")
    p.add_argument("--json", dest="format", action="store_const", const="json")
    p.add_argument("--csv", dest="format", action="store_const", const="csv")
    p.add_argument("--table", choices=["phi", "f"])

    p = sub.add_parser("pc", parents=[common], help="Эмпирический порог бисекцией")
    _space_args(p)
    _mc_args(p)
    p.add_argument("--rel-tol", dest="rel_tol", type=float)
    p.add_argument("--target", type=float)

    p = sub.add_parser("sweep", parents=[common], help="Оценки по сетке p")
    _space_args(p)
    _mc_args(p)
    p.add_argument("--p-grid", dest="p_grid", help="a:b:steps[:log]")
    p.add_argument("--csv", dest="csv_out", type=Path, help="Записать таблицу CSV в файл")

    sub.add_parser("selftest", parents=[common], help="Перекрёстные проверки")

    p = sub.add_parser("serve", parents=[common], help="HTTP-сервис")
    p.add_argument("--host")
    p.add_argument("--port", type=int)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = vars(build_parser().parse_args(argv))
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 1
    command = args.pop("command")
    out = args.pop("out", None)
    config_path = args.pop("config", None)
    csv_out = args.pop("csv_out", None)
    if csv_out is not None:
        args["format"], out = "csv", csv_out
    try:
        file_values = load_config_file(config_path) if config_path else {}
        config = build_run_config(command, file_values, args)
        return run(config, out)
    except PercolationError as e:
        print(f"❌ {e}", file=sys.stderr)
        return e.exit_code


__all__ = ["main", "run", "render", "build_parser", "Outcome", "HANDLERS"]
