"""CSV result tables, plot series and closed-form complexity tables."""

import asyncio
import csv
import logging
from collections.abc import Iterable, Sequence
from dataclasses import asdict, dataclass, fields
from math import prod
from pathlib import Path
from typing import Any

from pytmmse.exceptions import ConfigurationError
from pytmmse.metrics import ComplexityModel

from .campaign import ResultRow
from .config import balanced_factorization

_LOGGER = logging.getLogger(__name__)

K_SWEEP = tuple(range(100, 1001, 100))
N_SWEEP = (64, 128, 256, 512, 1024, 2048, 4096)


def format_value(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def _write_rows(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(header)
            writer.writerows([format_value(v) for v in row] for row in rows)
    except OSError as error:
        raise OSError(error.errno, f"Cannot write {path}: {error.strerror}") from error
    _LOGGER.info("Wrote %s", path)
    return path


def emit_csv(rows: Sequence[ResultRow], path: Path) -> Path:
    """One line per (sweep value, equalizer), floats with 6 significant digits."""
    if not rows:
        raise ValueError(f"No result rows to write to {path}")
    ordered = sorted(rows, key=lambda row: (row.sweep_value, row.equalizer))
    names = ResultRow.field_names()
    return _write_rows(path, names, ([getattr(r, n) for n in names] for r in ordered))


def read_csv(path: Path) -> list[ResultRow]:
    """Parse a file written by ``emit_csv`` back into rows."""
    types = {f.name: f.type for f in fields(ResultRow)}
    with Path(path).open(newline="", encoding="utf-8") as f:
        return [
            ResultRow(**{k: _cast(types[k], v) for k, v in record.items()})
            for record in csv.DictReader(f)
        ]


def _cast(kind: Any, raw: str) -> Any:
    if kind is bool:
        return raw == "True"
    return kind(raw) if kind in (int, float) else raw


def emit_plot_data(rows: Sequence[ResultRow], path: Path, y: str = "sinr_db") -> Path:
    """(x, series, y) triples; series is the equalizer id."""
    if y not in ResultRow.field_names():
        raise ValueError(f"Allowed y: {ResultRow.field_names()} But was: {y}")
    if not rows:
        raise ValueError(f"No result rows to write to {path}")
    ordered = sorted(rows, key=lambda row: (row.equalizer, row.sweep_value))
    return _write_rows(
        path,
        ("x", "series", "y"),
        ((r.sweep_value, r.equalizer, getattr(r, y)) for r in ordered),
    )


async def emit_results(
    rows: Sequence[ResultRow], directory: Path, name: str, plot: bool = True
) -> list[Path]:
    """Write ``<name>.csv`` and ``<name>.plot.csv`` off the event loop."""
    loop = asyncio.get_running_loop()
    written = [await loop.run_in_executor(None, emit_csv, rows, directory / f"{name}.csv")]
    if plot:
        written.append(
            await loop.run_in_executor(
                None, emit_plot_data, rows, directory / f"{name}.plot.csv"
            )
        )
    return written


@dataclass(frozen=True)
class ComplexityPoint:
    antennas: int
    samples: int
    dims: tuple[int, ...]
    rank: int
    iterations: int = 2

    def __post_init__(self) -> None:
        if prod(self.dims) != self.antennas:
            raise ConfigurationError(f"Dims {self.dims} do not factor N={self.antennas}")

    @property
    def order(self) -> int:
        return len(self.dims)


@dataclass(frozen=True)
class ComplexityRow:
    table: str
    antennas: int
    samples: int
    order: int
    rank: int
    iterations: int
    dims: str
    count_mmse: int
    count_lr_tmmse: int

    @property
    def ratio(self) -> float:
        return self.count_lr_tmmse / self.count_mmse


def emit_complexity_table(
    points: Iterable[ComplexityPoint],
    table: str = "",
    *,
    quadratic_solve_term: bool = False,
) -> list[ComplexityRow]:
    """Closed-form product counts only; nothing is simulated."""
    model = ComplexityModel(quadratic_solve_term)
    return [
        ComplexityRow(
            table,
            p.antennas,
            p.samples,
            p.order,
            p.rank,
            p.iterations,
            "x".join(map(str, p.dims)),
            model.mmse(p.antennas, p.samples),
            model.lr_tmmse(p.dims, p.order, p.rank, p.iterations, p.samples),
        )
        for p in points
    ]


def complexity_sweeps(iterations: int = 2) -> dict[str, list[ComplexityPoint]]:
    """Training-length sweep at N=512 over D, and array-size sweep at D=3 over R."""
    k_sweep = [
        ComplexityPoint(512, k, balanced_factorization(512, order), 3, iterations)
        for order in range(2, 6)
        for k in K_SWEEP
    ]
    n_sweep = [
        ComplexityPoint(n, 600, balanced_factorization(n, 3), rank, iterations)
        for rank in range(1, 5)
        for n in N_SWEEP
    ]
    return {"k-sweep": k_sweep, "n-sweep": n_sweep}


def complexity_tables(
    iterations: int = 2, *, quadratic_solve_term: bool = False
) -> list[ComplexityRow]:
    return [
        row
        for name, points in complexity_sweeps(iterations).items()
        for row in emit_complexity_table(
            points, name, quadratic_solve_term=quadratic_solve_term
        )
    ]


def emit_complexity_csv(rows: Sequence[ComplexityRow], path: Path) -> Path:
    if not rows:
        raise ValueError(f"No complexity rows to write to {path}")
    header = [f.name for f in fields(ComplexityRow)]
    return _write_rows(path, header, (list(asdict(r).values()) for r in rows))
