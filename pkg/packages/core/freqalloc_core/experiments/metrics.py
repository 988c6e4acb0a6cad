import csv
import math
from collections.abc import Iterable
from pathlib import Path

from pydantic import BaseModel, ConfigDict

from ..optim.trace import TraceRecord, TrainTrace


class MetricsRow(BaseModel):
    """One CSV row per (solver, seed, iteration); the field order is the header order"""

    model_config = ConfigDict(frozen=True)

    experiment_id: str
    solver: str
    seed: int
    iteration: int
    best_objective: float
    total_se_bps_hz: float | None = None
    gini: float | None = None
    lambda_min: float | None = None
    c_violations: int | None = None
    actor_loss: float | None = None
    critic_loss: float | None = None
    wall_ms: float | None = None

    @classmethod
    def from_record(cls, experiment_id: str, solver: str, seed: int, record: TraceRecord, timing: bool = False):
        return cls(
            experiment_id=experiment_id,
            solver=solver,
            seed=seed,
            iteration=record.iteration,
            best_objective=record.best_objective,
            total_se_bps_hz=record.total_se,
            gini=record.gini,
            lambda_min=record.lambda_min,
            c_violations=record.c_violations,
            actor_loss=record.actor_loss,
            critic_loss=record.critic_loss,
            wall_ms=record.wall_ms if timing else None,
        )


METRICS_HEADER = list(MetricsRow.model_fields)
PLOTTABLE = ("best_objective", "total_se_bps_hz", "gini", "lambda_min", "c_violations", "actor_loss", "critic_loss", "wall_ms")


def rows_from_trace(experiment_id: str, seed: int, trace: TrainTrace, timing: bool = False) -> list[MetricsRow]:
    return [MetricsRow.from_record(experiment_id, trace.solver, seed, r, timing) for r in trace.records]


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isinf(value) or math.isnan(value):
            return repr(value)
        return f"{value:.12g}"
    return str(value)


def write_metrics_csv(path: Path, rows: Iterable[MetricsRow], comments: Iterable[str] = ()) -> Path:
    """Comment lines (``# ...``) first, then the header, then one line per row"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        for comment in comments:
            f.write(f"# {comment}\n")
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(METRICS_HEADER)
        for row in rows:
            writer.writerow([format_value(getattr(row, name)) for name in METRICS_HEADER])
    return path


def write_table_csv(path: Path, header: list[str], records: Iterable[Iterable], comments: Iterable[str] = ()) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        for comment in comments:
            f.write(f"# {comment}\n")
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for record in records:
            writer.writerow([format_value(v) for v in record])
    return path


def read_csv_rows(path: Path) -> list[dict[str, str]]:
    """Rows of a CSV written by this package, skipping ``#`` comment lines"""
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as f:
        lines = [line for line in f if not line.startswith("#")]
    return list(csv.DictReader(lines))


def read_comments(path: Path) -> list[str]:
    with open(Path(path), encoding="utf-8") as f:
        return [line[2:].rstrip("\n") for line in f if line.startswith("# ")]
