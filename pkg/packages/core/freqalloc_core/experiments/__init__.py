from .config import SOLVERS, ClusteringConfig, ExperimentConfig, TrainingConfig, TuningConfig, parse_config, parse_config_text, serialize_config
from .metrics import METRICS_HEADER, PLOTTABLE, MetricsRow, read_csv_rows, rows_from_trace, write_metrics_csv
from .plotting import PlotStyle, emit_plot, nice_ticks
from .runner import (
    CompareResult,
    SweepResult,
    TuneResult,
    build_instance,
    capacity_exceeded,
    generate_channels,
    run_compare,
    run_solver,
    run_sweep,
    run_tune,
)

__all__ = [
    "METRICS_HEADER",
    "PLOTTABLE",
    "SOLVERS",
    "ClusteringConfig",
    "CompareResult",
    "ExperimentConfig",
    "MetricsRow",
    "PlotStyle",
    "SweepResult",
    "TrainingConfig",
    "TuneResult",
    "TuningConfig",
    "build_instance",
    "capacity_exceeded",
    "emit_plot",
    "generate_channels",
    "nice_ticks",
    "parse_config",
    "parse_config_text",
    "read_csv_rows",
    "rows_from_trace",
    "run_compare",
    "run_solver",
    "run_sweep",
    "run_tune",
    "serialize_config",
    "write_metrics_csv",
]
