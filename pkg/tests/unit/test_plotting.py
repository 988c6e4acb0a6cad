"""Unit tests for metrics CSV output and SVG plotting."""

import xml.etree.ElementTree as ET

import pytest

from freqalloc_core.errors import PlotError
from freqalloc_core.experiments import METRICS_HEADER, PlotStyle, emit_plot, nice_ticks, read_csv_rows, rows_from_trace, write_metrics_csv
from freqalloc_core.experiments.metrics import format_value, read_comments
from freqalloc_core.optim import TraceRecord, TrainTrace

SVG = "{http://www.w3.org/2000/svg}"


def _trace(solver: str, values: list[float]) -> TrainTrace:
    trace = TrainTrace(solver=solver)
    for i, v in enumerate(values, start=1):
        trace.append(TraceRecord(iteration=i, best_objective=v, objective=v, total_se=2 * v, wall_ms=1.5))
    return trace


def _csv(tmp_path, solver: str, values: list[float]):
    return write_metrics_csv(tmp_path / f"{solver}.csv", rows_from_trace("exp", 0, _trace(solver, values)), ["seed=0"])


def test_metrics_header_order():
    assert METRICS_HEADER == [
        "experiment_id",
        "solver",
        "seed",
        "iteration",
        "best_objective",
        "total_se_bps_hz",
        "gini",
        "lambda_min",
        "c_violations",
        "actor_loss",
        "critic_loss",
        "wall_ms",
    ]


def test_metrics_csv_contents(tmp_path):
    path = _csv(tmp_path, "ao", [0.5, 0.75])
    lines = path.read_text().splitlines()
    assert lines[0] == "# seed=0"
    assert lines[1] == ",".join(METRICS_HEADER)
    assert lines[2] == "exp,ao,0,1,0.5,1,,,,,,"
    assert read_comments(path) == ["seed=0"]
    rows = read_csv_rows(path)
    assert [r["best_objective"] for r in rows] == ["0.5", "0.75"]


def test_wall_time_only_with_timing():
    trace = _trace("ao", [1.0])
    assert rows_from_trace("e", 0, trace)[0].wall_ms is None
    assert rows_from_trace("e", 0, trace, timing=True)[0].wall_ms == 1.5


def test_trace_rejects_decreasing_best():
    trace = _trace("ao", [1.0])
    with pytest.raises(ValueError):
        trace.append(TraceRecord(iteration=2, best_objective=0.5, objective=0.5))


def test_format_value():
    assert format_value(None) == ""
    assert format_value(0.1 + 0.2) == "0.3"
    assert format_value(3) == "3"


def test_nice_ticks():
    assert nice_ticks(0, 10, 5) == [0, 2, 4, 6, 8, 10]
    ticks = nice_ticks(0.13, 0.87, 4)
    assert ticks[0] <= 0.13 and ticks[-1] >= 0.87
    assert len(nice_ticks(1.0, 1.0, 5)) >= 2


def test_three_series_three_polylines(tmp_path):
    paths = [_csv(tmp_path, name, [0.1, 0.2, 0.4]) for name in ("ao", "rlm", "hym")]
    out = emit_plot(paths, tmp_path / "plot.svg", PlotStyle(metric="best_objective", title="Compare"))
    root = ET.parse(out).getroot()
    assert len(root.findall(f".//{SVG}polyline")) == 3
    labels = [t.text for t in root.iter(f"{SVG}text")]
    assert "Compare" in labels
    assert {"ao", "rlm", "hym"} <= set(labels)


def test_single_point_renders_marker(tmp_path):
    out = emit_plot([_csv(tmp_path, "ao", [0.3])], tmp_path / "one.svg")
    root = ET.parse(out).getroot()
    assert len(root.findall(f".//{SVG}circle")) == 1
    assert not root.findall(f".//{SVG}polyline")


def test_empty_input_is_an_error(tmp_path):
    with pytest.raises(PlotError):
        emit_plot([], tmp_path / "x.svg")
    empty = write_metrics_csv(tmp_path / "empty.csv", [])
    with pytest.raises(PlotError):
        emit_plot([empty], tmp_path / "x.svg")


def test_metric_must_be_plottable(tmp_path):
    with pytest.raises(PlotError):
        emit_plot([_csv(tmp_path, "ao", [0.1, 0.2])], tmp_path / "x.svg", PlotStyle(metric="solver"))


def test_empty_metric_column_is_an_error(tmp_path):
    with pytest.raises(PlotError):
        emit_plot([_csv(tmp_path, "ao", [0.1, 0.2])], tmp_path / "x.svg", PlotStyle(metric="critic_loss"))
