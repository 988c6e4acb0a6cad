"""Self-contained SVG line plots of MetricsRow CSVs"""

import logging
import math
import xml.etree.ElementTree as ET
from collections import defaultdict
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field

from ..errors import PlotError
from .metrics import PLOTTABLE, read_csv_rows

logger = logging.getLogger(__name__)

SVG_NS = "http://www.w3.org/2000/svg"
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


class PlotStyle(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    metric: str = "best_objective"
    title: str | None = None
    width: int = Field(720, ge=200)
    height: int = Field(440, ge=150)
    ticks: int = Field(5, ge=2, description="Approximate number of tick intervals per axis")


class Series(BaseModel):
    label: str
    points: list[tuple[float, float]]


def nice_step(span: float, intervals: int) -> float:
    """Round span / intervals up to 1, 2, 2.5 or 5 times a power of ten"""
    if span <= 0:
        return 1.0
    raw = span / intervals
    magnitude = 10 ** math.floor(math.log10(raw))
    for factor in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= factor * magnitude * (1 + 1e-12):
            return factor * magnitude
    return 10.0 * magnitude


def nice_ticks(low: float, high: float, intervals: int) -> list[float]:
    if high == low:
        pad = abs(high) * 0.1 or 1.0
        low, high = low - pad, high + pad
    step = nice_step(high - low, intervals)
    start = math.floor(low / step + 1e-9) * step
    stop = math.ceil(high / step - 1e-9) * step
    count = int(round((stop - start) / step))
    return [round(start + i * step, 12) for i in range(count + 1)]


def _format_tick(value: float) -> str:
    text = f"{value:.6g}"
    return "0" if text == "-0" else text


def load_series(path: Path, metric: str) -> Series | None:
    """Average ``metric`` over seeds at each iteration; None when the column is empty"""
    rows = read_csv_rows(path)
    if rows and metric not in rows[0]:
        raise PlotError(f"{path} has no column {metric!r}")
    by_iteration: dict[float, list[float]] = defaultdict(list)
    label = None
    for row in rows:
        label = label or row.get("solver") or None
        if row.get(metric, "") == "":
            continue
        by_iteration[float(row["iteration"])].append(float(row[metric]))
    if not by_iteration:
        return None
    points = [(x, sum(v) / len(v)) for x, v in sorted(by_iteration.items())]
    return Series(label=label or Path(path).stem, points=points)


def emit_plot(csv_paths: list[Path], out_path: Path, style: PlotStyle | None = None) -> Path:
    """
    One polyline per CSV (a circle marker when a series has a single point),
    with axes, tick labels and a legend. Raises PlotError when nothing can be
    plotted.
    """
    style = style or PlotStyle()
    if style.metric not in PLOTTABLE:
        raise PlotError(f"cannot plot {style.metric!r}; choose one of {', '.join(PLOTTABLE)}")
    if not csv_paths:
        raise PlotError("no CSV files given")

    series = [s for s in (load_series(Path(p), style.metric) for p in csv_paths) if s is not None]
    if not series:
        raise PlotError(f"no {style.metric} values found in {len(csv_paths)} file(s)")

    xs = [x for s in series for x, _ in s.points]
    ys = [y for s in series for _, y in s.points]
    x_ticks = nice_ticks(min(xs), max(xs), style.ticks)
    y_ticks = nice_ticks(min(ys), max(ys), style.ticks)

    left, right, top, bottom = 70, 150, 40, 50
    plot_w = style.width - left - right
    plot_h = style.height - top - bottom

    def sx(x: float) -> float:
        return left + (x - x_ticks[0]) / (x_ticks[-1] - x_ticks[0]) * plot_w

    def sy(y: float) -> float:
        return top + plot_h - (y - y_ticks[0]) / (y_ticks[-1] - y_ticks[0]) * plot_h

    svg = ET.Element(
        "svg",
        {
            "xmlns": SVG_NS,
            "version": "1.1",
            "width": str(style.width),
            "height": str(style.height),
            "viewBox": f"0 0 {style.width} {style.height}",
            "font-family": "sans-serif",
            "font-size": "11",
        },
    )
    ET.SubElement(svg, "rect", {"x": "0", "y": "0", "width": str(style.width), "height": str(style.height), "fill": "white"})
    title = style.title or style.metric
    ET.SubElement(svg, "text", {"x": f"{left + plot_w / 2:.2f}", "y": "22", "text-anchor": "middle", "font-size": "14"}).text = title

    axes = ET.SubElement(svg, "g", {"class": "axes", "stroke": "black", "fill": "none"})
    ET.SubElement(axes, "rect", {"x": str(left), "y": str(top), "width": str(plot_w), "height": str(plot_h)})

    for value in x_ticks:
        x = sx(value)
        ET.SubElement(axes, "line", {"x1": f"{x:.2f}", "y1": str(top + plot_h), "x2": f"{x:.2f}", "y2": str(top + plot_h + 5)})
        label = ET.SubElement(svg, "text", {"class": "xtick", "x": f"{x:.2f}", "y": str(top + plot_h + 18), "text-anchor": "middle"})
        label.text = _format_tick(value)
    for value in y_ticks:
        y = sy(value)
        ET.SubElement(axes, "line", {"x1": str(left - 5), "y1": f"{y:.2f}", "x2": str(left), "y2": f"{y:.2f}"})
        label = ET.SubElement(svg, "text", {"class": "ytick", "x": str(left - 8), "y": f"{y + 4:.2f}", "text-anchor": "end"})
        label.text = _format_tick(value)

    ET.SubElement(svg, "text", {"x": f"{left + plot_w / 2:.2f}", "y": str(style.height - 10), "text-anchor": "middle"}).text = "iteration"
    ET.SubElement(
        svg,
        "text",
        {"x": "16", "y": f"{top + plot_h / 2:.2f}", "text-anchor": "middle", "transform": f"rotate(-90 16 {top + plot_h / 2:.2f})"},
    ).text = style.metric

    legend = ET.SubElement(svg, "g", {"class": "legend"})
    for i, s in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        if len(s.points) == 1:
            x, y = s.points[0]
            ET.SubElement(svg, "circle", {"cx": f"{sx(x):.2f}", "cy": f"{sy(y):.2f}", "r": "4", "fill": color})
        else:
            coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in s.points)
            ET.SubElement(svg, "polyline", {"points": coords, "fill": "none", "stroke": color, "stroke-width": "1.5"})
        ly = top + 14 + 18 * i
        lx = left + plot_w + 14
        ET.SubElement(legend, "line", {"x1": str(lx), "y1": str(ly), "x2": str(lx + 20), "y2": str(ly), "stroke": color, "stroke-width": "2"})
        ET.SubElement(legend, "text", {"x": str(lx + 26), "y": str(ly + 4)}).text = s.label

    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    ET.ElementTree(svg).write(out_path, encoding="utf-8", xml_declaration=True)
    logger.info("Wrote %s plot with %d series to %s", style.metric, len(series), out_path)
    return out_path
