import sys
from pathlib import Path

import click
import typer
from rich.console import Console
from rich.table import Table

from freqalloc_core.config import freqalloc_settings
from freqalloc_core.errors import ConfigError, PlotError
from freqalloc_core.experiments import (
    PLOTTABLE,
    ExperimentConfig,
    PlotStyle,
    emit_plot,
    generate_channels,
    parse_config,
    run_compare,
    run_sweep,
    run_tune,
    serialize_config,
)
from freqalloc_core.logging import setup_logging

app = typer.Typer(
    name="freqalloc",
    help="freqalloc - subband allocation for user-centric cell-free massive MIMO",
    no_args_is_help=True,
)

console = Console()
err_console = Console(stderr=True)

EXIT_CONFIG = 1
EXIT_RUNTIME = 2

ConfigOption = typer.Option(None, "--config", "-c", help="Experiment config file (key = value lines)")
SeedOption = typer.Option(None, "--seed", "-s", help="Run a single seed instead of the configured list")
OutOption = typer.Option(None, "--out", "-o", help="Output directory (default: output_dir from the config)")
WorkersOption = typer.Option(None, "--workers", help="Concurrent seed jobs (default: MAX_WORKERS)")


@app.callback()
def _root(
    log_level: str = typer.Option(freqalloc_settings.LOG_LEVEL, "--log-level", help="DEBUG, INFO, WARNING or ERROR"),
):
    setup_logging(level=log_level, fmt=freqalloc_settings.LOG_FORMAT, rich=freqalloc_settings.LOG_RICH)


def _load(config_path: Path | None, seed: int | None = None) -> ExperimentConfig:
    try:
        config = parse_config(config_path) if config_path is not None else ExperimentConfig()
        if seed is not None:
            config = config.with_seeds([seed])
    except (ConfigError, ValueError) as e:
        err_console.print(f"[red]Config error:[/red] {e}")
        raise typer.Exit(EXIT_CONFIG)
    return config


def _fail(e: Exception) -> None:
    err_console.print(f"[red]Error:[/red] {e}")
    raise typer.Exit(EXIT_RUNTIME)


def _parse_values(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        values = []
    if not values:
        err_console.print(f"[red]Config error:[/red] --values must be a comma-separated list of integers, got {text!r}")
        raise typer.Exit(EXIT_CONFIG)
    return values


@app.command("gen-channels")
def gen_channels(
    config_path: Path | None = ConfigOption,
    seed: int | None = SeedOption,
    out: Path | None = OutOption,
    csv: bool = typer.Option(False, "--csv", help="Also write per-link per-subband gain in dB"),
    ap: int | None = typer.Option(None, "--ap", help="Restrict the gain CSV to links of this AP"),
    links: int = typer.Option(10, "--links", help="Number of strongest UEs of --ap to include"),
):
    """Generate a deployment and its channel tensor (CFR1) plus the cluster map"""
    config = _load(config_path, seed)
    run_seed = config.seeds[0]
    try:
        paths = generate_channels(config, run_seed, out, gains_csv=csv, ap=ap, links=links)
    except Exception as e:
        _fail(e)
    for kind, path in paths.items():
        console.print(f"[green]✓[/green] {kind}: {path}")


@app.command()
def compare(
    config_path: Path | None = ConfigOption,
    seed: int | None = SeedOption,
    out: Path | None = OutOption,
    timing: bool = typer.Option(False, "--timing", help="Record wall_ms (CSV output is then no longer reproducible byte for byte)"),
    workers: int | None = WorkersOption,
):
    """Run AO, RLM and HYM on identical snapshots for every seed"""
    config = _load(config_path, seed)
    try:
        result = run_compare(config, out, timing=timing or None, max_workers=workers)
    except Exception as e:
        _fail(e)

    table = Table(title=f"Compare {config.experiment_id}")
    table.add_column("Solver", style="cyan")
    table.add_column("Runs", justify="right")
    table.add_column("Objective", justify="right", style="green")
    table.add_column("Total SE", justify="right")
    table.add_column("Gini", justify="right")
    for s in result.summaries:
        table.add_row(
            s.solver,
            str(s.runs),
            "-" if s.final_objective_mean is None else f"{s.final_objective_mean:.4f} ± {s.final_objective_std:.4f}",
            "-" if s.final_total_se_mean is None else f"{s.final_total_se_mean:.2f}",
            "-" if s.final_gini_mean is None else f"{s.final_gini_mean:.4f}",
        )
    console.print(table)
    console.print(f"Results in {result.out_dir}")
    for failure in result.failures:
        err_console.print(f"[yellow]Warning:[/yellow] seed {failure.seed} {failure.solver} failed: {failure.error}")
    if result.failures and all(s.runs == 0 for s in result.summaries):
        raise typer.Exit(EXIT_RUNTIME)


@app.command()
def sweep(
    axis: str = typer.Option(..., "--axis", "-a", help="ues or subbands"),
    values: str = typer.Option(..., "--values", "-v", help="Comma-separated values, e.g. 8,12,16"),
    config_path: Path | None = ConfigOption,
    seed: int | None = SeedOption,
    out: Path | None = OutOption,
    timing: bool = typer.Option(False, "--timing", help="Record wall_ms"),
    workers: int | None = WorkersOption,
):
    """Re-run the configured solver over UE or subband counts"""
    if axis not in ("ues", "subbands"):
        err_console.print(f"[red]Config error:[/red] --axis must be 'ues' or 'subbands', got {axis!r}")
        raise typer.Exit(EXIT_CONFIG)
    parsed = _parse_values(values)
    config = _load(config_path, seed)
    try:
        result = run_sweep(config, axis, parsed, out, timing=timing or None, max_workers=workers)
    except ValueError as e:
        err_console.print(f"[red]Config error:[/red] {e}")
        raise typer.Exit(EXIT_CONFIG)
    except Exception as e:
        _fail(e)

    table = Table(title=f"Sweep over {axis}")
    table.add_column(axis, justify="right", style="cyan")
    table.add_column("Seed", justify="right")
    table.add_column("Final total SE", justify="right", style="green")
    table.add_column("Flag")
    for p in result.points:
        se = "-" if p.final_total_se is None else f"{p.final_total_se:.2f}"
        table.add_row(str(p.value), str(p.seed), se, "capacity" if p.capacity_flag else "")
    console.print(table)
    console.print(f"Results in {result.out_dir}")


@app.command()
def tune(
    trials: int | None = typer.Option(None, "--trials", "-n", help="Number of random configurations"),
    config_path: Path | None = ConfigOption,
    seed: int | None = SeedOption,
    out: Path | None = OutOption,
    workers: int | None = WorkersOption,
):
    """Random search over the actor-critic hyperparameters"""
    config = _load(config_path, seed)
    if trials is not None and trials < 1:
        err_console.print("[red]Config error:[/red] --trials must be at least 1")
        raise typer.Exit(EXIT_CONFIG)
    try:
        result = run_tune(config, out, trials=trials, max_workers=workers)
    except Exception as e:
        _fail(e)

    table = Table(title="Random search trials")
    table.add_column("Trial", justify="right", style="cyan")
    table.add_column("Final reward", justify="right", style="green")
    table.add_column("actor_lr", justify="right")
    table.add_column("critic_lr", justify="right")
    table.add_column("gamma", justify="right")
    table.add_column("buffer", justify="right")
    table.add_column("batch", justify="right")
    table.add_column("tau", justify="right")
    table.add_column("noise", justify="right")
    for t in result.trials:
        h = t.hyper
        table.add_row(
            str(t.index + 1),
            f"{t.final_reward:.4f}",
            f"{h.actor_lr:.2e}",
            f"{h.critic_lr:.2e}",
            f"{h.gamma:.3f}",
            str(h.buffer_capacity),
            str(h.batch_size),
            f"{h.tau:.4f}",
            f"{h.noise:.3f}",
        )
    console.print(table)
    console.print(f"[green]Best trial {result.best.index + 1}:[/green] {result.best.hyper.model_dump_json()}")


@app.command()
def plot(
    files: list[Path] = typer.Argument(..., help="Metrics CSV files, one series each"),
    out: Path = typer.Option(Path("plot.svg"), "--out", "-o", help="SVG file to write"),
    metric: str = typer.Option("best_objective", "--metric", "-m", help=f"One of: {', '.join(PLOTTABLE)}"),
    title: str | None = typer.Option(None, "--title", help="Plot title (default: the metric name)"),
):
    """Plot one metric from metrics CSVs as an SVG line chart"""
    missing = [f for f in files if not f.exists()]
    if missing:
        err_console.print(f"[red]Error:[/red] File not found: {missing[0]}")
        raise typer.Exit(EXIT_CONFIG)
    try:
        path = emit_plot(files, out, PlotStyle(metric=metric, title=title))
    except PlotError as e:
        err_console.print(f"[red]Error:[/red] {e}")
        raise typer.Exit(EXIT_CONFIG)
    except Exception as e:
        _fail(e)
    console.print(f"[green]✓[/green] plot: {path}")


@app.command("validate-config")
def validate_config(
    config_path: Path = typer.Argument(..., help="Config file to check"),
    show: bool = typer.Option(False, "--show", help="Print the fully resolved config"),
):
    """Parse a config file and report the first problem, if any"""
    config = _load(config_path)
    console.print(f"[green]✓[/green] {config_path} is valid ({len(config.seeds)} seed(s), solver {config.solver})")
    if show:
        console.print(serialize_config(config), markup=False, highlight=False)


def cli_dispatch(argv: list[str] | None = None) -> int:
    """Run the CLI and map the outcome to 0 success, 1 config or usage error, 2 runtime failure"""
    args = list(sys.argv[1:] if argv is None else argv)
    command = typer.main.get_command(app)
    if not args:
        with click.Context(command, info_name="freqalloc") as ctx:
            console.print(command.get_help(ctx), markup=False, highlight=False)
        return EXIT_CONFIG

    try:
        result = command.main(args=args, prog_name="freqalloc", standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.exceptions.Abort:
        return EXIT_CONFIG
    except click.ClickException as e:
        e.show()
        return EXIT_CONFIG
    return result if isinstance(result, int) else 0


def main() -> None:
    sys.exit(cli_dispatch())


if __name__ == "__main__":
    main()
