"""
Command-line interface

Commands:
    bench-fib   FIB lookup/insertion microbenchmark
    run         one scenario, CSV output and optional packet trace
    gen-topo    generate (or expand) a topology and write it as CSV
    sweep       paired-strategy sweep: fib-vs-C, fib-vs-P, app-vs-k

Errors map to exit codes through `app.core.exceptions.exit_code_for`; CSV files
are written only after every run of a command has completed.

Usage:
    $ python -m app.cli run --config fig9.scn --strategy self-learning --out results/fail
    $ python -m app.cli sweep fib-vs-C --values 10,100 --seeds 5 --workers 4 --out results/fib
"""

import logging
from pathlib import Path
from typing import Callable, Dict, List, Optional

import pandas as pd
import typer
from rich.console import Console
from rich.table import Table

from app.core.config import settings
from app.core.config_loader import build_scenario, get_app_config, load_scenario
from app.core.exceptions import ConfigurationError, exit_code_for, to_error_response
from app.framework.experiments.sweep import EXPERIMENTS, summarize, sweep
from app.framework.fib.benchmark import bench_fib, lookup_ratio
from app.framework.sim.runner import run
from app.framework.sim.topology import build_topology
from app.main import setup_logging
from app.schemas.scenario import ScenarioConfig

logger = logging.getLogger(__name__)

app = typer.Typer(add_completion=False, no_args_is_help=True, help="Approximate-forwarding NDN simulator")
console = Console(stderr=True)

# bundled scenario per experiment when --config is not given
DEFAULT_SWEEP_SCENARIOS: Dict[str, str] = {
    "fib-vs-C": "fig5.scn",
    "fib-vs-P": "fig6.scn",
    "app-vs-k": "fig8.scn",
}


# ============================================================================
# Helpers
# ============================================================================

def _fail(exc: BaseException) -> None:
    response = to_error_response(exc)
    console.print(f"[bold red]{response.error_code}[/bold red]: {response.message}")
    for key, value in response.details.items():
        console.print(f"  {key}: {value}")
    raise typer.Exit(code=exit_code_for(exc))


def _guarded(body: Callable[[], None]) -> None:
    try:
        body()
    except typer.Exit:
        raise
    except Exception as exc:
        _fail(exc)


def _int_list(text: Optional[str], option: str) -> Optional[List[int]]:
    if text is None:
        return None
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ConfigurationError(f"{option} must be a comma-separated list of integers", details={option: text}) from e


def _output_dir(out: Optional[Path]) -> Path:
    directory = out or Path(settings.OUTPUT_DIR)
    directory.mkdir(parents=True, exist_ok=True)
    return directory


def _write_frames(directory: Path, frames: Dict[str, pd.DataFrame]) -> None:
    """Write every frame; called only once all of them exist"""
    float_format = get_app_config().output.float_format
    for filename, frame in frames.items():
        path = directory / filename
        frame.to_csv(path, index=False, float_format=float_format)
        console.print(f"wrote [cyan]{path}[/cyan] ({len(frame)} rows)")


def _scenario(config: Optional[str], overrides: List[str], strategy: Optional[str], seed: Optional[int]) -> ScenarioConfig:
    extra = list(overrides)
    if strategy is not None:
        extra.append(f"strategy={strategy}")
    if seed is not None:
        extra.append(f"seed={seed}")
    if config is None:
        return build_scenario({"name": "default", "seed": settings.DEFAULT_SEED}, extra)
    return load_scenario(config, extra)


def _print_mapping(title: str, values: Dict[str, object]) -> None:
    table = Table(title=title)
    table.add_column("metric")
    table.add_column("value", justify="right")
    for key, value in values.items():
        table.add_row(key, str(value))
    console.print(table)


@app.callback()
def _root(
    log_level: Optional[str] = typer.Option(None, "--log-level", help="DEBUG, INFO, WARNING, ERROR"),
) -> None:
    setup_logging(log_level)


# ============================================================================
# Commands
# ============================================================================

@app.command("bench-fib")
def bench_fib_command(
    sizes: Optional[str] = typer.Option(None, help="Comma-separated trie sizes, e.g. 1000,10000"),
    prefix_len: Optional[int] = typer.Option(None, "--prefix-len", help="Maximum prefix length in characters"),
    repetitions: Optional[int] = typer.Option(None, help="Repetitions per batch"),
    batch: Optional[int] = typer.Option(None, help="Operations per timed batch"),
    seed: Optional[int] = typer.Option(None, help="Prefix generator seed"),
    out: Optional[Path] = typer.Option(None, help="CSV file (default OUTPUT_DIR/bench_fib.csv)"),
) -> None:
    """Time lookups and insertions on character tries of increasing size"""

    def body() -> None:
        defaults = get_app_config().benchmark
        frame = bench_fib(
            _int_list(sizes, "sizes") or defaults.sizes,
            prefix_len=prefix_len or defaults.prefix_len,
            repetitions=repetitions or defaults.repetitions,
            batch=batch or defaults.batch,
            seed=settings.DEFAULT_SEED if seed is None else seed,
            progress=True,
        )
        target = out or Path(settings.OUTPUT_DIR) / "bench_fib.csv"
        target.parent.mkdir(parents=True, exist_ok=True)
        _write_frames(target.parent, {target.name: frame})
        measured = sorted(frame["trie_size"].unique())
        if len(measured) >= 2:
            ratio = lookup_ratio(frame, int(measured[-2]), int(measured[-1]))
            console.print(f"lookup({measured[-2]}) / lookup({measured[-1]}) = {ratio:.3f}")

    _guarded(body)


@app.command("run")
def run_command(
    config: str = typer.Option(..., "--config", help="Scenario file (.scn)"),
    strategy: Optional[str] = typer.Option(None, help="approximate (alias samba) or self-learning"),
    seed: Optional[int] = typer.Option(None, help="Overrides the scenario seed"),
    out: Optional[Path] = typer.Option(None, help="Output directory"),
    trace: bool = typer.Option(False, "--trace", help="Also write the packet trace"),
    overrides: List[str] = typer.Option([], "--set", help="Scenario override key=value (dotted keys allowed)"),
) -> None:
    """Run one scenario"""

    def body() -> None:
        scenario = _scenario(config, overrides, strategy, seed)
        report = run(scenario, trace=trace)
        frames = {
            "fib_size.csv": report.fib_frame(),
            "overhead.csv": report.overhead_frame(),
            "app.csv": report.app_frame(),
            "throughput.csv": report.throughput_frame(),
        }
        if trace and report.trace is not None:
            frames["trace.csv"] = report.trace
        _write_frames(_output_dir(out), frames)
        _print_mapping(f"{scenario.name} ({scenario.strategy}, seed {report.seed})", report.summary())

    _guarded(body)


@app.command("gen-topo")
def gen_topo_command(
    config: Optional[str] = typer.Option(None, "--config", help="Scenario file; simulation defaults when omitted"),
    seed: Optional[int] = typer.Option(None, help="Topology seed"),
    out: Optional[Path] = typer.Option(None, help="Output directory"),
    overrides: List[str] = typer.Option([], "--set", help="Scenario override key=value"),
) -> None:
    """Generate a topology and write its links and applications"""

    def body() -> None:
        scenario = _scenario(config, overrides, None, seed)
        topology = build_topology(scenario, scenario.seed)
        _write_frames(_output_dir(out), {"links.csv": topology.links_frame(), "apps.csv": topology.apps_frame()})
        _print_mapping(
            f"{scenario.name} topology (seed {scenario.seed})",
            {
                "core_routers": len(topology.core_routers()),
                "edge_routers": len(topology.edge_routers()),
                "adjacencies": topology.graph.number_of_edges(),
                "consumers": len(topology.consumers),
                "producers": len(topology.producers),
                "total_nodes": topology.total_nodes,
                "mean_path_hops": round(topology.mean_path_hops(), 3),
            },
        )

    _guarded(body)


@app.command("sweep")
def sweep_command(
    experiment: str = typer.Argument(..., help=f"One of {', '.join(EXPERIMENTS)}"),
    config: Optional[str] = typer.Option(None, "--config", help="Base scenario; bundled one when omitted"),
    values: Optional[str] = typer.Option(None, help="Comma-separated swept values"),
    seeds: Optional[int] = typer.Option(None, help="Seeds per value"),
    seed: Optional[int] = typer.Option(None, help="First seed"),
    workers: Optional[int] = typer.Option(None, help="Worker processes (default SWEEP_WORKERS)"),
    out: Optional[Path] = typer.Option(None, help="Output directory"),
    overrides: List[str] = typer.Option([], "--set", help="Scenario override key=value"),
) -> None:
    """Run both strategies over a swept parameter and write paired CSVs"""

    def body() -> None:
        if experiment not in EXPERIMENTS:
            raise ConfigurationError(
                f"Unknown experiment '{experiment}'",
                details={"available": ", ".join(EXPERIMENTS)},
            )
        defaults = get_app_config().sweep
        base = _scenario(config or DEFAULT_SWEEP_SCENARIOS[experiment], overrides, None, None)
        swept = _int_list(values, "values") or defaults.values.get(experiment)
        if not swept:
            raise ConfigurationError("No values to sweep", details={"experiment": experiment})
        first = settings.DEFAULT_SEED if seed is None else seed
        count = defaults.seeds if seeds is None else seeds

        result = sweep(
            experiment,
            base,
            swept,
            range(first, first + count),
            workers=workers or settings.SWEEP_WORKERS,
        )
        _write_frames(
            _output_dir(out),
            {
                "fib_size.csv": result.fib_csv_frame(),
                "overhead.csv": result.overhead_csv_frame(),
                "app.csv": result.app,
                "ratios.csv": summarize(result),
            },
        )
        table = Table(title=f"{experiment} improvement ratios (seed mean)")
        for column in ("value", "metric", "scope", "ratio"):
            table.add_column(column)
        for row in summarize(result).itertuples(index=False):
            table.add_row(str(row.value), row.metric, row.scope, f"{row.ratio:.3f}")
        console.print(table)

    _guarded(body)


if __name__ == "__main__":
    app()
