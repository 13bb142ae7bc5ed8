import json
from pathlib import Path
from typing import Annotated, Callable, List, Optional

import typer
from pydantic import ValidationError
from rich import print as rprint

from bifurcation.constants import LambdaConvention
from shared.constants import ExitCode, OutputFormat
from shared.exceptions import QuantumException
from shared.formatting import write_text

from .constants import ReproduceGroup, TaskKind
from .manager import QuantumManager
from .reproduce import discrepancy_table, summary_table
from .schemas import RunConfig

ConfigOption = Annotated[
    Optional[str],
    typer.Option("--config", "-c", help="JSON config document, or '-' for standard input"),
]
OutOption = Annotated[Optional[Path], typer.Option("--out", help="Output file (default stdout)")]
FormatOption = Annotated[Optional[OutputFormat], typer.Option("--format", help="csv or json")]
TolOption = Annotated[Optional[float], typer.Option("--tol", help="Stationarity tolerance")]
DimOption = Annotated[Optional[int], typer.Option("--dim", help="Number of Fock levels")]
SeedOption = Annotated[Optional[int], typer.Option("--seed", help="Seed for random states")]
WorkersOption = Annotated[Optional[int], typer.Option("--workers", help="Worker threads")]


def error_line(e: QuantumException) -> str:
    """One-line JSON diagnostic for the error stream."""
    return json.dumps(
        {
            "error": ExitCode(e.exit_code).name.lower(),
            "exit_code": int(e.exit_code),
            "message": e.message,
        }
    )


def build_cli(manager: QuantumManager) -> typer.Typer:
    """Create the command-line app around a manager."""

    app = typer.Typer(
        name="dissipative-stationary",
        help="Stationary states of dissipative oscillators and their fold bifurcations.",
        add_completion=False,
        no_args_is_help=True,
    )

    def fail(e: QuantumException) -> None:
        typer.echo(error_line(e), err=True)
        raise typer.Exit(code=int(e.exit_code))

    def execute(
        task: TaskKind, action: Callable[[RunConfig], str], source: Optional[str], **flags
    ) -> None:
        try:
            config = manager.load_config(task, source, **flags)
            write_text(action(config), config.output.path)
        except ValidationError as e:
            fail(QuantumException(f"Invalid input: {e}", ExitCode.CONFIG_ERROR))
        except QuantumException as e:
            fail(e)

    @app.command()
    def report(
        config: ConfigOption = None,
        out: OutOption = None,
        format: FormatOption = None,
        tol: TolOption = None,
        dim: DimOption = None,
        seed: SeedOption = None,
        workers: WorkersOption = None,
        n_max: Annotated[Optional[int], typer.Option("--n-max", help="Highest level scanned")] = None,
    ):
        """Residual of every Fock projector up to n_max."""
        execute(
            TaskKind.REPORT,
            manager.report,
            config,
            out=out,
            format=format,
            tol=tol,
            dim=dim,
            seed=seed,
            workers=workers,
            n_max=n_max,
        )

    @app.command()
    def scan(
        config: ConfigOption = None,
        out: OutOption = None,
        format: FormatOption = None,
        tol: TolOption = None,
        dim: DimOption = None,
        seed: SeedOption = None,
        workers: WorkersOption = None,
        match_tol: Annotated[
            Optional[float], typer.Option("--match-tol", help="Root-to-level tolerance in units of hbar*omega")
        ] = None,
        convention: Annotated[
            Optional[LambdaConvention],
            typer.Option("--lambda-convention", help="Sign of the unfolding parameter"),
        ] = None,
    ):
        """Fold normal form and Fock hits over a parameter grid."""
        execute(
            TaskKind.SCAN,
            manager.scan,
            config,
            out=out,
            format=format,
            tol=tol,
            dim=dim,
            seed=seed,
            workers=workers,
            match_tol=match_tol,
            convention=convention,
        )

    @app.command()
    def evolve(
        config: ConfigOption = None,
        out: OutOption = None,
        format: FormatOption = None,
        tol: TolOption = None,
        dim: DimOption = None,
        seed: SeedOption = None,
        workers: WorkersOption = None,
        t_final: Annotated[Optional[float], typer.Option("--t-final")] = None,
        dt: Annotated[Optional[float], typer.Option("--dt")] = None,
        record_every: Annotated[Optional[int], typer.Option("--record-every")] = None,
        cross_check: Annotated[
            Optional[bool],
            typer.Option("--cross-check/--no-cross-check", help="Compare with the exact propagator"),
        ] = None,
    ):
        """RK4 trajectory with trace, Hermiticity and positivity monitors."""
        execute(
            TaskKind.EVOLVE,
            manager.evolve,
            config,
            out=out,
            format=format,
            tol=tol,
            dim=dim,
            seed=seed,
            workers=workers,
            t_final=t_final,
            dt=dt,
            record_every=record_every,
            cross_check=cross_check,
        )

    @app.command()
    def nullspace(
        config: ConfigOption = None,
        out: OutOption = None,
        format: FormatOption = None,
        tol: TolOption = None,
        dim: DimOption = None,
        seed: SeedOption = None,
        workers: WorkersOption = None,
        svd_tol: Annotated[Optional[float], typer.Option("--svd-tol")] = None,
    ):
        """Hermitian basis of the generator kernel."""
        execute(
            TaskKind.NULLSPACE,
            manager.nullspace,
            config,
            out=out,
            format=format,
            tol=tol,
            dim=dim,
            seed=seed,
            workers=workers,
            svd_tol=svd_tol,
        )

    @app.command()
    def spectrum(
        config: ConfigOption = None,
        out: OutOption = None,
        format: FormatOption = None,
        tol: TolOption = None,
        dim: DimOption = None,
        seed: SeedOption = None,
        workers: WorkersOption = None,
    ):
        """Eigenvalues of the generator."""
        execute(
            TaskKind.SPECTRUM,
            manager.spectrum,
            config,
            out=out,
            format=format,
            tol=tol,
            dim=dim,
            seed=seed,
            workers=workers,
        )

    @app.command("reproduce-paper")
    def reproduce_paper(
        only: Annotated[
            Optional[List[ReproduceGroup]],
            typer.Option("--only", help="Run only these groups (repeatable)"),
        ] = None,
        convention: Annotated[
            LambdaConvention,
            typer.Option("--lambda-convention", help="Sign of the unfolding parameter"),
        ] = LambdaConvention.CORRECTED,
        seed: SeedOption = 0,
    ):
        """Run the acceptance claims and print measured against expected values."""
        try:
            summary = manager.reproduce(only, convention, seed)
        except QuantumException as e:
            fail(e)
        rprint(summary_table(summary))
        if summary.discrepancies:
            rprint(discrepancy_table(summary))
        if not summary.passed:
            failed = len(summary.failures())
            rprint(f"[red]{failed} of {len(summary.results)} claims failed[/red]")
            raise typer.Exit(code=int(ExitCode.ACCEPTANCE_FAILURE))
        rprint(f"[green]all {len(summary.results)} claims hold[/green]")

    return app
