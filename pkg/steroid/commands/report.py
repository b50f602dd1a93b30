import typer
from rich.console import Console
from rich.table import Table

from ..schemas.decomposition import Decomposition
from ..schemas.run import ReportFormat


def report_rows(dec: Decomposition) -> list[str]:
    rows = [
        f"iter={record.iteration} cols={record.columns} rank={record.rank} "
        f"residual={record.residual:.6e} time_s={record.elapsed:.4f}"
        for record in dec.report.records
    ]
    status = "converged" if dec.converged else "unconverged"
    rows.append(f"status={status} terms={dec.rank} residual={dec.residual_norm:.6e}")
    return rows


def print_report(dec: Decomposition, report_format: ReportFormat, err: bool = False) -> None:
    if report_format == ReportFormat.rows:
        for row in report_rows(dec):
            typer.echo(row, err=err)
        return

    table = Table(title=f"STEROID order {dec.order}, dim {dec.dim}, R_max {dec.report.r_max}")
    for column in ("iter", "pure powers", "cols", "rank", "residual", "head asym.", "time [s]"):
        table.add_column(column, justify="right")
    for record in dec.report.records:
        table.add_row(
            str(record.iteration),
            str(record.pure_powers),
            str(record.columns),
            str(record.rank),
            f"{record.residual:.3e}",
            f"{record.head_asymmetry:.1e}",
            f"{record.elapsed:.3f}",
        )
    console = Console(stderr=err)
    console.print(table)
    status = "converged" if dec.converged else "[bold red]unconverged[/]"
    console.print(f"{status}: {dec.rank} terms, residual {dec.residual_norm:.6e}")
