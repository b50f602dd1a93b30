import logging
from pathlib import Path
from typing import Annotated, Optional

import typer

from ..config import get_settings
from ..schemas.decomposition import HeadMode
from ..schemas.run import Command, ReportFormat, RunConfig
from ..services.steroid import decompose
from ..utils.fileio import format_decomposition, read_tensor, write_decomposition
from .report import print_report


logger = logging.getLogger(__name__)


def decompose_command(
    input_path: Annotated[Path, typer.Argument(help="Tensor file to decompose.", exists=True, dir_okay=False, readable=True)],
    out: Annotated[Optional[Path], typer.Option("--out", help="Decomposition file to write (default: stdout).")] = None,
    tau: Annotated[Optional[float], typer.Option("--tau", help="Residual tolerance relative to max(1, ||A||_F).")] = None,
    max_iters: Annotated[Optional[int], typer.Option("--max-iters", help="Maximum number of tail passes.")] = None,
    head: Annotated[Optional[HeadMode], typer.Option("--head", help="Head used to form the tail tensor.")] = None,
    report_format: Annotated[ReportFormat, typer.Option("--format", help="Report layout.")] = ReportFormat.rows,
):
    """Decompose a symmetric tensor into symmetric rank-1 terms."""
    config = RunConfig(
        command=Command.decompose,
        input_path=input_path,
        output_path=out,
        tau=tau,
        max_tail_iters=max_iters,
        head=head,
        report_format=report_format,
    )
    tensor = read_tensor(config.input_path, get_settings().sym_tol)
    logger.info(f"decomposing order {tensor.order}, dim {tensor.dim} tensor from {config.input_path}")
    decomposition = decompose(tensor, config.decompose_options())

    # the decomposition owns stdout when no --out is given
    print_report(decomposition, config.report_format, err=config.output_path is None)
    if config.output_path is None:
        typer.echo(format_decomposition(decomposition), nl=False)
    else:
        write_decomposition(config.output_path, decomposition)
