import logging
from pathlib import Path
from typing import Annotated, Optional

import typer

from ..config import get_settings
from ..exceptions import VerificationError
from ..schemas.run import Command, RunConfig
from ..services.oracle import verify_decomposition
from ..services.symtensor import frobenius_norm
from ..utils.fileio import read_decomposition, read_tensor


logger = logging.getLogger(__name__)


def verify_command(
    tensor_path: Annotated[Path, typer.Argument(help="Original tensor file.", exists=True, dir_okay=False, readable=True)],
    decomposition_path: Annotated[Path, typer.Argument(help="Decomposition file to check.", exists=True, dir_okay=False, readable=True)],
    tau: Annotated[Optional[float], typer.Option("--tau", help="Tolerance relative to max(1, ||A||_F).")] = None,
):
    """Recompute a decomposition entry by entry and compare it with the tensor."""
    settings = get_settings()
    config = RunConfig(
        command=Command.verify,
        input_path=tensor_path,
        decomposition_path=decomposition_path,
        tau=tau,
    )
    tensor = read_tensor(config.input_path, settings.sym_tol)
    decomposition = read_decomposition(config.decomposition_path)
    report = verify_decomposition(tensor, decomposition)

    threshold = (config.tau or settings.tau) * max(1.0, frobenius_norm(tensor))
    typer.echo(
        f"reconstruction_error={report.reconstruction_error:.6e} threshold={threshold:.6e} "
        f"symmetry_violation={report.max_symmetry_violation:.3e} "
        f"rank_bound_holds={str(report.monomial_rank_bound_holds).lower()}"
    )
    if report.reconstruction_error > threshold:
        raise VerificationError(
            f"reconstruction error {report.reconstruction_error:.6e} exceeds {threshold:.6e}"
        )
    logger.info("decomposition verified")
