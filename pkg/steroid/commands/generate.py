from pathlib import Path
from typing import Annotated, Optional, Tuple

import numpy as np
import typer

from ..schemas.run import Command, RunConfig
from ..services.symtensor import random_symmetric
from ..utils.fileio import format_tensor, write_tensor


def generate_command(
    dim: Annotated[int, typer.Option("--dim", "-n", help="Dimension n.")],
    order: Annotated[int, typer.Option("--order", "-d", help="Order d.")],
    seed: Annotated[int, typer.Option("--seed", help="Seed of the random generator.")] = 0,
    int_range: Annotated[
        Tuple[int, int],
        typer.Option("--int-range", help="Draw integers uniformly from LOW..HIGH instead of normal floats."),
    ] = (None, None),
    out: Annotated[Optional[Path], typer.Option("--out", help="Tensor file to write (default: stdout).")] = None,
):
    """Generate a random symmetric tensor, one value per permutation orbit."""
    config = RunConfig(
        command=Command.generate,
        dim=dim,
        order=order,
        seed=seed,
        int_range=None if int_range[0] is None else tuple(int_range),
        output_path=out,
    )
    rng = np.random.default_rng(config.seed)
    tensor = random_symmetric(config.order, config.dim, rng, config.int_range)
    if config.output_path is None:
        typer.echo(format_tensor(tensor), nl=False)
    else:
        write_tensor(config.output_path, tensor)
