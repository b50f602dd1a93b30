from pathlib import Path
from typing import Annotated, Optional

import typer

from ..config import get_settings
from ..schemas.run import Command, RunConfig
from ..services.symtensor import embed
from ..utils.fileio import format_tensor, read_tensor, write_tensor


def embed_command(
    input_path: Annotated[Path, typer.Argument(help="Tensor file to embed.", exists=True, dir_okay=False, readable=True)],
    out: Annotated[Optional[Path], typer.Option("--out", help="Tensor file to write (default: stdout).")] = None,
):
    """Embed a tensor into the next power-of-two order."""
    config = RunConfig(command=Command.embed, input_path=input_path, output_path=out)
    tensor = read_tensor(config.input_path, get_settings().sym_tol)
    embedded = embed(tensor)
    if config.output_path is None:
        typer.echo(format_tensor(embedded), nl=False)
    else:
        write_tensor(config.output_path, embedded)
