import functools
import logging
from typing import Annotated, Optional

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler

from .commands.decompose import decompose_command
from .commands.embed import embed_command
from .commands.generate import generate_command
from .commands.verify import verify_command
from .config import get_settings
from .exceptions import EXIT_INPUT, SteroidError


# Logger
logger = logging.getLogger(__name__)

# App instance
app = typer.Typer(
    help="Symmetric tensor decomposition by recursive eigendecompositions and least squares.",
    no_args_is_help=True,
    add_completion=False,
)


@app.callback()
def configure(
    log_level: Annotated[Optional[str], typer.Option("--log-level", help="Logging level.")] = None,
):
    logging.basicConfig(
        level=(log_level or get_settings().log_level).upper(),
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


# Custom error handler: library errors become exit codes
def exception_handler(command):
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except SteroidError as exc:
            logger.error(f"{command.__name__} failed: {exc.detail}")
            typer.echo(f"error: {exc.detail}", err=True)
            raise typer.Exit(code=exc.exit_code)
        except ValidationError as exc:
            detail = "; ".join(error["msg"] for error in exc.errors())
            logger.error(f"{command.__name__} rejected its options: {detail}")
            typer.echo(f"error: {detail}", err=True)
            raise typer.Exit(code=EXIT_INPUT)

    return wrapper


# Commands
app.command("decompose")(exception_handler(decompose_command))
app.command("embed")(exception_handler(embed_command))
app.command("verify")(exception_handler(verify_command))
app.command("generate")(exception_handler(generate_command))
